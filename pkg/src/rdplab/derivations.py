"""Vector fields on charts, their pull-back through blow-ups, and liftability.

A derivation ``a d/dx + b d/dy + c d/dz`` of k[x,y,z]/(f) lifts to the
minimal resolution iff in every blow-up chart the pulled-back coefficients
``(A_k - x_k' A_i) / x_i'`` are regular on the strict transform.  Regularity
reduces to exact divisibility on the exceptional plane, so the whole test is
a linear map (the *obstruction*) of the coefficient vector.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import GF
from .local import Echelon, Inconclusive, derivation_space, ideal_membership, monomial_fields
from .poly import BASE_VARS, LaurentPoly, MultiPoly, parse_poly
from .resolution import Chart, ResolutionTree, resolve

POLE_CAP = 8


class PoleCapError(ArithmeticError):
    pass


class Derivation:
    """``sum coeffs[k] * d/d(vars[k])`` with Laurent coefficients in one exceptional variable."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs, var=None):
        coeffs = [LaurentPoly.of(c, var) for c in coeffs]
        if len(coeffs) != 3:
            raise ValueError("a derivation needs three coefficients")
        for c in coeffs:
            if c.pole_order and var is None:
                var = c.var
        ring = coeffs[0].base
        for c in coeffs[1:]:
            ring._check(c.base)
        if any(c.pole_order > POLE_CAP for c in coeffs):
            raise PoleCapError(f"pole order beyond cap {POLE_CAP}")
        self.coeffs = tuple(LaurentPoly(c.base, var, c.pole_order) for c in coeffs)
        self.var = var

    # --- constructors -----------------------------------------------------
    @classmethod
    def from_polys(cls, a, b, c):
        return cls((a, b, c))

    @classmethod
    def parse(cls, texts, p, vars=BASE_VARS):
        """From three polynomial strings, e.g. ``("y", "-x", "0")``."""
        return cls(tuple(parse_poly(t, p, vars) for t in texts))

    @classmethod
    def partial(cls, name, F: GF, vars=BASE_VARS):
        k = vars.index(name)
        zero = MultiPoly.zero(F, vars)
        one = MultiPoly.const(1, F, vars)
        return cls(tuple(one if j == k else zero for j in range(3)))

    @classmethod
    def from_combination(cls, fields, comb, F: GF, vars=BASE_VARS):
        """The field sum comb[j] * fields[j] for monomial fields (monomial, direction)."""
        terms = [{}, {}, {}]
        for j, c in comb.items():
            mono, i = fields[j]
            terms[i][mono] = F.add(terms[i].get(mono, 0), c)
        return cls(tuple(MultiPoly(F, vars, t) for t in terms))

    # --- queries ----------------------------------------------------------
    @property
    def field(self):
        return self.coeffs[0].base.field

    @property
    def vars(self):
        return self.coeffs[0].base.vars

    def is_polynomial(self):
        return all(c.is_polynomial() for c in self.coeffs)

    @property
    def pole_order(self):
        return max(c.pole_order for c in self.coeffs)

    def polys(self):
        return tuple(c.to_poly() for c in self.coeffs)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def degree(self):
        return max(c.base.degree() for c in self.coeffs)

    # --- algebra ----------------------------------------------------------
    def apply(self, f: MultiPoly) -> LaurentPoly:
        """D(f) = a f_x + b f_y + c f_z."""
        acc = LaurentPoly(MultiPoly.zero(f.field, f.vars), self.var)
        for c, v in zip(self.coeffs, self.vars):
            acc = acc + c * LaurentPoly.of(f.partial(v), self.var)
        return acc

    def __add__(self, other):
        return Derivation(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.var or other.var)

    def __sub__(self, other):
        return Derivation(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.var or other.var)

    def __neg__(self):
        return Derivation(tuple(-a for a in self.coeffs), self.var)

    def __rmul__(self, g):
        """Multiply by a polynomial or a scalar."""
        if not isinstance(g, (MultiPoly, LaurentPoly)):
            g = MultiPoly.const(self.field(g), self.field, self.vars)
        return Derivation(tuple(LaurentPoly.of(g, self.var) * a for a in self.coeffs), self.var)

    def change_field(self, F: GF):
        return Derivation(tuple(LaurentPoly(c.base.change_field(F), c.var, c.pole_order)
                                for c in self.coeffs), self.var)

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        parts = []
        for c, v in zip(self.coeffs, self.vars):
            if not c.is_zero():
                parts.append(f"({c})*d/d{v}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def is_derivation_of(D: Derivation, f: MultiPoly, p=None) -> bool:
    """True if D(f) lies in (f) in the local ring at the origin."""
    if not D.is_polynomial():
        raise ValueError("is_derivation_of needs polynomial coefficients")
    return ideal_membership(D.apply(f).to_poly(), [f], p)


def transform_through_blowup(D: Derivation, chart: Chart) -> Derivation:
    """Pull a polynomial field on the parent chart back to ``chart``.

    With ``e = x_i'`` the exceptional coordinate: D'(e) = A_i and
    D'(x_k') = (A_k - x_k' A_i) / e, where A = coefficients of D in chart
    coordinates.
    """
    if chart.index is None:
        return D
    if not D.is_polynomial():
        raise ValueError("transform_through_blowup needs a pole-free derivation")
    i, e = chart.index, chart.exceptional_var
    F = chart.field
    D = D.change_field(F) if D.field != F else D
    sub = chart.substitution()
    A = [c.substitute(sub) for c in D.polys()]
    X = [MultiPoly.var(v, F) for v in BASE_VARS]
    out = []
    for k in range(3):
        if k == i:
            out.append(LaurentPoly(A[i], e))
        else:
            out.append(LaurentPoly(A[k] - X[k] * A[i], e, 1))
    return Derivation(out, e)


# --- lifting ------------------------------------------------------------------------

@dataclass
class TraceEntry:
    chart: int
    depth: int
    coefficient: str  # the chart coordinate whose image is tested
    pole_order: int
    regular: bool

    def to_dict(self):
        return {"chart": self.chart, "depth": self.depth, "coefficient": self.coefficient,
                "pole_order": self.pole_order, "regular": self.regular}


@dataclass
class LiftResult:
    lifts: bool
    trace: list
    failing_chart: int | None = None
    failing_depth: int | None = None

    def __bool__(self):
        return self.lifts

    def to_dict(self):
        return {"lifts": self.lifts, "failing_chart": self.failing_chart,
                "failing_depth": self.failing_depth, "trace": [t.to_dict() for t in self.trace]}


def _regular_part(coeff: LaurentPoly, g: MultiPoly, e: str):
    """Split a coefficient with a simple pole along e into (representative, obstruction).

    Returns ``(h, r)`` with ``coeff = h + r / e`` modulo g, where r lives on
    the plane e = 0 and is the normal form of the residue modulo g|e=0; the
    coefficient is regular iff r = 0.
    """
    if coeff.pole_order == 0:
        return coeff.base, MultiPoly.zero(g.field, g.vars)
    if coeff.pole_order > 1:
        raise PoleCapError("pull-back of a polynomial field has at most a simple pole")
    N = coeff.base
    g0 = g.specialize({e: 0}).with_vars(g.vars)
    N0 = N.specialize({e: 0}).with_vars(g.vars)
    u, r = N0.divmod(g0)
    rest = N - g * u - r
    return rest.div_var_power(e, 1), r


def _children_by_chart(tree: ResolutionTree):
    out = {}
    for b in tree.blowups:
        out.setdefault(b.chart, []).append(b)
    return out


def _heights(tree: ResolutionTree):
    """Number of blow-ups on the longest chain starting at each blow-up."""
    below = {}
    for b in tree.blowups:
        below.setdefault(b.id, [])
    parent_of = {}
    for b in tree.blowups:
        for ch in b.children:
            parent_of[ch] = b.id
    for b in tree.blowups:
        if b.chart in parent_of:
            below[parent_of[b.chart]].append(b.id)
    height = {}
    for b in reversed(tree.blowups):
        height[b.id] = 1 + max((height[c] for c in below[b.id]), default=0)
    return height


def _truncate_at(D: Derivation, center, n: int) -> Derivation:
    """Drop coefficient terms vanishing to order >= n at ``center``; they lift n levels deep."""
    F = D.field
    shift = dict(zip(BASE_VARS, center))
    back = {v: F.neg(a) for v, a in shift.items()}
    return Derivation(tuple(c.translate(shift).truncate(n).translate(back) for c in D.polys()))


def _walk(tree: ResolutionTree, D: Derivation, stop_at_failure: bool):
    """Breadth-first pull-back of D through every blow-up of the tree.

    Yields ``(chart, k, pole_order, residue)`` for every tested coefficient;
    a zero residue means the coefficient is regular.  Before each blow-up the
    field is truncated at the height of the remaining subtree, which leaves
    every residue unchanged.
    """
    by_chart = _children_by_chart(tree)
    height = _heights(tree)
    stack = [(tree.root.id, D)]
    while stack:
        cid, field_here = stack.pop(0)
        for b in by_chart.get(cid, []):
            local = _truncate_at(field_here, b.center, height[b.id])
            for ch_id in b.children:
                chart = tree.charts[ch_id]
                pulled = transform_through_blowup(local, chart)
                e = chart.exceptional_var
                reps = []
                failed = False
                for k, c in enumerate(pulled.coeffs):
                    h, r = _regular_part(c, chart.equation, e)
                    reps.append(h)
                    yield chart, k, c.pole_order, r
                    if r.terms:
                        failed = True
                if failed and stop_at_failure:
                    return
                if ch_id in by_chart:
                    stack.append((ch_id, Derivation(reps)))


def lifts_to_resolution(f: MultiPoly, D: Derivation, p=None, tree: ResolutionTree | None = None) -> LiftResult:
    """Decide whether D extends to a regular vector field on the minimal resolution."""
    if tree is None:
        tree = resolve(f, p)
    D = D.change_field(tree.field)
    trace = []
    for chart, k, pole, r in _walk(tree, D, stop_at_failure=True):
        ok = not r.terms
        trace.append(TraceEntry(chart.id, chart.depth, BASE_VARS[k], pole, ok))
        if not ok:
            return LiftResult(False, trace, chart.id, chart.depth)
    return LiftResult(True, trace)


def obstruction_vector(tree: ResolutionTree, D: Derivation) -> dict:
    """Linear obstruction to lifting: all residues, keyed by (chart, coefficient, monomial)."""
    out = {}
    for chart, k, _, r in _walk(tree, D.change_field(tree.field), stop_at_failure=False):
        for mono, c in r.terms.items():
            out[(chart.id, k, mono)] = c
    return out


def _obstruction_images(tree: ResolutionTree, fields):
    """Obstruction vectors of monomial fields; those of degree >= tree depth lift."""
    F = tree.field
    K = tree.depth
    zero = MultiPoly.zero(F)
    images = []
    for mono, i in fields:
        if sum(mono) >= K:
            images.append({})
            continue
        coeffs = [zero, zero, zero]
        coeffs[i] = MultiPoly.monomial(mono, F)
        images.append(obstruction_vector(tree, Derivation(coeffs)))
    return images


def _nonlifting_rank(f, tree, d, cache):
    F = tree.field
    fields = monomial_fields(d)
    for j, fl in enumerate(fields):
        if fl not in cache:
            cache[fl] = _obstruction_images(tree, [fl])[0]
    _, relations = derivation_space(f, d, d + f.degree() + 2)
    keys = {}
    ech = Echelon(F)
    for rel in relations:
        vec = {}
        for j, c in rel.items():
            for key, a in cache[fields[j]].items():
                col = keys.setdefault(key, len(keys))
                v = F.add(vec.get(col, 0), F.mul(c, a))
                if v:
                    vec[col] = v
                else:
                    vec.pop(col, None)
        ech.add(vec)
    return ech.rank


def nonlifting_dimension(f: MultiPoly, p=None, degree_bound: int = 6, tree: ResolutionTree | None = None) -> int:
    """Dimension of derivations of the local ring modulo those that lift to the resolution.

    Derivations are sampled with coefficient degree up to
    ``max(degree_bound, resolution depth)``; the count must agree one degree
    higher, otherwise :class:`Inconclusive` is raised.
    """
    if tree is None:
        tree = resolve(f, p)
    fF = f.change_field(tree.field)
    d = max(degree_bound, tree.depth)
    cache = {}
    a = _nonlifting_rank(fF, tree, d, cache)
    b = _nonlifting_rank(fF, tree, d + 1, cache)
    if a != b:
        raise Inconclusive(f"non-lifting dimension not stable: {a} at degree {d}, {b} at degree {d + 1}")
    return a


def lifts_through_first_blowup(f: MultiPoly, D: Derivation, tree: ResolutionTree | None = None) -> bool:
    """Regularity of the pull-back in the three charts of the first blow-up only."""
    if tree is None:
        tree = resolve(f)
    D = D.change_field(tree.field)
    for chart_id in tree.blowups[0].children:
        chart = tree.charts[chart_id]
        pulled = transform_through_blowup(D, chart)
        for c in pulled.coeffs:
            if _regular_part(c, chart.equation, chart.exceptional_var)[1].terms:
                return False
    return True


def maps_maximal_ideal_into_itself(D: Derivation) -> bool:
    """D(m) inside m: every coefficient vanishes at the origin."""
    return all(c.base.constant_term() == 0 for c in D.coeffs) and D.is_polynomial()
