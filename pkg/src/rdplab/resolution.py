"""Iterated point blow-ups of surface double points in affine 3-space.

The blow-up of the origin is covered by three charts; in chart ``i`` the old
coordinates are ``x_i = x_i'`` and ``x_k = x_k' * x_i'`` for ``k != i``, and the
strict transform is the pulled-back equation divided by ``x_i'^2``.  The
exceptional divisor of the surface is the tangent-cone conic ``V(Q)`` in the
plane at infinity, so its components and its singular locus are read off the
quadratic form ``Q`` by linear algebra.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field as dc_field

from . import univariate as U
from .fields import GF, field as get_field
from .local import NonIsolatedSingularity
from .poly import BASE_VARS, MultiPoly
from .univariate import ExtensionNeeded

MAX_DEPTH = 24
DEFAULT_MAX_EXT_DEGREE = 4


class ResolutionError(ValueError):
    pass


class NotADoublePoint(ResolutionError):
    pass


class DepthExceeded(ResolutionError):
    pass


class NonADEGraph(ResolutionError):
    pass


# --- small linear algebra over a GF ---------------------------------------------

def _lead(v):
    return next(k for k, a in enumerate(v) if a)


def _normalize(F, v):
    inv = F.inv(v[_lead(v)])
    return tuple(F.mul(a, inv) for a in v)


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        acc = F.add(acc, F.mul(x, y))
    return acc


def _cross(F, a, b):
    return (
        F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])),
        F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
        F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0])),
    )


def _combine(F, coeffs, vectors):
    out = [0] * len(vectors[0])
    for c, v in zip(coeffs, vectors):
        for k, a in enumerate(v):
            out[k] = F.add(out[k], F.mul(c, a))
    return tuple(out)


def nullspace(F: GF, rows, n: int):
    """Basis of the solutions v of row . v = 0 for every row."""
    mat = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((k for k in range(r, len(mat)) if mat[k][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = F.inv(mat[r][c])
        mat[r] = [F.mul(a, inv) for a in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][c]:
                fac = mat[k][c]
                mat[k] = [F.sub(a, F.mul(fac, b)) for a, b in zip(mat[k], mat[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for k, pc in enumerate(pivots):
            v[pc] = F.neg(mat[k][free])
        basis.append(tuple(v))
    return basis


def _to_univariate(poly: MultiPoly):
    out = [0] * (max(poly.degree(), 0) + 1)
    for e, c in poly.terms.items():
        out[e[0]] = c
    return U.trim(out)


# --- the tangent cone ----------------------------------------------------------------

@dataclass
class ConeComponent:
    """A reduced component of V(Q): a line (linear form) or a smooth conic."""

    kind: str
    form: object  # coefficient triple for a line, the quadratic MultiPoly for a conic

    def contains(self, F, d) -> bool:
        if self.kind == "line":
            return _dot(F, self.form, d) == 0
        return self.form.evaluate(dict(zip(BASE_VARS, d))) == 0

    def describe(self, F) -> str:
        if self.kind == "conic":
            return str(self.form)
        X = [MultiPoly.var(v, F) for v in BASE_VARS]
        lin = MultiPoly.zero(F)
        for c, v in zip(self.form, X):
            lin = lin + v.scale(c)
        return str(lin)


@dataclass
class ConeAnalysis:
    form: MultiPoly
    singular_basis: list  # basis of Sing V(Q) as a linear subspace of k^3
    components: list
    vertex: tuple | None = None


def analyze_tangent_cone(Q: MultiPoly) -> ConeAnalysis:
    """Components and singular locus of the plane conic V(Q)."""
    F = Q.field
    if not Q.terms:
        raise NotADoublePoint("tangent cone vanishes identically")
    unit = [tuple(1 if k == j else 0 for k in range(3)) for j in range(3)]
    rows = [[Q.partial(v).coefficient(unit[j]) for j in range(3)] for v in BASE_VARS]
    basis = nullspace(F, rows, 3)
    if F.p == 2 and basis:
        # on ker(grad Q) the form is the square of a linear form
        roots = [F.sqrt_char2(Q.evaluate(dict(zip(BASE_VARS, k)))) for k in basis]
        if any(roots):
            basis = [_combine(F, c, basis) for c in nullspace(F, [roots], len(basis))]
    if len(basis) >= 3:
        raise NotADoublePoint("tangent cone vanishes identically")
    if len(basis) == 2:
        line = _normalize(F, _cross(F, basis[0], basis[1]))
        return ConeAnalysis(Q, basis, [ConeComponent("line", line)])
    if len(basis) == 0:
        return ConeAnalysis(Q, basis, [ConeComponent("conic", Q)])
    S = _normalize(F, basis[0])
    c = _lead(S)
    a, b = [k for k in range(3) if k != c]
    qa = Q.evaluate(dict(zip(BASE_VARS, unit[a])))
    qb = Q.evaluate(dict(zip(BASE_VARS, unit[b])))
    mixed = Q.coefficient(tuple(1 if k in (a, b) else 0 for k in range(3)))
    points = []
    if qb == 0:
        points.append(unit[b])
    for t in U.roots(F, [qa, mixed, qb]):
        points.append(tuple(F.add(unit[a][k], F.mul(t, unit[b][k])) for k in range(3)))
    if len(points) != 2:
        raise ResolutionError(f"tangent cone {Q} is not a pair of distinct lines")
    lines = sorted(_normalize(F, _cross(F, S, P)) for P in points)
    return ConeAnalysis(Q, basis, [ConeComponent("line", ell) for ell in lines], vertex=S)


# --- charts and curves ---------------------------------------------------------------

@dataclass
class CurvePiece:
    """An exceptional curve on one chart: the plane x_j = 0 cut by h = 0."""

    curve: int
    plane: int
    h: MultiPoly

    def defining_pair(self):
        F = self.h.field
        return (MultiPoly.var(BASE_VARS[self.plane], F), self.h)

    def passes_through(self, point) -> bool:
        return point[self.plane] == 0 and self.h.evaluate(dict(zip(BASE_VARS, point))) == 0


@dataclass
class Curve:
    id: int
    birth: int  # index of the blow-up that created it
    kind: str
    description: str


@dataclass
class Chart:
    id: int
    equation: MultiPoly
    parent: int | None = None
    index: int | None = None  # 0, 1, 2 for the x-, y-, z-chart
    center: tuple | None = None  # blown-up point in parent coordinates
    blowup: int | None = None
    depth: int = 0
    exceptional_divisors: list = dc_field(default_factory=list)

    @property
    def field(self):
        return self.equation.field

    @property
    def exceptional_var(self):
        return None if self.index is None else BASE_VARS[self.index]

    def substitution(self):
        """Parent coordinates as polynomials in this chart's coordinates."""
        if self.index is None:
            return {}
        F = self.field
        X = [MultiPoly.var(v, F) for v in BASE_VARS]
        out = {}
        for k, v in enumerate(BASE_VARS):
            image = X[k] if k == self.index else X[k] * X[self.index]
            out[v] = image + MultiPoly.const(self.center[k], F)
        return out


@dataclass
class BlowUp:
    id: int
    chart: int
    center: tuple
    depth: int
    tangent_cone: MultiPoly
    children: tuple = ()
    new_curves: tuple = ()
    singular_directions: list = dc_field(default_factory=list)
    child_centers: list = dc_field(default_factory=list)  # (chart id, point)
    intersections: list = dc_field(default_factory=list)  # (direction, curve ids)


def chart_substitution(i: int, F: GF):
    X = [MultiPoly.var(v, F) for v in BASE_VARS]
    return {v: X[k] if k == i else X[k] * X[i] for k, v in enumerate(BASE_VARS)}


def is_singular_at(g: MultiPoly, point) -> bool:
    vals = dict(zip(BASE_VARS, point))
    return g.evaluate(vals) == 0 and all(g.partial(v).evaluate(vals) == 0 for v in BASE_VARS)


def _direction_point(d, i):
    """Chart-i coordinates of the point of E in direction d (with d_i = 1)."""
    return tuple(0 if k == i else a for k, a in enumerate(d))


def _chart_singular_directions(g: MultiPoly, i: int, cone: ConeAnalysis):
    """Singular points of V(g) on {x_i = 0} whose direction is canonical for chart i."""
    F = g.field
    basis = cone.singular_basis
    found = []
    if len(basis) == 1:
        S = _normalize(F, basis[0])
        if _lead(S) == i and is_singular_at(g, _direction_point(S, i)):
            found.append(S)
    elif len(basis) == 2:
        b1, b2 = basis
        if b1[i] == 0 and b2[i] == 0:
            return []
        src = b1 if b1[i] else b2
        inv = F.inv(src[i])
        A = tuple(F.mul(a, inv) for a in src)
        B = tuple(F.sub(F.mul(b2[i], u), F.mul(b1[i], w)) for u, w in zip(b1, b2))
        T = MultiPoly.var("t", F, ("t",))
        bind = {}
        for k, v in enumerate(BASE_VARS):
            if k == i:
                bind[v] = MultiPoly.zero(F, ("t",))
            else:
                bind[v] = MultiPoly.const(A[k], F, ("t",)) + T.scale(B[k])
        G = []
        for h in [g] + [g.partial(v) for v in BASE_VARS]:
            G = U.gcd(F, G, _to_univariate(h.substitute(bind)))
        if not G:
            raise NonIsolatedSingularity("strict transform is singular along a whole line")
        for t in U.roots(F, G):
            d = tuple(F.add(a, F.mul(t, b)) for a, b in zip(A, B))
            if _lead(d) == i:
                found.append(d)
    return sorted(found)


def _cone_of_chart(chart: Chart):
    """Recover the tangent cone of the blow-up that produced ``chart``."""
    g, i = chart.equation, chart.index
    F = g.field
    out = {}
    for e, c in g.terms.items():
        if e[i] == 0:
            d = sum(e)
            if d > 2:
                raise ResolutionError("chart equation is not a strict transform of a double point")
            ne = list(e)
            ne[i] = 2 - d
            out[tuple(ne)] = c
    return MultiPoly(F, BASE_VARS, out)


def singular_points(chart: Chart, max_ext_degree: int = DEFAULT_MAX_EXT_DEGREE):
    """Singular points of the chart surface on its exceptional locus.

    Only points whose direction is not visible in an earlier sibling chart are
    returned, so every point of the exceptional divisor is reported once.  For
    the root chart the origin is returned when it is singular.  Raises
    :class:`ExtensionNeeded` when the points are not rational over the chart's
    field (the caller retries over the extension).
    """
    g = chart.equation
    if not g.terms:
        raise ValueError("zero equation")
    if chart.index is None:
        origin = (0, 0, 0)
        return [origin] if is_singular_at(g, origin) else []
    cone = analyze_tangent_cone(_cone_of_chart(chart))
    dirs = _chart_singular_directions(g, chart.index, cone)
    if dirs and g.field.m > max_ext_degree:
        raise ExtensionNeeded(1, "chart field exceeds the extension budget")
    return [_direction_point(d, chart.index) for d in dirs]


def _old_curve_directions(F, piece_by_chart, plane):
    """Points of E met by an old curve, from its pieces in the charts i != plane."""
    dirs = set()
    for i, h in piece_by_chart.items():
        w = 3 - i - plane
        u = h.specialize({BASE_VARS[i]: 0})
        widx = u.vars.index(BASE_VARS[w])
        coeffs = [0] * (max(u.degree(), 0) + 1)
        for e, c in u.terms.items():
            coeffs[e[widx]] = c
        coeffs = U.trim(coeffs)
        if not coeffs:
            raise ResolutionError("exceptional curve contained in the new exceptional divisor")
        for r in U.roots(F, coeffs):
            d = [0, 0, 0]
            d[i] = 1
            d[w] = r
            dirs.add(_normalize(F, d))
    return dirs


def blow_up_point(chart: Chart, center, first_chart_id: int = 0, first_curve_id: int = 0,
                  blowup_id: int = 0):
    """Blow up ``center`` on ``chart``; returns ``(children, blowup, new_curves)``.

    ``children`` are the x-, y- and z-charts with their strict transforms and the
    exceptional curves (old ones through the center and the new ones) that
    are visible there.
    """
    g = chart.equation
    F = g.field
    center = tuple(center)
    if not is_singular_at(g, center):
        raise NotADoublePoint(f"center {center} is not a singular point of {g}")
    shift = dict(zip(BASE_VARS, center))
    gT = g.translate(shift)
    mult = gT.order()
    if mult != 2:
        raise NotADoublePoint(f"multiplicity {mult} at center, expected a double point")
    Q = gT.homogeneous_part(2)
    cone = analyze_tangent_cone(Q)
    node = BlowUp(blowup_id, chart.id, center, chart.depth + 1, Q)

    new_curves = []
    for k, comp in enumerate(cone.components):
        new_curves.append(Curve(first_curve_id + k, blowup_id, comp.kind, comp.describe(F)))
    node.new_curves = tuple(c.id for c in new_curves)

    old = [pc for pc in chart.exceptional_divisors if pc.passes_through(center)]
    children = []
    old_pieces = {pc.curve: {} for pc in old}
    for i in range(3):
        sub = chart_substitution(i, F)
        ev = BASE_VARS[i]
        gi = gT.substitute(sub).div_var_power(ev, 2)
        pieces = []
        one = {ev: MultiPoly.const(1, F)}
        for comp, cv in zip(cone.components, new_curves):
            if comp.kind == "line":
                h = MultiPoly.const(comp.form[i], F)
                for k, v in enumerate(BASE_VARS):
                    if k != i:
                        h = h + MultiPoly.var(v, F).scale(comp.form[k])
            else:
                h = comp.form.substitute(one)
            if h.degree() >= 1:
                pieces.append(CurvePiece(cv.id, i, h))
        for pc in old:
            if pc.plane == i:
                continue
            h = pc.h.translate(shift).substitute(sub)
            h = h.div_var_power(ev, h.divides_exactly_by_var(ev))
            pieces.append(CurvePiece(pc.curve, pc.plane, h))
            old_pieces[pc.curve][i] = h
        children.append(Chart(first_chart_id + i, gi, chart.id, i, center, blowup_id,
                              chart.depth + 1, pieces))
    node.children = tuple(c.id for c in children)

    dirs = []
    for i, child in enumerate(children):
        dirs.extend(_chart_singular_directions(child.equation, i, cone))
    node.singular_directions = sorted(dirs)

    meets = {}
    if cone.vertex is not None:
        meets.setdefault(cone.vertex, set()).update(node.new_curves)
    for pc in old:
        for d in _old_curve_directions(F, old_pieces[pc.curve], pc.plane):
            members = meets.setdefault(d, set())
            members.add(pc.curve)
            for comp, cv in zip(cone.components, new_curves):
                if comp.contains(F, d):
                    members.add(cv.id)
    centers = set(node.singular_directions)
    for d in sorted(meets):
        if d in centers:
            continue
        members = sorted(meets[d])
        if len(members) >= 3:
            raise NonADEGraph(f"three exceptional curves {members} pass through one point")
        node.intersections.append((d, tuple(members)))
    return children, node, new_curves


# --- the resolution tree --------------------------------------------------------------

@dataclass
class ResolutionTree:
    field: GF
    equation: MultiPoly
    charts: list
    blowups: list
    curves: list

    @property
    def p(self):
        return self.field.p

    @property
    def root(self):
        return self.charts[0]

    @property
    def leaves(self):
        inner = {b.chart for b in self.blowups}
        return [c for c in self.charts if c.id not in inner]

    @property
    def depth(self):
        return max((b.depth for b in self.blowups), default=0)

    def edges(self):
        mult = {}
        for b in self.blowups:
            for _, members in b.intersections:
                if len(members) == 2:
                    mult[members] = mult.get(members, 0) + 1
        return mult

    def to_dict(self):
        F = self.field
        enc = lambda pt: [F.digits(a) for a in pt]  # noqa: E731
        return {
            "field": {"p": F.p, "m": F.m, "modulus": list(F.modulus)},
            "equation": str(self.equation),
            "charts": [
                {
                    "id": c.id,
                    "parent": c.parent,
                    "chart": c.exceptional_var,
                    "center": None if c.center is None else enc(c.center),
                    "depth": c.depth,
                    "equation": str(c.equation),
                    "exceptional_divisors": [
                        {"curve": pc.curve, "plane": BASE_VARS[pc.plane], "equation": str(pc.h)}
                        for pc in c.exceptional_divisors
                    ],
                }
                for c in self.charts
            ],
            "blowups": [
                {
                    "id": b.id,
                    "chart": b.chart,
                    "center": enc(b.center),
                    "depth": b.depth,
                    "tangent_cone": str(b.tangent_cone),
                    "new_curves": list(b.new_curves),
                    "singular_directions": [enc(d) for d in b.singular_directions],
                }
                for b in self.blowups
            ],
            "curves": [{"id": c.id, "birth": c.birth, "kind": c.kind, "equation": c.description}
                       for c in self.curves],
            "edges": [[a, b, m] for (a, b), m in sorted(self.edges().items())],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _build_tree(f: MultiPoly, max_depth: int) -> ResolutionTree:
    F = f.field
    root = Chart(0, f)
    origin = (0, 0, 0)
    if f.constant_term():
        raise NotADoublePoint("f does not vanish at the origin")
    if not is_singular_at(f, origin):
        raise NotADoublePoint("the origin is a smooth point of f")
    tree = ResolutionTree(F, f, [root], [], [])
    queue = deque([(0, origin)])
    while queue:
        cid, center = queue.popleft()
        chart = tree.charts[cid]
        if chart.depth + 1 > max_depth:
            raise DepthExceeded(f"resolution deeper than {max_depth} blow-ups")
        children, node, curves = blow_up_point(
            chart, center, len(tree.charts), len(tree.curves), len(tree.blowups))
        tree.charts.extend(children)
        tree.curves.extend(curves)
        tree.blowups.append(node)
        for d in node.singular_directions:
            i = _lead(d)
            pt = _direction_point(d, i)
            node.child_centers.append((children[i].id, pt))
            queue.append((children[i].id, pt))
    return tree


def resolve(f: MultiPoly, p=None, max_ext_degree: int = DEFAULT_MAX_EXT_DEGREE,
            max_depth: int = MAX_DEPTH) -> ResolutionTree:
    """Blow up singular points until every chart is smooth along the exceptional locus.

    Works over the field of ``f``; when singular points or exceptional curves
    are only defined over an extension, the whole computation is restarted
    over the smallest sufficient extension (absolute degree <= max_ext_degree).
    """
    F0 = f.field
    if p is not None and int(p) != F0.p:
        raise ValueError(f"characteristic mismatch: {F0!r} vs p={p}")
    if f.vars != BASE_VARS:
        f = f.with_vars(BASE_VARS)
    F = F0
    while True:
        try:
            return _build_tree(f.change_field(F), max_depth)
        except ExtensionNeeded as exc:
            m = F.m * exc.degree
            if m > max_ext_degree:
                raise ExtensionNeeded(m, f"points need F_{F0.p}^{m}, beyond max_ext_degree={max_ext_degree}")
            F = get_field(F0.p, m)


# --- dual graphs ------------------------------------------------------------------------

@dataclass
class DualGraph:
    vertices: tuple
    edges: dict  # (a, b) with a < b -> multiplicity

    def neighbours(self, v):
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def valence(self, v):
        return len(self.neighbours(v))

    def is_connected(self):
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def validate(self):
        for e, m in self.edges.items():
            if m > 1:
                raise NonADEGraph(f"double edge {e}")
        if not self.is_connected():
            raise NonADEGraph("dual graph is disconnected")
        if len(self.edges) != len(self.vertices) - 1:
            raise NonADEGraph("dual graph contains a cycle")
        for v in self.vertices:
            if self.valence(v) > 3:
                raise NonADEGraph(f"vertex {v} has valence {self.valence(v)}")
        return self

    def to_dict(self):
        return {"vertices": list(self.vertices),
                "edges": [[a, b, m] for (a, b), m in sorted(self.edges.items())]}


def dual_graph(tree: ResolutionTree) -> DualGraph:
    """Intersection graph of the exceptional curves (all of them -2 curves)."""
    g = DualGraph(tuple(c.id for c in tree.curves), tree.edges())
    return g.validate()


def graph_type(g: DualGraph) -> str:
    """ADE label such as ``"A_3"``, ``"D_6"`` or ``"E_8"`` of a validated dual graph."""
    n = len(g.vertices)
    if n == 0:
        raise NonADEGraph("empty graph")
    branch = [v for v in g.vertices if g.valence(v) == 3]
    if not branch:
        if any(g.valence(v) > 2 for v in g.vertices):
            raise NonADEGraph("not a chain")
        return f"A_{n}"
    if len(branch) > 1:
        raise NonADEGraph("more than one trivalent vertex")
    centre = branch[0]
    lengths = []
    for start in g.neighbours(centre):
        prev, cur, k = centre, start, 1
        while True:
            nxt = [w for w in g.neighbours(cur) if w != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                raise NonADEGraph("branch splits again")
            prev, cur, k = cur, nxt[0], k + 1
        lengths.append(k)
    lengths = tuple(sorted(lengths))
    if lengths[:2] == (1, 1):
        return f"D_{n}"
    named = {(1, 2, 2): "E_6", (1, 2, 3): "E_7", (1, 2, 4): "E_8"}
    if lengths in named:
        return named[lengths]
    raise NonADEGraph(f"branch lengths {lengths} match no ADE diagram")


def type_family(label: str):
    """Split ``"D_6"`` into ``("D", 6)``."""
    letter, n = label.split("_")
    return letter, int(n)


@dataclass(frozen=True)
class SingularityClass:
    graph_type: str
    coindex: int
    p: int

    @property
    def label(self):
        return f"{self.graph_type}^{self.coindex}"

    def __str__(self):
        return self.label
