"""Linear algebra in truncated local rings k[[x,y,z]]/m^N.

Everything reduces to sparse row echelon forms over a finite field whose
columns are monomials in *local* order (ascending degree, graded-lex within a
degree).  The pivot of a row is its smallest column, so ``monomial * g`` rows
of a single generator are already in echelon form.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .fields import GF, field as get_field
from .poly import BASE_VARS, MultiPoly, monomials_up_to

INFINITE = math.inf


class Inconclusive(RuntimeError):
    """A truncated computation did not reach a certified answer."""


class NonIsolatedSingularity(ValueError):
    pass


@lru_cache(maxsize=64)
def _monomial_basis(nvars: int, N: int):
    mons = tuple(monomials_up_to(nvars, N - 1))
    return mons, {e: i for i, e in enumerate(mons)}


class TruncatedAlgebra:
    """k[vars]/m^N with its monomial basis of all monomials of degree < N."""

    def __init__(self, field: GF, N: int, vars=BASE_VARS):
        self.field = field
        self.N = N
        self.vars = tuple(vars)
        self.monomials, self.index = _monomial_basis(len(self.vars), N)

    @property
    def size(self):
        return len(self.monomials)

    def vector(self, poly: MultiPoly) -> dict:
        idx = self.index
        return {idx[e]: c for e, c in poly.terms.items() if sum(e) < self.N}

    def poly(self, vec) -> MultiPoly:
        return MultiPoly(self.field, self.vars, {self.monomials[i]: c for i, c in vec.items()})

    def multiples(self, g: MultiPoly):
        """Vectors of monomial * g truncated below degree N, skipping those that vanish."""
        N, idx = self.N, self.index
        o = g.order()
        if o >= N:
            return
        terms = list(g.terms.items())
        for mono in monomials_up_to(len(self.vars), N - 1 - o):
            dm = sum(mono)
            row = {}
            for e, c in terms:
                if sum(e) + dm < N:
                    row[idx[tuple(a + b for a, b in zip(e, mono))]] = c
            if row:
                yield row


class Echelon:
    """Sparse echelon form; each row's pivot is its smallest column."""

    def __init__(self, field: GF):
        self.field = field
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec) -> dict:
        F = self.field
        rows = self.rows
        v = dict(vec)
        out = {}
        while v:
            c = min(v)
            a = v.pop(c)
            row = rows.get(c)
            if row is None:
                out[c] = a
                continue
            for cc, b in row.items():
                if cc != c:
                    w = F.sub(v.get(cc, 0), F.mul(a, b))
                    if w:
                        v[cc] = w
                    else:
                        v.pop(cc, None)
        return out

    def add(self, vec) -> bool:
        """Insert a vector; returns False if it was already in the span."""
        if not vec:
            return False
        c = min(vec)
        if c in self.rows:
            vec = self.reduce(vec)
            if not vec:
                return False
            c = min(vec)
        F = self.field
        inv = F.inv(vec[c])
        self.rows[c] = {k: F.mul(a, inv) for k, a in vec.items()}
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)


class TrackedEchelon:
    """Echelon form that remembers each row as a combination of the inputs."""

    def __init__(self, field: GF):
        self.field = field
        self.rows = {}  # pivot -> (row, combination)

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec, comb):
        F = self.field
        v, comb = dict(vec), dict(comb)
        out = {}
        while v:
            c = min(v)
            a = v.pop(c)
            hit = self.rows.get(c)
            if hit is None:
                out[c] = a
                continue
            row, rc = hit
            for cc, b in row.items():
                if cc != c:
                    w = F.sub(v.get(cc, 0), F.mul(a, b))
                    if w:
                        v[cc] = w
                    else:
                        v.pop(cc, None)
            for k, b in rc.items():
                w = F.sub(comb.get(k, 0), F.mul(a, b))
                if w:
                    comb[k] = w
                else:
                    comb.pop(k, None)
        return out, comb

    def add(self, vec, label):
        """Insert input number ``label``; returns a kernel relation if dependent."""
        rest, comb = self.reduce(vec, {label: 1})
        if not rest:
            return comb
        F = self.field
        c = min(rest)
        inv = F.inv(rest[c])
        self.rows[c] = ({k: F.mul(a, inv) for k, a in rest.items()},
                        {k: F.mul(a, inv) for k, a in comb.items()})
        return None


def kernel(vectors, field: GF):
    """Basis of linear relations among ``vectors`` (list of sparse dicts)."""
    te = TrackedEchelon(field)
    out = []
    for i, v in enumerate(vectors):
        rel = te.add(v, i)
        if rel is not None:
            out.append(rel)
    return out


def rank(vectors, field: GF) -> int:
    ech = Echelon(field)
    for v in vectors:
        ech.add(v)
    return ech.rank


class IdealHandle:
    """Span of all monomial multiples of the generators inside k[vars]/m^N."""

    def __init__(self, gens, algebra: TruncatedAlgebra):
        self.generators = [g for g in gens if g.terms]
        self.ambient = algebra
        self.echelon = Echelon(algebra.field)
        for g in self.generators:
            for row in algebra.multiples(g):
                self.echelon.add(row)

    @property
    def rank(self):
        return self.echelon.rank

    @property
    def colength(self):
        return self.ambient.size - self.rank

    def contains(self, poly: MultiPoly) -> bool:
        return self.echelon.contains(self.ambient.vector(poly))

    def normal_form(self, poly: MultiPoly) -> dict:
        return self.echelon.reduce(self.ambient.vector(poly))

    def contains_power_of_maximal_ideal(self, d: int) -> bool:
        A = self.ambient
        return all(self.echelon.contains({A.index[e]: 1}) for e in A.monomials if sum(e) == d)


def _field_of(polys, p):
    F = polys[0].field
    if p is not None and int(p) != F.p:
        raise ValueError(f"characteristic mismatch: polynomials over {F!r}, p={p}")
    return F


def certified_handle(gens, N_max: int = 40, N_start: int = 4):
    """Truncated handle at the first N with m^(N-1) inside the ideal (Nakayama witness).

    Returns ``(handle, history)``; ``handle`` is None when no witness was found
    up to ``N_max``.  With the witness, m^(N-1) lies in the ideal of the local
    ring itself, so the truncated quotient is exact.
    """
    gens = [g for g in gens if g.terms]
    F = gens[0].field
    vars = gens[0].vars
    history = []
    N = max(N_start, 2)
    while N <= N_max:
        h = IdealHandle(gens, TruncatedAlgebra(F, N, vars))
        history.append((N, h.colength))
        if h.contains_power_of_maximal_ideal(N - 1):
            # pure powers are in particular inside
            return h, history
        N += 2
    return None, history


def colength(gens, p=None, N_max: int = 40):
    """dim_k k[[vars]]/(gens); ``INFINITE`` when the ideal is not m-primary.

    Raises :class:`Inconclusive` if the truncated values stabilise without an
    m-primality witness before ``N_max``.
    """
    gens = [g for g in gens if g.terms]
    if not gens:
        return INFINITE
    _field_of(gens, p)
    if any(g.constant_term() for g in gens):
        return 0
    h, hist = certified_handle(gens, N_max=N_max)
    if h is not None:
        return h.colength
    if len(hist) >= 2 and hist[-1][1] > hist[-2][1]:
        return INFINITE
    raise Inconclusive(f"colength values {hist} stabilised without m-primality witness")


def tjurina_ideal(f: MultiPoly):
    return [f] + [f.partial(v) for v in BASE_VARS]


def tjurina(f: MultiPoly, p=None, N_max: int = 40) -> int:
    """Tjurina number dim k[[x,y,z]]/(f, f_x, f_y, f_z) of a germ at the origin."""
    _field_of([f], p)
    if f.constant_term():
        raise ValueError("f does not vanish at the origin")
    tau = colength(tjurina_ideal(f), N_max=N_max)
    if tau == INFINITE:
        raise NonIsolatedSingularity(f"{f} does not have an isolated singularity at the origin")
    return tau


def ideal_membership(g: MultiPoly, gens, p=None, N: int | None = None) -> bool:
    """Truncated membership of g in (gens) + m^N, with one doubling retry on failure."""
    gens = [h for h in gens if h.terms]
    _field_of([g] + gens, p)
    if not g.terms:
        return True
    if not gens:
        return False
    if N is None:
        N = max(g.degree(), 0) + max(h.degree() for h in gens) + 6
    if N < g.degree() + max(h.degree() for h in gens) + 2:
        raise ValueError("degree bound N too small for a decisive check")
    for n in (N, 2 * N):
        if IdealHandle(gens, TruncatedAlgebra(g.field, n, g.vars)).contains(g):
            return True
    return False


# --- derivation modules -----------------------------------------------------------

def monomial_fields(d: int, nvars: int = 3):
    """Basis (monomial, direction) of vector fields with coefficient degree <= d."""
    return [(m, i) for m in monomials_up_to(nvars, d) for i in range(nvars)]


def derivation_space(f: MultiPoly, d: int, cutoff: int | None = None):
    """Relations {(a,b,c), deg <= d : a f_x + b f_y + c f_z in (f) + m^cutoff}.

    Returns ``(fields, relations)`` where ``fields`` is the monomial-field basis
    and each relation is a sparse dict field-index -> coefficient.
    """
    F = f.field
    if cutoff is None:
        cutoff = d + f.degree() + 1
    A = TruncatedAlgebra(F, cutoff, f.vars)
    fh = IdealHandle([f], A)
    grads = [A.vector(f.partial(v)) for v in BASE_VARS]
    fields = monomial_fields(d, len(f.vars))
    idx, mons = A.index, A.monomials
    images = []
    for mono, i in fields:
        row = {}
        for col, c in grads[i].items():
            e = tuple(a + b for a, b in zip(mons[col], mono))
            if sum(e) < cutoff:
                row[idx[e]] = c
        images.append(fh.echelon.reduce(row))
    return fields, kernel(images, F)


def derivation_kernel(f: MultiPoly, p=None, degree_bound: int = 2, cutoff: int | None = None):
    """Basis of derivations of k[[x,y,z]]/(f) with coefficient degree <= degree_bound.

    The membership of D(f) in (f) is tested modulo m^cutoff; the kernel is
    recomputed at cutoff + 2 and :class:`Inconclusive` is raised if it shrinks.
    """
    from .derivations import Derivation

    _field_of([f], p)
    if cutoff is None:
        cutoff = degree_bound + f.degree() + 1
    fields, rel = derivation_space(f, degree_bound, cutoff)
    _, rel2 = derivation_space(f, degree_bound, cutoff + 2)
    if len(rel2) != len(rel):
        raise Inconclusive(
            f"derivation kernel changed between cutoff {cutoff} ({len(rel)}) and {cutoff + 2} ({len(rel2)})")
    return [Derivation.from_combination(fields, r, f.field, f.vars) for r in rel]
