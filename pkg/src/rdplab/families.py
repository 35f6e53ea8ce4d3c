"""Deformation families: fibers, classification and simultaneous resolution.

A family is one polynomial in ``x, y, z`` and parameter variables.  The
simultaneous-resolution test blows up the same constant centers on the total
space (parameters carried along) as on the special fiber, and checks that
every sampled fiber resolves through exactly the same centers with the same
exceptional combinatorics.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from .fields import GF, FieldElem, field as get_field
from .local import certified_handle, rank as vec_rank, tjurina, tjurina_ideal
from .poly import BASE_VARS, MultiPoly, parse_poly
from .resolution import (
    ResolutionError, ResolutionTree, SingularityClass, dual_graph, graph_type, resolve, type_family,
)
from .theorems import coindex_range, expected_tjurina
from .univariate import ExtensionNeeded

MAX_SAMPLES = 8


class ClassificationError(ValueError):
    pass


class AmbiguousClassification(ClassificationError):
    def __init__(self, graph, tau, candidates):
        names = ", ".join(f"{graph}^{r}" for r in candidates)
        super().__init__(f"AMBIGUOUS: {graph} with tau={tau} matches {names}")
        self.candidates = [SingularityClass(graph, r, None) for r in candidates]


def classify_singularity(f: MultiPoly, p=None, tree: ResolutionTree | None = None) -> SingularityClass:
    """ADE type from the dual graph, co-index from the Tjurina number."""
    if tree is None:
        tree = resolve(f, p)
    graph = graph_type(dual_graph(tree))
    letter, n = type_family(graph)
    q = f.field.p
    tau = tjurina(f)
    candidates = [r for r in coindex_range(letter, n, q) if expected_tjurina(letter, n, r, q) == tau]
    if not candidates:
        raise ClassificationError(f"{graph} with tau={tau} is not a rational double point in characteristic {q}")
    if len(candidates) > 1:
        raise AmbiguousClassification(graph, tau, candidates)
    return SingularityClass(graph, candidates[0], q)


def short_label(cls: SingularityClass) -> str:
    """``E_8^1``, or plain ``A_4`` when the type has no co-index variants."""
    letter, n = type_family(cls.graph_type)
    if len(coindex_range(letter, n, cls.p)) == 1:
        return cls.graph_type
    return cls.label


@dataclass
class DeformationFamily:
    equation: MultiPoly
    special: SingularityClass | None = None
    general: SingularityClass | None = None
    name: str = ""

    @classmethod
    def parse(cls, text: str, p: int, special=None, general=None, name=""):
        return cls(parse_poly(text, p), special, general, name or text)

    @property
    def params(self):
        return tuple(v for v in self.equation.vars if v not in BASE_VARS)

    @property
    def p(self):
        return self.equation.field.p

    def special_fiber(self):
        return fiber_at(self, {s: 0 for s in self.params})

    def direction(self, param) -> MultiPoly:
        """First-order deformation direction dF/ds at the origin of the base."""
        d = self.equation.partial(param)
        return d.specialize({s: 0 for s in self.params})

    def __str__(self):
        return self.name or str(self.equation)


def fiber_at(family: DeformationFamily, values, field: GF | None = None) -> MultiPoly:
    """Substitute parameter values; the fiber lives over the field of the values."""
    G = family.equation
    missing = [s for s in family.params if s not in values]
    if missing:
        raise ValueError(f"unbound parameters {missing}")
    vals = {}
    for s, v in values.items():
        if isinstance(v, FieldElem):
            field = field or v.field
            vals[s] = v.value
        else:
            vals[s] = v
    F = field or G.field
    return G.change_field(F).specialize(vals)


@dataclass
class FiberReport:
    values: dict
    cls: SingularityClass | None
    tjurina: int | None
    curve_count: int | None
    error: str = ""

    def to_dict(self, F: GF | None = None):
        vals = {s: (F.digits(v) if F is not None else v) for s, v in self.values.items()}
        return {"values": vals, "class": None if self.cls is None else self.cls.label,
                "tjurina": self.tjurina, "curve_count": self.curve_count, "error": self.error}


@dataclass
class SimultaneousResolutionReport:
    family: str
    ok: bool
    reason: str = ""
    sample_field: GF | None = None
    special: FiberReport | None = None
    general: list = dc_field(default_factory=list)
    strata: dict = dc_field(default_factory=dict)
    depth: int = 0

    def __bool__(self):
        return self.ok

    def to_dict(self):
        F = self.sample_field
        return {
            "family": self.family,
            "ok": self.ok,
            "reason": self.reason,
            "equisingularity_test": "constant centers and constant dual graph across samples",
            "sample_field": None if F is None else {"p": F.p, "m": F.m},
            "depth": self.depth,
            "special": None if self.special is None else self.special.to_dict(F),
            "general": [r.to_dict(F) for r in self.general],
            "strata": {k: [r.to_dict(F) for r in v] for k, v in self.strata.items()},
        }


def sample_field(p: int) -> GF:
    """Smallest F_{p^m} with at least three nonzero elements."""
    m = 1
    while p ** m - 1 < 3:
        m += 1
    return get_field(p, m)


def sample_values(F: GF, count: int = MAX_SAMPLES):
    return list(range(1, F.q))[:count]


def _signature(tree: ResolutionTree):
    blowups = tuple((b.chart, b.center, tuple(tree.curves[c].kind for c in b.new_curves),
                     tuple(b.singular_directions)) for b in tree.blowups)
    return blowups, tuple(sorted(tree.edges().items()))


def _resolve_common(fibers):
    """Resolve all fibers over one field, so that their centers can be compared."""
    trees = [resolve(f) for f in fibers]
    big = max((t.field for t in trees), key=lambda F: F.m)
    return [t if t.field == big else resolve(f.change_field(big)) for t, f in zip(trees, fibers)], big


def _total_space_check(G: MultiPoly, tree: ResolutionTree):
    """Blow up the special-fiber centers on the total space; None if every step is a double section."""
    F = tree.field
    G = G.change_field(F)
    vars = G.vars
    X = [MultiPoly.var(v, F, vars) for v in BASE_VARS]
    eqs = {0: G}
    for b in tree.blowups:
        g = eqs[b.chart].translate(dict(zip(BASE_VARS, b.center)))
        if g.order(3) < 2:
            return f"total space is not singular along the center {b.center} of blow-up {b.id}"
        for i, ch in enumerate(b.children):
            sub = {v: X[k] if k == i else X[k] * X[i] for k, v in enumerate(BASE_VARS)}
            gi = g.substitute(sub)
            if gi.divides_exactly_by_var(BASE_VARS[i]) < 2:
                return f"strict transform at blow-up {b.id} is not a double section"
            eqs[ch] = gi.div_var_power(BASE_VARS[i], 2)
    return None


def _fiber_report(f, values, tree):
    try:
        cls = classify_singularity(f, tree=tree)
        return FiberReport(values, cls, tjurina(f), len(tree.curves))
    except (ClassificationError, ResolutionError, ArithmeticError) as exc:
        return FiberReport(values, None, None, len(tree.curves), str(exc))


def _same_class(a: SingularityClass, b: SingularityClass):
    return a is not None and b is not None and a.graph_type == b.graph_type and a.coindex == b.coindex


def check_simultaneous_resolution(family: DeformationFamily, samples: int = MAX_SAMPLES) -> SimultaneousResolutionReport:
    """Constant-center simultaneous resolution without base extension, checked on samples.

    The special fiber and every sampled general fiber (all parameters
    nonzero) must blow up the same centers with the same exceptional curves
    and intersections, the total space must have multiplicity two along each
    center section, and the fibers must classify unanimously.  Fibers with
    some parameters zero are reported as strata but need not agree.
    """
    params = family.params
    F = sample_field(family.p)
    report = SimultaneousResolutionReport(str(family), False, sample_field=F)
    if not params:
        report.reason = "family has no parameters"
        return report
    nonzero = sample_values(F, samples)
    general_pts = [dict(zip(params, v)) for v in product(nonzero, repeat=len(params))][:samples]
    strata_pts = {}
    if len(params) > 1:
        for mask in product((False, True), repeat=len(params)):
            if all(mask) or not any(mask):
                continue
            key = ",".join(s for s, on in zip(params, mask) if on) + " nonzero"
            pts = [dict(zip(params, (v if on else 0 for on in mask))) for v in nonzero[:3]]
            strata_pts[key] = pts
    zero = {s: 0 for s in params}
    fibers = [fiber_at(family, pt, F) for pt in [zero] + general_pts]
    try:
        trees, big = _resolve_common(fibers)
    except (ResolutionError, ArithmeticError, ExtensionNeeded) as exc:
        report.reason = f"a fiber is not an isolated double point: {exc}"
        return report
    report.sample_field = F
    report.depth = trees[0].depth
    report.special = _fiber_report(fibers[0], zero, trees[0])
    report.general = [_fiber_report(f, pt, t) for f, pt, t in zip(fibers[1:], general_pts, trees[1:])]
    for key, pts in strata_pts.items():
        out = []
        for pt in pts:
            f = fiber_at(family, pt, F)
            try:
                out.append(_fiber_report(f, pt, resolve(f)))
            except (ResolutionError, ArithmeticError) as exc:
                out.append(FiberReport(pt, None, None, None, str(exc)))
        report.strata[key] = out

    sig0 = _signature(trees[0])
    for pt, t in zip(general_pts, trees[1:]):
        if _signature(t) != sig0:
            report.reason = f"fiber at {pt} resolves differently from the special fiber"
            return report
    problem = _total_space_check(family.equation, trees[0])
    if problem:
        report.reason = problem
        return report
    classes = {(r.cls.graph_type, r.cls.coindex) if r.cls else None for r in report.general}
    if None in classes or report.special.cls is None:
        report.reason = "a fiber could not be classified"
        return report
    if len(classes) > 1:
        report.reason = f"general fibers disagree: {sorted(classes)}"
        return report
    if family.special is not None and not _same_class(report.special.cls, family.special):
        report.reason = f"special fiber is {report.special.cls}, declared {family.special}"
        return report
    if family.general is not None and not _same_class(report.general[0].cls, family.general):
        report.reason = f"general fiber is {report.general[0].cls}, declared {family.general}"
        return report
    report.ok = True
    return report


@dataclass
class EquisingularResult:
    count: int
    passing: list
    failures: list  # (family name, reason)


def equisingular_directions(f: MultiPoly, label: SingularityClass, families, samples: int = MAX_SAMPLES):
    """Rank of the first-order directions of passing families inside the Tjurina algebra.

    A family counts when it resolves simultaneously, its special fiber is
    ``label`` and its general fiber has the same graph but another co-index.
    """
    passing, failures, dirs = [], [], []
    for fam in families:
        rep = check_simultaneous_resolution(fam, samples)
        if not rep.ok:
            failures.append((str(fam), rep.reason))
            continue
        if fam.special_fiber() != f:
            failures.append((str(fam), "special fiber differs from the normal form"))
            continue
        sp, gen = rep.special.cls, rep.general[0].cls
        if not (_same_class(sp, label) and gen.graph_type == sp.graph_type and gen.coindex != sp.coindex):
            failures.append((str(fam), f"fiber types {sp} -> {gen} do not fit {label}"))
            continue
        passing.append(str(fam))
        dirs.extend(fam.direction(s) for s in fam.params)
    if not dirs:
        return EquisingularResult(0, passing, failures)
    handle, _ = certified_handle(tjurina_ideal(f))
    if handle is None:
        raise ClassificationError("Tjurina algebra is not finite")
    count = vec_rank([handle.normal_form(d) for d in dirs], f.field)
    return EquisingularResult(count, passing, failures)


def equisingular_count(entry, samples: int = MAX_SAMPLES) -> int:
    """Independent equisingular directions among the entry's families."""
    res = equisingular_directions(entry.normal_form, entry.label, entry.families, samples)
    if res.failures:
        raise ClassificationError("; ".join(f"{n}: {r}" for n, r in res.failures))
    return res.count
