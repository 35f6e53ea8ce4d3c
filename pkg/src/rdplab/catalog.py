"""Artin normal forms with their non-lifting derivations, equisingular families and expected columns."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .derivations import (
    Derivation, is_derivation_of, lifts_to_resolution, nonlifting_dimension, obstruction_vector,
)
from .families import DeformationFamily, equisingular_directions
from .fields import is_prime
from .local import Echelon, Inconclusive, tjurina
from .poly import parse_poly
from .resolution import ResolutionError, SingularityClass, dual_graph, graph_type, resolve
from .theorems import (
    UnsupportedType, coindex_range, equisingular_expected, nonlifting_expected,
)
from .univariate import ExtensionNeeded

DEFAULT_MAX_N = 8
SCHEMA = "rdplab-report/1"


@dataclass
class NamedDerivation:
    name: str
    derivation: Derivation


@dataclass
class CatalogEntry:
    label: SingularityClass
    p: int
    normal_form: object  # MultiPoly
    expected_equisingular: int
    expected_nonlifting: int
    expected_curves: int
    derivations: list = dc_field(default_factory=list)
    families: list = dc_field(default_factory=list)

    @property
    def letter(self):
        return self.label.graph_type.split("_")[0]

    @property
    def n(self):
        return int(self.label.graph_type.split("_")[1])

    @property
    def r(self):
        return self.label.coindex

    @property
    def name(self):
        return f"{self.label.label} (p={self.p})"


# --- normal forms --------------------------------------------------------------------

def _pw(v, k):
    if k == 0:
        return ""
    return v if k == 1 else f"{v}^{k}"


def _mono(*factors):
    parts = [f for f in factors if f and f != "1"]
    return "*".join(parts) or "1"


ETA = {1: "x^2*y*z", 2: "y^3*z", 3: "x*y*z"}  # E_7 co-index terms, p = 2
THETA = {1: "x*y^3*z", 2: "x*y^2*z", 3: "y^3*z", 4: "x*y*z"}  # E_8 co-index terms, p = 2


def d_extra(m, k):
    """The term x*y^(m-k)*z selecting co-index k of D_2m / D_2m+1 in characteristic 2."""
    return _mono("x", _pw("y", m - k), "z")


def normal_form_text(letter: str, n: int, r: int, p: int) -> str:
    if r not in coindex_range(letter, n, p):
        raise UnsupportedType(f"{letter}_{n}^{r} does not occur for p={p}")
    if letter == "A":
        return f"x*y+z^{n + 1}"
    if letter == "D":
        if p != 2:
            return f"z^2+x^2*y+y^{n - 1}"
        m = n // 2
        base = f"z^2+x^2*y+{_mono('x', _pw('y', m))}" if n % 2 == 0 else f"z^2+x^2*y+{_mono(_pw('y', m), 'z')}"
        return base + (f"+{d_extra(m, r)}" if r else "")
    base = {6: "z^2+x^3+y^4", 7: "z^2+x^3+x*y^3", 8: "z^2+x^3+y^5"}[n]
    if r == 0:
        if p == 2 and n == 6:
            return "z^2+x^3+y^2*z"
        return base
    if p == 2:
        extra = {6: {1: "x*y*z"}, 7: ETA, 8: THETA}[n][r]
        return ("z^2+x^3+y^2*z" if n == 6 else base) + "+" + extra
    if p == 3:
        extra = {6: {1: "x^2*y^2"}, 7: {1: "x^2*y^2"}, 8: {1: "x^2*y^3", 2: "x^2*y^2"}}[n][r]
        return base + "+" + extra
    return base + "+x*y^4"  # E_8^1 in p = 5


# --- derivations that do not lift --------------------------------------------------

def _scaled(k, coeffs):
    """y^k times a field given by coefficient strings."""
    if k == 0:
        return coeffs
    yk = _pw("y", k)
    return tuple("0" if c == "0" else "+".join(_mono(yk, t) for t in c.split("+")) for c in coeffs)


def derivation_texts(letter: str, n: int, r: int, p: int):
    """Coefficient strings (a, b, c) of the listed non-lifting derivations."""
    if letter == "A":
        return [("0", "0", "1")] if (n + 1) % p == 0 else []
    if p == 2 and letter == "D":
        m = n // 2
        if n % 2 == 0:
            if r == 0:
                return [("0", "0", "x")] + [("0", "0", _pw("y", j) or "1") for j in range(m)]
            first = (f"{m}*{_mono('x', _pw('y', m - r - 1))}", _pw("y", m - r) or "1",
                     f"x+{r}*{_mono(_pw('y', m - r - 1), 'z')}")
            d1 = ("x", "0", f"{_pw('y', r) or '1'}+z")
            return [first] + [_scaled(j, d1) for j in range(m - r)]
        if r == 0:
            return [("1" if j == 0 else _pw("y", j), "0", "0") for j in range(m)]
        d2 = (f"x+{_pw('y', r) or '1'}", "0", "z")
        return [_scaled(j, d2) for j in range(m - r)]
    if letter != "E":
        return []
    table = {
        2: {
            (6, 0): [("0", "1", "0")],
            (7, 0): [("0", "0", "1"), ("0", "0", "x"), ("0", "0", "y"), ("0", "0", "y^2")],
            (8, 0): [("0", "0", "1"), ("0", "0", "y"), ("0", "0", "y^2"), ("0", "0", "x")],
            (7, 1): [("x*y", "y^2", "y*z+x"), ("x*z", "y*z+x", "z^2+y"), _scaled(1, ("x*z", "y*z+x", "z^2+y"))],
            (7, 2): [("0", "y", "x+z"), _scaled(1, ("0", "y", "x+z"))],
            (7, 3): [("0", "y", "y^2+z")],
            (8, 1): [("y^3", "y^2*z", "y*z^2+x"), ("y^2*z", "y*z^2+x", "z^3+y"),
                     _scaled(1, ("y^2*z", "y*z^2+x", "z^3+y"))],
            (8, 2): [("0", "x", "y^2"), ("y^2", "z", "x")],
            (8, 3): [("0", "y", "y^2+z")],
        },
        3: {
            (7, 0): [("0", "1", "0")],
            (6, 0): [("1", "0", "0"), ("y", "0", "0")],
            (8, 0): [("1", "0", "0"), ("y", "0", "0")],
            (8, 1): [("y", "-x", "0")],
            (6, 1): [("y-x*y", "x-y^2", "y*z")],
        },
        5: {(8, 0): [("0", "1", "0")]},
    }
    return table.get(p, {}).get((n, r), [])


# --- equisingular families ----------------------------------------------------------

def family_specs(letter: str, n: int, r: int, p: int):
    """(equation text, general co-index) for each listed family with special fiber of this type."""
    if letter == "A":
        return []
    if p == 2 and letter == "D":
        m = n // 2
        base = normal_form_text("D", n, r, 2)
        if r > m - 2:
            return []
        return [(f"{base}+s*{d_extra(m, k)}", k) for k in range(r + 1, m)]
    if letter != "E":
        return []
    base = normal_form_text("E", n, r, p)
    if p == 2:
        extra = {6: {1: "x*y*z"}, 7: ETA, 8: THETA}[n]
        return [(f"{base}+s*{extra[k]}", k) for k in sorted(extra) if k > r]
    if p == 3:
        if (n, r) in ((6, 0), (7, 0), (8, 1)):
            return [(f"{base}+s*x^2*y^2", r + 1)]
        if (n, r) == (8, 0):
            return [(f"{base}+s1*x^2*y^3", 1), (f"{base}+s2*x^2*y^2", 2),
                    (f"{base}+s1*x^2*y^3+s2*x^2*y^2", 2)]
    if p == 5 and (n, r) == (8, 0):
        return [(f"{base}+s*x*y^4", 1)]
    return []


# --- catalog ----------------------------------------------------------------------

def _wanted(types, letter, n):
    if not types:
        return True
    return letter in types or f"{letter}_{n}" in types


def make_entry(letter: str, n: int, r: int, p: int) -> CatalogEntry:
    f = parse_poly(normal_form_text(letter, n, r, p), p)
    label = SingularityClass(f"{letter}_{n}", r, p)
    ders = []
    for texts in derivation_texts(letter, n, r, p):
        D = Derivation.parse(texts, p)
        ders.append(NamedDerivation(str(D), D))
    fams = []
    for text, k in family_specs(letter, n, r, p):
        fams.append(DeformationFamily.parse(text, p, label, SingularityClass(f"{letter}_{n}", k, p), text))
    return CatalogEntry(label, p, f, equisingular_expected(letter, n, r, p),
                        nonlifting_expected(letter, n, r, p), n, ders, fams)


def catalog_entries(p: int, types=None, max_n: int = DEFAULT_MAX_N, min_n: int = 1):
    """Catalog entries for characteristic p, A/D subscripts in [min_n, max_n]."""
    if not is_prime(int(p)):
        raise UnsupportedType(f"{p} is not prime")
    p = int(p)
    types = set(types or ())
    out = []
    for n in range(max(min_n, 1), max_n + 1):
        if _wanted(types, "A", n):
            out.append(make_entry("A", n, 0, p))
    for n in range(max(min_n, 4), max_n + 1):
        if _wanted(types, "D", n):
            out.extend(make_entry("D", n, r, p) for r in coindex_range("D", n, p))
    for n in (6, 7, 8):
        if _wanted(types, "E", n):
            out.extend(make_entry("E", n, r, p) for r in coindex_range("E", n, p))
    return out


def find_entry(label: str, p: int, max_n: int | None = None) -> CatalogEntry:
    """Entry by label such as ``E_8^1`` or ``A_4``."""
    graph, _, r = label.partition("^")
    letter, n = graph.split("_")
    return make_entry(letter, int(n), int(r or 0), int(p))


# --- verification ------------------------------------------------------------------

@dataclass
class DerivationVerdict:
    name: str
    is_derivation: bool
    lifts: bool
    failing_chart: int | None
    failing_depth: int | None

    @property
    def ok(self):
        return self.is_derivation and not self.lifts


@dataclass
class VerificationReport:
    entry: str
    p: int
    tjurina: int | None = None
    curves: int | None = None
    graph: str | None = None
    equisingular: int | None = None
    nonlifting: int | None = None
    expected_equisingular: int = 0
    expected_nonlifting: int = 0
    identity: bool = False
    derivations: list = dc_field(default_factory=list)
    derivations_independent: bool | None = None
    families: list = dc_field(default_factory=list)
    family_failures: list = dc_field(default_factory=list)
    status: str = "mismatch"
    messages: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return self.status == "ok"

    def to_dict(self):
        return {
            "entry": self.entry,
            "p": self.p,
            "tjurina": self.tjurina,
            "curves": self.curves,
            "graph": self.graph,
            "equisingular": self.equisingular,
            "nonlifting": self.nonlifting,
            "expected_equisingular": self.expected_equisingular,
            "expected_nonlifting": self.expected_nonlifting,
            "identity": self.identity,
            "derivations": [
                {"derivation": d.name, "is_derivation": d.is_derivation, "lifts": d.lifts,
                 "failing_chart": d.failing_chart, "failing_depth": d.failing_depth}
                for d in self.derivations
            ],
            "derivations_independent": self.derivations_independent,
            "families": list(self.families),
            "family_failures": [list(x) for x in self.family_failures],
            "status": self.status,
            "messages": list(self.messages),
        }


def _independent(tree, ders) -> bool:
    """Listed derivations are linearly independent modulo liftable fields."""
    if not ders:
        return True
    keys = {}
    ech = Echelon(tree.field)
    for d in ders:
        vec = {keys.setdefault(k, len(keys)): c for k, c in obstruction_vector(tree, d).items()}
        ech.add(vec)
    return ech.rank == len(ders)


def verify_entry(entry: CatalogEntry, degree_bound: int = 6, samples: int = 8) -> VerificationReport:
    """Compute tau, curves, equisingular and non-lifting dimensions and check the identity."""
    rep = VerificationReport(entry.label.label, entry.p,
                             expected_equisingular=entry.expected_equisingular,
                             expected_nonlifting=entry.expected_nonlifting)
    f = entry.normal_form
    try:
        rep.tjurina = tjurina(f)
        tree = resolve(f)
        rep.graph = graph_type(dual_graph(tree))
        rep.curves = len(tree.curves)
        rep.nonlifting = nonlifting_dimension(f, tree=tree, degree_bound=degree_bound)
        eq = equisingular_directions(f, entry.label, entry.families, samples)
        rep.equisingular = eq.count
        rep.families = eq.passing
        rep.family_failures = eq.failures
        for nd in entry.derivations:
            isd = is_derivation_of(nd.derivation, f)
            lift = lifts_to_resolution(f, nd.derivation, tree=tree)
            rep.derivations.append(DerivationVerdict(nd.name, isd, lift.lifts, lift.failing_chart,
                                                     lift.failing_depth))
        rep.derivations_independent = _independent(tree, [nd.derivation for nd in entry.derivations])
    except (Inconclusive, ExtensionNeeded) as exc:
        rep.status = "inconclusive"
        rep.messages.append(str(exc))
        return rep
    except ResolutionError as exc:
        rep.status = "error"
        rep.messages.append(str(exc))
        return rep
    rep.identity = rep.tjurina == rep.curves + rep.equisingular + rep.nonlifting
    checks = {
        "identity": rep.identity,
        "graph": rep.graph == entry.label.graph_type,
        "curves": rep.curves == entry.expected_curves,
        "equisingular": rep.equisingular == entry.expected_equisingular,
        "nonlifting": rep.nonlifting == entry.expected_nonlifting,
        "derivations": all(d.ok for d in rep.derivations),
        "derivations_independent": bool(rep.derivations_independent),
        "families": not rep.family_failures,
    }
    rep.messages.extend(f"{k} check failed" for k, v in checks.items() if not v)
    rep.status = "ok" if all(checks.values()) else "mismatch"
    return rep


@dataclass
class TableRow:
    label: str
    p: int
    equisingular: object  # int or "INCONCLUSIVE"
    nonlifting: object
    expected_equisingular: int
    expected_nonlifting: int

    @property
    def inconclusive(self):
        return "INCONCLUSIVE" in (self.equisingular, self.nonlifting)

    @property
    def match(self):
        return (self.equisingular, self.nonlifting) == (self.expected_equisingular, self.expected_nonlifting)


@dataclass
class TableResult:
    p: int
    rows: list

    @property
    def mismatches(self):
        return [r for r in self.rows if not r.match and not r.inconclusive]

    @property
    def inconclusive(self):
        return [r for r in self.rows if r.inconclusive]

    def render(self) -> str:
        head = f"{'type':<10}{'p':>3}{'ii':>6}{'iii':>6}{'exp ii':>8}{'exp iii':>9}  status"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            status = "INCONCLUSIVE" if r.inconclusive else ("ok" if r.match else "MISMATCH")
            lines.append(f"{r.label:<10}{r.p:>3}{str(r.equisingular):>6}{str(r.nonlifting):>6}"
                         f"{r.expected_equisingular:>8}{r.expected_nonlifting:>9}  {status}")
        return "\n".join(lines)

    def to_dict(self):
        return {"p": self.p, "rows": [
            {"type": r.label, "equisingular": r.equisingular, "nonlifting": r.nonlifting,
             "expected_equisingular": r.expected_equisingular, "expected_nonlifting": r.expected_nonlifting,
             "match": r.match} for r in self.rows]}


def reproduce_theorem_tables(p: int, max_n: int = 12, types=None, degree_bound: int = 6,
                             samples: int = 8) -> TableResult:
    """Compute both dimension columns for every catalog entry and compare with expectations."""
    rows = []
    for entry in catalog_entries(p, types, max_n):
        f = entry.normal_form
        try:
            tree = resolve(f)
            nl = nonlifting_dimension(f, tree=tree, degree_bound=degree_bound)
        except (Inconclusive, ExtensionNeeded):
            nl = "INCONCLUSIVE"
        try:
            eq = equisingular_directions(f, entry.label, entry.families, samples).count
        except (Inconclusive, ExtensionNeeded):
            eq = "INCONCLUSIVE"
        rows.append(TableRow(entry.label.label, p, eq, nl, entry.expected_equisingular,
                             entry.expected_nonlifting))
    return TableResult(p, rows)
