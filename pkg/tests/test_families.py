import pytest

from rdplab.catalog import catalog_entries, find_entry
from rdplab.families import (
    ClassificationError, DeformationFamily, check_simultaneous_resolution, classify_singularity,
    equisingular_count, fiber_at, sample_field, short_label,
)
from rdplab.fields import FieldElem, field
from rdplab.poly import parse_poly
from rdplab.resolution import SingularityClass


def P(text, p):
    return parse_poly(text, p)


def base(f):
    return f.with_vars(("x", "y", "z"))


def test_fiber_at_examples():
    fam = DeformationFamily.parse("z^2+x^3+y^5+s*x*y^4", 5)
    assert base(fiber_at(fam, {"s": 0})) == P("z^2+x^3+y^5", 5)
    assert base(fiber_at(fam, {"s": 1})) == P("z^2+x^3+y^5+x*y^4", 5)
    fam2 = DeformationFamily.parse("z^2+x^3+y^5+s1*x^2*y^3+s2*x^2*y^2", 3)
    assert base(fiber_at(fam2, {"s1": 1, "s2": 0})) == P("z^2+x^3+y^5+x^2*y^3", 3)
    F9 = field(3, 2)
    fib = fiber_at(fam2, {"s1": FieldElem(4, F9), "s2": 0})
    assert fib.field == F9
    with pytest.raises(ValueError):
        fiber_at(fam2, {"s1": 1})


@pytest.mark.parametrize("text,p,label", [
    ("z^2+x^3+y^5+x*y^4", 5, "E_8^1"),
    ("x*y+z^5", 5, "A_4"),
    ("z^2+x^3+y^5+x*y*z", 2, "E_8^4"),
    ("z^2+x^3+y^5+y^3*z", 2, "E_8^3"),
    ("z^2+x^3+y^4+x^2*y^2", 3, "E_6^1"),
    ("z^2+x^3+y^5", 7, "E_8"),
])
def test_classify_examples(text, p, label):
    assert short_label(classify_singularity(P(text, p))) == label


def test_classify_rejects_non_rdp():
    with pytest.raises(Exception):
        classify_singularity(P("x^3+y^3+z^3", 3))


def test_classify_catalog_round_trip():
    for p in (2, 3, 5, 7):
        for entry in catalog_entries(p, max_n=8):
            cls = classify_singularity(entry.normal_form)
            assert (cls.graph_type, cls.coindex) == (entry.label.graph_type, entry.r), entry.name


def test_sample_fields():
    assert sample_field(2).q == 4
    assert sample_field(3).q == 9
    assert sample_field(5).q == 5


def test_simultaneous_resolution_examples():
    assert check_simultaneous_resolution(DeformationFamily.parse("z^2+x^3+y^5+s*x*y^4", 5)).ok
    d6 = DeformationFamily.parse("z^2+x^2*y+x*y^3+s*x*y*z", 2,
                                 SingularityClass("D_6", 0, 2), SingularityClass("D_6", 2, 2))
    assert check_simultaneous_resolution(d6).ok
    ctl = check_simultaneous_resolution(DeformationFamily.parse("x*y+z^2+s*z", 3))
    assert not ctl.ok and ctl.reason


def test_wrong_declared_general_type_fails():
    fam = DeformationFamily.parse("z^2+x^3+y^5+s*x^2*y^2", 3,
                                  SingularityClass("E_8", 0, 3), SingularityClass("E_8", 1, 3))
    rep = check_simultaneous_resolution(fam)
    assert not rep.ok and "general fiber" in rep.reason


def _all_families():
    for p in (2, 3, 5):
        for entry in catalog_entries(p, max_n=8):
            for fam in entry.families:
                yield entry, fam


def test_catalog_family_invariants():
    count = 0
    for entry, fam in _all_families():
        rep = check_simultaneous_resolution(fam)
        assert rep.ok, (fam.name, rep.reason)
        assert len(rep.general) >= 3
        labels = {(r.cls.graph_type, r.cls.coindex) for r in rep.general}
        assert len(labels) == 1
        assert all(r.tjurina < rep.special.tjurina for r in rep.general)
        assert all(r.curve_count == rep.special.curve_count for r in rep.general)
        count += 1
    assert count > 20


def test_two_parameter_strata():
    fam = DeformationFamily.parse("z^2+x^3+y^5+s1*x^2*y^3+s2*x^2*y^2", 3)
    rep = check_simultaneous_resolution(fam)
    assert rep.ok
    assert short_label(rep.special.cls) == "E_8^0"
    assert {short_label(r.cls) for r in rep.general} == {"E_8^2"}
    assert {short_label(r.cls) for r in rep.strata["s1 nonzero"]} == {"E_8^1"}
    assert {short_label(r.cls) for r in rep.strata["s2 nonzero"]} == {"E_8^2"}


@pytest.mark.parametrize("label,p,count", [
    ("E_8^0", 3, 2),
    ("D_8^1", 2, 2),
    ("E_8^0", 5, 1),
    ("A_3", 2, 0),
    ("A_4", 5, 0),
    ("E_7^0", 2, 3),
])
def test_equisingular_count_examples(label, p, count):
    assert equisingular_count(find_entry(label, p)) == count
