import json

import pytest

from rdplab.fields import field
from rdplab.poly import parse_poly
from rdplab.resolution import (
    Chart, DualGraph, NonADEGraph, NotADoublePoint, analyze_tangent_cone, blow_up_point, dual_graph,
    graph_type, is_singular_at, resolve, singular_points,
)
from rdplab.catalog import catalog_entries


def P(text, p):
    return parse_poly(text, p)


def _first_blowup_child(text, p, index):
    f = P(text, p)
    children, node, _ = blow_up_point(Chart(0, f), (0, 0, 0), 1, 0, 0)
    return {c.index: c for c in children}[index]


def test_a_n_z_chart_strict_transform():
    for n, p in [(3, 2), (5, 3), (4, 5)]:
        ch = _first_blowup_child(f"x*y+z^{n + 1}", p, 2)
        assert ch.equation == P(f"x*y+z^{n - 1}", p)


def test_e8_y_chart_strict_transform():
    for p in (2, 3, 5, 7):
        ch = _first_blowup_child("z^2+x^3+y^5", p, 1)
        assert ch.equation == P("z^2+x^3*y+y^3", p)


def test_a1_resolves_in_one_step():
    children, _, curves = blow_up_point(Chart(0, P("x*y+z^2", 2)), (0, 0, 0), 1, 0, 0)
    assert len(curves) == 1
    for c in children:
        assert singular_points(c) == []


def test_singular_points_examples():
    ch = _first_blowup_child("x*y+z^4", 2, 2)
    assert ch.equation == P("x*y+z^2", 2)
    assert singular_points(ch) == [(0, 0, 0)]
    f = P("z^2+x^2*y+x*y^2", 2)
    children, node, _ = blow_up_point(Chart(0, f), (0, 0, 0), 1, 0, 0)
    pts = [pt for c in children for pt in singular_points(c)]
    assert len(pts) == 3
    assert len(node.singular_directions) == 3


def test_not_a_double_point():
    with pytest.raises(NotADoublePoint):
        resolve(P("x^3+y^3+z^3", 2))


@pytest.mark.parametrize("text,p,curves,gtype", [
    ("x*y+z^2", 2, 1, "A_1"),
    ("z^2+x^3+y^5", 5, 8, "E_8"),
    ("z^2+x^2*y+x*y^3", 2, 6, "D_6"),
    ("z^2+x^2*y+x*y^2", 2, 4, "D_4"),
    ("z^2+x^3+y^5", 2, 8, "E_8"),
    ("z^2+x^3+y^4", 3, 6, "E_6"),
    ("x^2+y^2+z^4", 3, 3, "A_3"),
    ("x*y+z^9", 7, 8, "A_8"),
])
def test_resolve_examples(text, p, curves, gtype):
    tree = resolve(P(text, p))
    assert len(tree.curves) == curves
    assert graph_type(dual_graph(tree)) == gtype


def test_xy_z2_depth_one():
    assert resolve(P("x*y+z^2", 2)).depth == 1


def test_d4_star():
    g = dual_graph(resolve(P("z^2+x^2*y+x*y^2", 2)))
    valences = sorted(g.valence(v) for v in g.vertices)
    assert valences == [1, 1, 1, 3]


def test_a_n_is_a_chain():
    for n in range(1, 9):
        g = dual_graph(resolve(P(f"x*y+z^{n + 1}", 3)))
        assert sorted(g.valence(v) for v in g.vertices) == ([0] if n == 1 else [1, 1] + [2] * (n - 2))


def test_graph_type_on_synthetic_graphs():
    chain = DualGraph((0, 1, 2, 3), {(0, 1): 1, (1, 2): 1, (2, 3): 1})
    assert graph_type(chain.validate()) == "A_4"
    star = DualGraph((0, 1, 2, 3), {(0, 1): 1, (0, 2): 1, (0, 3): 1})
    assert graph_type(star.validate()) == "D_4"
    e8 = DualGraph(tuple(range(8)), {(0, 1): 1, (0, 2): 1, (2, 3): 1, (0, 4): 1, (4, 5): 1, (5, 6): 1,
                                     (6, 7): 1})
    assert graph_type(e8.validate()) == "E_8"
    with pytest.raises(NonADEGraph):
        DualGraph((0, 1, 2), {(0, 1): 1, (1, 2): 1, (0, 2): 1}).validate()
    with pytest.raises(NonADEGraph):
        graph_type(DualGraph(tuple(range(7)), {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 4): 1, (2, 5): 1,
                                                (3, 6): 1}).validate())


def test_tangent_cone_kinds():
    double = analyze_tangent_cone(P("z^2", 3))
    assert [c.kind for c in double.components] == ["line"] and len(double.singular_basis) == 2
    pair = analyze_tangent_cone(P("x*y", 3))
    assert [c.kind for c in pair.components] == ["line", "line"] and pair.vertex == (0, 0, 1)
    conic = analyze_tangent_cone(P("x*y+z^2", 3))
    assert [c.kind for c in conic.components] == ["conic"] and conic.singular_basis == []
    # characteristic 2: x^2 + y^2 + z^2 = (x + y + z)^2 is a double line
    assert len(analyze_tangent_cone(P("x^2+y^2+z^2", 2)).singular_basis) == 2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_curve_count_equals_subscript_for_catalog(p):
    for entry in catalog_entries(p, max_n=8):
        tree = resolve(entry.normal_form)
        assert len(tree.curves) == entry.n, entry.name
        assert graph_type(dual_graph(tree)) == entry.label.graph_type, entry.name


def test_leaves_are_smooth():
    for text, p in [("z^2+x^3+y^5", 5), ("z^2+x^2*y+x*y^3", 2), ("z^2+x^3+y^4", 3)]:
        tree = resolve(P(text, p))
        for leaf in tree.leaves:
            assert singular_points(leaf) == []
            g = leaf.equation
            F = g.field
            # the exceptional locus of a leaf chart carries no singular point over the tree's field
            for a in range(F.q):
                for b in range(F.q):
                    pt = [a, b]
                    pt.insert(leaf.index, 0)
                    assert not is_singular_at(g, tuple(pt))


def test_json_is_deterministic():
    a = resolve(P("z^2+x^3+y^5+x*y^3*z", 2)).to_json()
    b = resolve(P("z^2+x^3+y^5+x*y^3*z", 2)).to_json()
    assert a == b
    data = json.loads(a)
    assert data["curves"] and data["blowups"]


def test_extension_field_is_used_when_needed():
    tree = resolve(P("z^2+x^3+y^4", 3))
    assert tree.field == field(3, 2)
