from __future__ import annotations

import warnings
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import to_nx
from pivotgraph.errors import DataInconsistencyError
from pivotgraph.fiber import (
    ComponentData,
    NonMinimalWarning,
    PointData,
    beta_hat,
    bound_report,
    build_intersection_graph,
    check_betti_genus_chain,
    epsilon,
    fiber_genus,
    make_fiber,
    structural_warnings,
)
from pivotgraph.graph import CYAN, PINK, betti, is_connected
from pivotgraph.permgroup import is_action_on


def rational(cid, square=-2, d=1):
    return ComponentData(cid, d, 0, 0, square)


def i2(swap=False):
    pts = [PointData("P", ("A", "B")), PointData("Q", ("A", "B"))]
    return make_fiber([rational("A"), rational("B")], pts, [{"P": "Q", "Q": "P"}] if swap else [])


def i_n(n):
    ids = [f"C{i}" for i in range(n)]
    pts = [PointData(f"P{i}", (ids[i], ids[(i + 1) % n])) for i in range(n)]
    return make_fiber([rational(c) for c in ids], pts)


def type_iii():
    return make_fiber([rational("A"), rational("B")], [PointData("P", ("A", "B"), {("A", "B"): 2})])


def single(genus=2):
    return make_fiber([ComponentData("E", 1, genus, genus, 0)])


def invariants(f):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonMinimalWarning)
        return betti(build_intersection_graph(f)), beta_hat(f), fiber_genus(f), epsilon(f)


def test_single_component():
    f = single()
    g = build_intersection_graph(f)
    assert g.vertices == ["E"] and betti(g) == 0
    assert invariants(f) == (0, 0, 2, 0)
    c = check_betti_genus_chain(f)
    assert (c.left.lhs, c.left.rhs, c.right.rhs) == (0, 0, 0)
    r = bound_report(f)
    assert r.betti_bound.lhs == 1 and r.N in (0, 1)


def test_i2_values():
    f = i2()
    g = build_intersection_graph(f)
    assert (g.n_vertices, g.n_edges) == (4, 4)
    assert invariants(f) == (1, 1, 1, 0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_i_n_values(n):
    f = i_n(n)
    g = build_intersection_graph(f)
    assert (g.n_vertices, g.n_edges) == (2 * n, 2 * n)
    assert invariants(f) == (1, 1, 1, 0)


def test_type_iii_values():
    assert invariants(type_iii()) == (0, 1, 1, 0)


def test_i2_equality_diagnostics():
    c = check_betti_genus_chain(i2())
    assert c.status == "pass"
    assert c.equality_observed
    assert c.refined_predicts_equality and c.refined_agrees
    assert not c.literal_predicts_equality and not c.literal_agrees
    assert c.flags == ["literal_equality_criterion_disagrees"]


def test_type_iii_diagnostics_predict_strict():
    c = check_betti_genus_chain(type_iii())
    assert (c.left.lhs, c.left.rhs, c.right.rhs) == (0, 1, 1)
    assert not c.equality_observed
    assert not c.literal_predicts_equality and not c.refined_predicts_equality
    assert c.flags == []
    assert c.excess_multiplicity == 1 and c.excess_degree == 0


def test_i2_swap_bound_chain_is_tight():
    r = bound_report(i2(swap=True))
    assert r.pivot_cyan == ("A", "B")
    assert r.N == 2 == r.chain.beta + 1 == r.betti_bound.rhs
    assert r.tight and r.status == "pass"
    assert r.conic_candidates == ("A", "B")


def test_i2_trivial_action_has_no_pivots():
    r = bound_report(i2())
    assert r.N == 0 and r.pivot_cyan == ()
    assert r.ruled_or_excluded == ("A", "B")


def test_epsilon_examples():
    # E: d=3, g=1, E^2=-1 meeting a -3 curve twice; X_s^2 = -9 - 3 + 2*3*2 = 0
    f = make_fiber([ComponentData("E", 3, 1, 1, -1), ComponentData("F", 1, 0, 0, -3)],
                   [PointData("P", ("E", "F")), PointData("Q", ("E", "F"))])
    assert epsilon(f) == 1
    assert fiber_genus(f) == 3
    # E: d=2, g=0, E^2=-1 meeting a -4 curve twice; X_s^2 = -4 - 4 + 2*2*2 = 0
    g = make_fiber([ComponentData("E", 2, 0, 0, -1), ComponentData("F", 1, 0, 0, -4)],
                   [PointData("P", ("E", "F")), PointData("Q", ("E", "F"))])
    with pytest.warns(NonMinimalWarning, match="not relatively minimal"):
        assert epsilon(g) == Fraction(-1, 2)
    assert any("not relatively minimal" in w for w in check_betti_genus_chain(g).warnings)


def test_no_minus_one_components_gives_zero_epsilon():
    assert epsilon(i2()) == 0 and epsilon(type_iii()) == 0


def test_synthetic_data_reports_hypothesis_violation():
    # valid under the default checks, but C2 has square 0 in a reducible fiber and nothing is balanced
    f = make_fiber(
        [ComponentData("C0", 2, 1, 1, -1), ComponentData("C1", 2, 0, 0, -3), ComponentData("C2", 2, 0, 0, 0)],
        [PointData("P0", ("C0", "C1")), PointData("P1", ("C0", "C2"))],
    )
    c = check_betti_genus_chain(f)
    assert not c.right.holds
    assert c.status == "hypothesis_violation"
    assert any("reducible fiber" in w for w in c.warnings)
    assert bound_report(f).status == "hypothesis_violation"


def test_fiber_genus_examples():
    assert fiber_genus(single(2)) == 2
    assert fiber_genus(i2()) == 1


@pytest.mark.parametrize(
    "components,points,gens,constraint",
    [
        ([rational("A"), rational("A")], [], [], "unique_ids"),
        ([rational("A"), rational("B")], [PointData("P", ("A",))], [], "point_incidence"),
        ([rational("A"), rational("B")], [PointData("P", ("A", "Z"))], [], "point_incidence"),
        ([rational("A"), rational("B")], [PointData("P", ("A", "B"), {("A", "B"): 0})], [], "local_multiplicity"),
        ([ComponentData("A", 0, 0, 0, 0)], [], [], "multiplicity_positive"),
        ([ComponentData("A", 1, 0, 1, 0)], [], [], "geometric_genus_le_genus"),
        ([rational("A", -1), rational("B")], [PointData("P", ("A", "B")), PointData("Q", ("A", "B"))], [],
         "fiber_square_zero"),
        ([rational("A"), rational("B", -3)], [PointData("P", ("A", "B")), PointData("Q", ("A", "B"))],
         [{"A": "B", "B": "A"}], "galois_action"),
        ([rational("A"), rational("B")], [PointData("P", ("A", "B")), PointData("Q", ("A", "B"))],
         [{"A": "P", "P": "A"}], "galois_action"),
    ],
)
def test_constraint_violations_named(components, points, gens, constraint):
    with pytest.raises(DataInconsistencyError) as info:
        make_fiber(components, points, gens)
    assert info.value.constraint == constraint
    assert str(info.value).startswith(constraint)


def test_reduced_square_positive_rejected():
    # X_s^2 = 0 - 4 + 2*2 = 0 but (A + B)^2 = 0 - 1 + 2 = 1
    comps = [ComponentData("A", 1, 0, 0, 0), ComponentData("B", 2, 0, 0, -1)]
    with pytest.raises(DataInconsistencyError) as info:
        make_fiber(comps, [PointData("P", ("A", "B"))])
    assert info.value.constraint == "reduced_square_nonpositive"


def test_strict_balance():
    comps = [rational("A", -1), rational("B", -3)]
    pts = [PointData("P", ("A", "B")), PointData("Q", ("A", "B"))]
    make_fiber(comps, pts)  # fiber square -1 - 3 + 4 = 0
    with pytest.raises(DataInconsistencyError) as info:
        make_fiber(comps, pts, strict=True)
    assert info.value.constraint == "component_balance"


def test_disconnected_fiber_rejected():
    f = make_fiber([ComponentData("A", 1, 1, 1, 0), ComponentData("B", 1, 1, 1, 0)])
    with pytest.raises(DataInconsistencyError) as info:
        check_betti_genus_chain(f)
    assert info.value.constraint == "connected"


def test_galois_acts_on_graph():
    f = i2(swap=True)
    assert is_action_on(f.galois, build_intersection_graph(f))


# ---- fuzz -----------------------------------------------------------------------


@st.composite
def balanced_fibers(draw):
    """Connected fibers with every component balanced (all multiplicities 1), so X_s^2 = 0."""
    n = draw(st.integers(1, 5))
    ids = [f"C{i}" for i in range(n)]
    points = []
    k = 0

    def add(incident):
        nonlocal k
        mults = {}
        for a, b in combinations(sorted(incident), 2):
            mults[(a, b)] = draw(st.integers(1, 3))
        points.append(PointData(f"P{k}", tuple(incident), mults))
        k += 1

    for i in range(1, n):
        add([ids[draw(st.integers(0, i - 1))], ids[i]])
    for _ in range(draw(st.integers(0, 4)) if n > 1 else 0):
        size = draw(st.integers(2, min(n, 4)))
        add(draw(st.permutations(ids))[:size])
    m = {c: 0 for c in ids}
    for p in points:
        for (a, b), v in p.local_multiplicities.items():
            m[a] += v
            m[b] += v
    comps = []
    for c in ids:
        g = draw(st.integers(0, 2))
        comps.append(ComponentData(c, 1, g, draw(st.integers(0, g)), -m[c]))
    return make_fiber(comps, points, strict=True)


@settings(max_examples=300, deadline=None)
@given(balanced_fibers())
def test_fuzz_chain_properties(f):
    c = check_betti_genus_chain(f)
    assert c.left.holds
    assert structural_warnings(f) == []
    assert c.status != "fail"
    assert c.refined_agrees
    assert c.beta_hat - c.beta == c.excess_multiplicity + c.excess_degree
    assert c.excess_multiplicity == sum(p.multiplicity(a, b) - 1 for p in f.points for a, b in p.pairs())
    assert c.excess_degree == sum((p.degree - 1) * (p.degree - 2) // 2 for p in f.points)
    assert isinstance(c.epsilon, Fraction)
    assert fiber_genus(f) >= 0


@settings(max_examples=150, deadline=None)
@given(balanced_fibers(), st.randoms(use_true_random=False))
def test_fuzz_genus_invariant_under_relabeling(f, rnd):
    ids = f.ids
    new = [f"z{i}" for i in range(len(ids))]
    rnd.shuffle(new)
    ren = dict(zip(ids, new))
    comps = [ComponentData(ren[c.id], c.multiplicity, c.genus, c.geometric_genus, c.self_intersection)
             for c in f.components]
    pts = [PointData(ren[p.id], tuple(ren[x] for x in p.incident),
                     {tuple(sorted((ren[a], ren[b]))): p.multiplicity(a, b) for a, b in p.pairs()})
           for p in f.points]
    h = make_fiber(comps, pts)
    assert fiber_genus(h) == fiber_genus(f)
    assert beta_hat(h) == beta_hat(f)


@settings(max_examples=150, deadline=None)
@given(balanced_fibers())
def test_fuzz_graph_is_bipartite_and_connected(f):
    g = build_intersection_graph(f)
    h = to_nx(g)
    assert is_connected(g) == nx.is_connected(h)
    for a, b in g.edges:
        assert {g.color(a), g.color(b)} == {CYAN, PINK}
