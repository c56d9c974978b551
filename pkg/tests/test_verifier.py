from __future__ import annotations

import json

import networkx as nx
import pytest

from oracles import atlas_connected_counts, brute_connected_classes, to_nx
from pivotgraph.errors import InputError
from pivotgraph.pivot import CHECKS, CheckResult, Inequality, gen_circle, gen_necklace, gen_path, pivot_report
from pivotgraph.verifier import (
    EnumerationSpec,
    enumerate_connected,
    find_extremal,
    run_property_suite,
    run_suite,
)
import pivotgraph.verifier as verifier

EXPECTED_COUNTS = [1, 1, 2, 6, 21, 112, 853]


def test_counts_match_graph_atlas():
    assert atlas_connected_counts(7) == EXPECTED_COUNTS
    assert [sum(1 for _ in enumerate_connected(n)) for n in range(1, 8)] == EXPECTED_COUNTS


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_counts_match_labelled_brute_force(n):
    assert sum(1 for _ in enumerate_connected(n)) == brute_connected_classes(n)


@pytest.mark.parametrize("n", [5, 6])
def test_enumerated_graphs_connected_and_pairwise_non_isomorphic(n):
    gs = [to_nx(g) for g in enumerate_connected(n)]
    assert all(nx.is_connected(h) for h in gs)
    for i, a in enumerate(gs):
        for b in gs[i + 1:]:
            assert not nx.is_isomorphic(a, b)


def test_enumeration_config_validation():
    with pytest.raises(InputError):
        EnumerationSpec(max_n=12)
    with pytest.raises(InputError):
        EnumerationSpec(max_n=3, policy="odd")
    with pytest.raises(InputError):
        EnumerationSpec(max_n=3, jobs=0)


@pytest.mark.parametrize("policy", ["cyclic", "pairs", "all"])
def test_small_suite_has_no_failures(policy):
    r = run_suite(EnumerationSpec(max_n=5, policy=policy))
    assert r.ok
    assert r.graphs_per_n == {1: 1, 2: 1, 3: 2, 4: 6, 5: 21}
    assert all(r.tallies[c]["fail"] == 0 for c in CHECKS)
    assert sum(r.graphs_per_n.values()) >= 4


def test_conjugacy_reduction_loses_no_failures_or_tight_cases_at_n5():
    full = run_suite(EnumerationSpec(max_n=5, up_to_conjugacy=False))
    reduced = run_suite(EnumerationSpec(max_n=5, up_to_conjugacy=True))
    assert reduced.actions_tested <= full.actions_tested
    for name in CHECKS:
        assert (full.tight_counts.get(name, 0) > 0) == (reduced.tight_counts.get(name, 0) > 0)


def test_parallel_run_is_identical():
    spec1 = EnumerationSpec(max_n=5, jobs=1)
    spec2 = EnumerationSpec(max_n=5, jobs=2)
    a, b = run_suite(spec1).to_dict(), run_suite(spec2).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_counterexamples_are_reported(monkeypatch):
    real = verifier.run_checks

    def broken(g, H, validate=True):
        act, checks = real(g, H, validate)
        if g.n_vertices == 3:
            checks["total_bound"] = CheckResult("total_bound", "fail", (Inequality("forced", 1, 0),))
        return act, checks

    monkeypatch.setattr(verifier, "run_checks", broken)
    r = run_suite(EnumerationSpec(max_n=3))
    assert not r.ok
    assert r.counterexamples
    bundle = r.counterexamples[0]
    assert bundle["check"] == "total_bound"
    assert set(bundle) == {"check", "graph", "group", "group_order", "result"}
    assert r.to_dict()["status"] == "counterexample"


def _has(pairs, g, order, n_orbits):
    """Some tight pair is isomorphic to g with a group of the given order and pivot-orbit count."""
    return any(
        nx.is_isomorphic(to_nx(a), to_nx(g)) and b.order() == order and pivot_report(a, b).n_orbits == n_orbits
        for a, b in pairs
    )


def test_find_extremal_examples():
    spec = EnumerationSpec(max_n=6)
    orbit_tight = find_extremal(spec, "orbit_count_bound")
    assert _has(orbit_tight, gen_circle(6), 6, 2)
    assert _has(orbit_tight, gen_path(3), 2, 1)
    total_tight = find_extremal(spec, "total_bound")
    assert _has(total_tight, gen_necklace(2), 48, 2)
    with pytest.raises(InputError):
        find_extremal(spec, "nope")


def test_property_suite_clean_and_deterministic():
    a = run_property_suite(cases=150, seed=5)
    b = run_property_suite(cases=150, seed=5)
    assert a == b
    assert a["violations"] == []
    counts = a["counts"]
    assert counts["nontrivial_cyclic"] > 50
    assert counts["proper_enlargement"] > 10
    assert counts["nonempty_pivot_set"] > 10
    assert counts["orbit_stabilizer_checks"] >= 150


@pytest.mark.slow
def test_unreduced_subgroup_run_agrees_at_n6():
    """Every 2-generated subgroup, not one per conjugacy class."""
    full = run_suite(EnumerationSpec(max_n=6, up_to_conjugacy=False))
    reduced = run_suite(EnumerationSpec(max_n=6))
    assert full.ok and reduced.ok
    for name in CHECKS:
        assert (full.tight_counts.get(name, 0) > 0) == (reduced.tight_counts.get(name, 0) > 0)
