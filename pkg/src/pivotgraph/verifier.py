"""Exhaustive verification of the pivot bounds over small connected graphs."""

from __future__ import annotations

import logging
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from pivotgraph import __version__
from pivotgraph.autgroup import (
    POLICIES,
    automorphism_group,
    canonical_form,
    canonical_relabel,
    subgroup_actions,
)
from pivotgraph.errors import CapacityError, InputError
from pivotgraph.graph import ColoredGraph, prune_leaves
from pivotgraph.permgroup import (
    Images,
    PermGroup,
    compose,
    default_cap,
)
from pivotgraph.pivot import CHECKS, CheckResult, run_checks

log = logging.getLogger(__name__)

MAX_N = 9
EXTREMAL_SAMPLES = 5


@dataclass(frozen=True)
class EnumerationSpec:
    max_n: int
    policy: str = "pairs"
    cap: int = field(default_factory=default_cap)
    jobs: int = 1
    up_to_conjugacy: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.max_n <= MAX_N:
            raise InputError(f"max_n must be in 1..{MAX_N}, got {self.max_n}")
        if self.policy not in POLICIES:
            raise InputError(f"unknown policy {self.policy!r}")
        if self.cap < 1:
            raise InputError("cap must be positive")
        if self.jobs < 1:
            raise InputError("jobs must be positive")

    def to_dict(self) -> dict:
        return {
            "max_n": self.max_n,
            "policy": self.policy,
            "cap": self.cap,
            "up_to_conjugacy": self.up_to_conjugacy,
        }


# ---- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def _connected(n: int) -> tuple[ColoredGraph, ...]:
    if n == 1:
        return (ColoredGraph.from_edges(["v0"], []),)
    # every connected graph has a vertex whose removal leaves it connected
    new = f"v{n - 1}"
    found: dict[str, ColoredGraph] = {}
    for h in _connected(n - 1):
        verts = h.vertices
        for r in range(1, len(verts) + 1):
            for nbrs in combinations(verts, r):
                g = ColoredGraph.from_edges(verts + [new], h.edges + [(u, new) for u in nbrs])
                form = canonical_form(g)
                if form.code not in found:
                    found[form.code] = canonical_relabel(g, form)
    return tuple(found[k] for k in sorted(found))


def enumerate_connected(n: int) -> Iterator[ColoredGraph]:
    """One canonically labeled representative per isomorphism class of connected graphs."""
    if not 1 <= n <= MAX_N:
        raise InputError(f"n must be in 1..{MAX_N}, got {n}")
    yield from _connected(n)


# ---- per-graph work unit --------------------------------------------------------


@dataclass
class GraphResult:
    n: int
    index: int
    actions: int = 0
    tallies: Counter = field(default_factory=Counter)
    counterexamples: list[dict] = field(default_factory=list)
    tight: dict[str, list[dict]] = field(default_factory=dict)
    tight_counts: Counter = field(default_factory=Counter)
    capacity_skip: str | None = None


def _actions(g: ColoredGraph, spec: EnumerationSpec) -> list[PermGroup]:
    aut = automorphism_group(g, spec.cap)
    return subgroup_actions(aut, spec.policy, spec.cap, up_to_conjugacy=spec.up_to_conjugacy)


def _run_graph(args: tuple[int, int, EnumerationSpec]) -> GraphResult:
    n, index, spec = args
    g = _connected(n)[index]
    res = GraphResult(n, index)
    try:
        actions = _actions(g, spec)
    except CapacityError as exc:
        res.capacity_skip = str(exc)
        return res
    for H in actions:
        _, checks = run_checks(g, H, validate=False)
        res.actions += 1
        for name in CHECKS:
            c = checks[name]
            res.tallies[(name, c.status)] += 1
            if c.status == "fail":
                res.counterexamples.append(_bundle(g, H, c))
            elif c.tight:
                res.tight_counts[name] += 1
                sample = res.tight.setdefault(name, [])
                if len(sample) < EXTREMAL_SAMPLES:
                    sample.append(_bundle(g, H, c))
    return res


def _bundle(g: ColoredGraph, H: PermGroup, c: CheckResult) -> dict:
    return {
        "check": c.name,
        "graph": g.to_dict(),
        "group": H.to_dict(),
        "group_order": H.order(),
        "result": c.to_dict(),
    }


# ---- suite ------------------------------------------------------------------------


@dataclass
class VerificationReport:
    spec: EnumerationSpec
    graphs_per_n: dict[int, int]
    actions_per_n: dict[int, int]
    tallies: dict[str, dict[str, int]]
    tight_counts: dict[str, int]
    extremal_samples: dict[str, list[dict]]
    counterexamples: list[dict]
    capacity_skips: list[dict]
    property_suite: dict | None = None

    @property
    def actions_tested(self) -> int:
        return sum(self.actions_per_n.values())

    @property
    def ok(self) -> bool:
        prop_ok = self.property_suite is None or not self.property_suite["violations"]
        return not self.counterexamples and prop_ok

    def to_dict(self) -> dict:
        out = {
            "tool": {"name": "pivotgraph", "version": __version__},
            "config": self.spec.to_dict(),
            "graphs_per_n": {str(k): v for k, v in sorted(self.graphs_per_n.items())},
            "actions_per_n": {str(k): v for k, v in sorted(self.actions_per_n.items())},
            "actions_tested": self.actions_tested,
            "checks": {
                name: {**self.tallies[name], "tight": self.tight_counts.get(name, 0)} for name in CHECKS
            },
            "capacity_skips": self.capacity_skips,
            "counterexamples": self.counterexamples,
            "extremal_samples": {k: self.extremal_samples[k] for k in CHECKS if k in self.extremal_samples},
        }
        if self.property_suite is not None:
            out["property_suite"] = self.property_suite
        out["status"] = "ok" if self.ok else "counterexample"
        return out


def _units(spec: EnumerationSpec) -> list[tuple[int, int, EnumerationSpec]]:
    return [(n, i, spec) for n in range(1, spec.max_n + 1) for i in range(len(_connected(n)))]


def _map(units, jobs: int):
    if jobs <= 1:
        return [_run_graph(u) for u in units]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_graph, units, chunksize=16))


def run_suite(spec: EnumerationSpec) -> VerificationReport:
    units = _units(spec)
    results = _map(units, spec.jobs)
    # commutative merge: order by (n, index) regardless of schedule
    results.sort(key=lambda r: (r.n, r.index))
    graphs_per_n: Counter = Counter()
    actions_per_n: Counter = Counter()
    tallies = {name: {"pass": 0, "fail": 0, "skip": 0} for name in CHECKS}
    tight_counts: Counter = Counter()
    samples: dict[str, list[dict]] = {}
    counterexamples: list[dict] = []
    skips: list[dict] = []
    for r in results:
        graphs_per_n[r.n] += 1
        actions_per_n[r.n] += r.actions
        for (name, status), k in r.tallies.items():
            tallies[name][status] += k
        tight_counts.update(r.tight_counts)
        for name, items in r.tight.items():
            room = EXTREMAL_SAMPLES - len(samples.setdefault(name, []))
            samples[name].extend(items[:max(room, 0)])
        counterexamples.extend(r.counterexamples)
        if r.capacity_skip:
            g = _connected(r.n)[r.index]
            log.warning("skipping graph %s: %s", g.edges, r.capacity_skip)
            skips.append({"graph": g.to_dict(), "reason": r.capacity_skip})
    for n in range(1, spec.max_n + 1):
        graphs_per_n.setdefault(n, 0)
        actions_per_n.setdefault(n, 0)
    return VerificationReport(
        spec, dict(graphs_per_n), dict(actions_per_n), tallies, dict(tight_counts), samples,
        counterexamples, skips,
    )


def find_extremal(spec: EnumerationSpec, which: str) -> list[tuple[ColoredGraph, PermGroup]]:
    """All (graph, action) pairs where the named bound holds with zero slack."""
    if which not in CHECKS:
        raise InputError(f"unknown check {which!r}; expected one of {', '.join(CHECKS)}")
    out = []
    for n in range(1, spec.max_n + 1):
        for g in _connected(n):
            try:
                actions = _actions(g, spec)
            except CapacityError:
                continue
            for H in actions:
                _, checks = run_checks(g, H, validate=False)
                if checks[which].tight:
                    out.append((g, H))
    return out


# ---- randomized property pass ---------------------------------------------------------


def random_connected_graph(rng: random.Random, n: int, p: float) -> ColoredGraph:
    verts = [f"v{i}" for i in range(n)]
    edges: set[frozenset[str]] = set()
    order = verts[:]
    rng.shuffle(order)
    # random spanning tree first, then independent extra edges
    for i in range(1, n):
        edges.add(frozenset((order[rng.randrange(i)], order[i])))
    for a, b in combinations(verts, 2):
        if rng.random() < p:
            edges.add(frozenset((a, b)))
    return ColoredGraph.from_edges(verts, sorted(tuple(sorted(e)) for e in edges))


def random_element(rng: random.Random, G: PermGroup, uniform_limit: int = 5040) -> Images:
    """Uniform when |G| <= uniform_limit, otherwise a random word of random length."""
    if not G.generators:
        return G.identity
    if G.order() <= uniform_limit:
        return rng.choice(sorted(G.elements))
    e = G.identity
    for _ in range(rng.randint(1, 40)):
        e = compose(rng.choice(G.generators), e)
    return e


def random_nontrivial(rng: random.Random, G: PermGroup, tries: int = 8) -> Images:
    h = G.identity
    for _ in range(tries):
        h = random_element(rng, G)
        if h != G.identity:
            break
    return h


def _cyclic_power(h: Images, ident: Images) -> Images:
    """A generator of a proper nontrivial subgroup of <h>, or identity."""
    order, x = 1, h
    while x != ident:
        x = compose(h, x)
        order += 1
    for p in range(2, order + 1):
        if order % p == 0:
            y = ident
            for _ in range(p):
                y = compose(h, y)
            return y
    return ident


def _restrict(H: PermGroup, keep: list[str]) -> PermGroup:
    pos = {H.index(v): i for i, v in enumerate(keep)}
    elems = {tuple(pos[e[H.index(v)]] for v in keep) for e in H.elements}
    return PermGroup.from_elements(tuple(keep), elems, H.cap)


def run_property_suite(cases: int = 1000, seed: int = 0, max_n: int = 12, group_cap: int = 5040) -> dict:
    """Seeded random checks of the structural pivot properties.

    For each case: degree-1 and odd-degree vertices are never pivot,
    pivot sets grow with the group, pivot vertices survive leaf pruning
    and stay pivot under the restricted action, and orbit-stabilizer holds.
    """
    from pivotgraph.pivot import _analyse

    rng = random.Random(seed)
    violations: list[dict] = []
    counts: Counter = Counter()

    def fail(kind: str, g: ColoredGraph, H: PermGroup, detail: str) -> None:
        violations.append({"property": kind, "graph": g.to_dict(), "group": H.to_dict(), "detail": detail})

    for _ in range(cases):
        n = rng.randint(2, max_n)
        g = random_connected_graph(rng, n, rng.uniform(0.05, 0.6))
        aut = automorphism_group(g)
        ident = aut.identity
        h = random_nontrivial(rng, aut)
        small = PermGroup(aut.domain, (h,))
        big = aut if aut.order() <= group_cap else None
        for _try in range(0 if big is not None else 3):
            k = random_element(rng, aut)
            try:
                big = PermGroup(aut.domain, (h, k), group_cap)
                big.elements  # noqa: B018
                break
            except CapacityError:
                big = None
        if big is None:
            big, small = small, PermGroup(aut.domain, (_cyclic_power(h, ident),))
            counts["fallback_cyclic_pair"] += 1
        counts["cases"] += 1
        if h != ident:
            counts["nontrivial_cyclic"] += 1

        acts = {}
        for label, G in (("small", small), ("big", big)):
            act = _analyse(g, G, validate=False)
            acts[label] = act
            for i, x in enumerate(G.domain):
                deg = len(g.adj[x])
                if act.pivot[i] and deg == 1:
                    fail("degree_one_pivot", g, G, x)
                if act.pivot[i] and deg % 2 == 1:
                    fail("odd_degree_pivot", g, G, x)
            elems = G.elements
            for i, x in enumerate(G.domain):
                stab = sum(1 for e in elems if e[i] == i)
                if stab * len(act.orbit_of[i]) != len(elems):
                    fail("orbit_stabilizer", g, G, x)
            counts["orbit_stabilizer_checks"] += len(G.domain)

        w_small = {x for i, x in enumerate(small.domain) if acts["small"].pivot[i]}
        w_big = {x for i, x in enumerate(big.domain) if acts["big"].pivot[i]}
        if not small.elements <= big.elements:
            fail("subgroup_setup", g, small, "small group is not contained in big group")
        if len(small.elements) < len(big.elements):
            counts["proper_enlargement"] += 1
        if w_small:
            counts["nonempty_pivot_set"] += 1
        if not w_small <= w_big:
            fail("monotonicity", g, big, f"{sorted(w_small - w_big)} pivot for subgroup only")

        pruned = prune_leaves(g)
        keep = pruned.vertices
        if not w_small <= set(keep):
            fail("pruning_survival", g, small, f"{sorted(w_small - set(keep))} removed by pruning")
        if keep:
            restricted = _restrict(small, keep)
            act_p = _analyse(pruned, restricted, validate=False)
            w_pruned = {x for i, x in enumerate(restricted.domain) if act_p.pivot[i]}
            if not w_small <= w_pruned:
                fail("pruning_pivot", g, small, f"{sorted(w_small - w_pruned)} not pivot after pruning")
        counts["pruning_checks"] += 1

    return {
        "cases": cases,
        "seed": seed,
        "max_n": max_n,
        "counts": dict(sorted(counts.items())),
        "violations": violations,
    }


