"""Pivot vertices of a group action on a graph, and the bounds they obey.

A vertex v is a G-pivot vertex when, for every neighbor w, the orbit of w
under the stabilizer of v in G has even size.  Isolated vertices are pivot
vertices vacuously.

Every bound is evaluated as one or more integer/rational inequalities so
reports can show the slack of the tightest instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from pivotgraph.autgroup import automorphism_group
from pivotgraph.errors import InputError
from pivotgraph.graph import ColoredGraph, betti, is_connected, is_tree
from pivotgraph.permgroup import Images, PermGroup, Permutation, close, is_action_on

Status = Literal["pass", "fail", "skip"]

CHECKS = (
    "tree_bound",
    "fixed_vertex_bound",
    "orbit_excision_bound",
    "main_pivot_bound",
    "orbit_count_bound",
    "total_bound",
)


@dataclass(frozen=True)
class Inequality:
    label: str
    lhs: int | Fraction
    rhs: int | Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def slack(self) -> int | Fraction:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {"label": self.label, "lhs": _num(self.lhs), "rhs": _num(self.rhs), "slack": _num(self.slack)}


def _num(x: int | Fraction) -> int | str:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: Status
    inequalities: tuple[Inequality, ...] = ()
    detail: str = ""

    @property
    def slack(self) -> int | Fraction | None:
        if not self.inequalities:
            return None
        return min(i.slack for i in self.inequalities)

    @property
    def tight(self) -> bool:
        return self.status == "pass" and self.slack == 0

    def to_dict(self) -> dict:
        out: dict = {"status": self.status}
        if self.inequalities:
            out["inequalities"] = [i.to_dict() for i in self.inequalities]
            out["slack"] = _num(self.slack)
        if self.detail:
            out["detail"] = self.detail
        return out


def _result(name: str, ineqs: list[Inequality], detail: str = "", extra_ok: bool = True) -> CheckResult:
    ok = extra_ok and all(i.holds for i in ineqs)
    return CheckResult(name, "pass" if ok else "fail", tuple(ineqs), detail)


def _skip(name: str, why: str) -> CheckResult:
    return CheckResult(name, "skip", (), why)


# ---- core computation ----------------------------------------------------


@dataclass
class _Action:
    """Index-level view of (graph, group) shared by every check."""

    g: ColoredGraph
    G: PermGroup
    nbrs: list[list[int]] = field(repr=False)
    orbit_of: list[frozenset[int]] = field(repr=False)
    pivot: list[bool] = field(repr=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.G.domain

    def names(self, idx) -> list[str]:
        return sorted(self.labels[i] for i in idx)


def _stabilizer_orbit_sizes(elements, v: int, nbrs: list[int]) -> list[int]:
    stab = [e for e in elements if e[v] == v]
    return [len({e[w] for e in stab}) for w in nbrs]


def _analyse(g: ColoredGraph, G: PermGroup, validate: bool = True) -> _Action:
    if validate and not is_action_on(G, g):
        raise InputError("group does not act on the graph by color-preserving automorphisms")
    dom = G.domain
    index = {x: i for i, x in enumerate(dom)}
    nbrs = [sorted(index[u] for u in g.adj[x]) for x in dom]
    n = len(dom)
    orbit_of: list[frozenset[int] | None] = [None] * n
    for i in range(n):
        if orbit_of[i] is None:
            orb = frozenset(G.orbit_indices(i))
            for j in orb:
                orbit_of[j] = orb
    elements = G.elements
    pivot = [False] * n
    done: set[int] = set()
    for i in range(n):
        if i in done:
            continue
        # pivot status is constant on orbits
        status = all(s % 2 == 0 for s in _stabilizer_orbit_sizes(elements, i, nbrs[i]))
        for j in orbit_of[i]:
            pivot[j] = status
        done |= orbit_of[i]
    return _Action(g, G, nbrs, orbit_of, pivot)  # type: ignore[arg-type]


def is_pivot(g: ColoredGraph, G: PermGroup, v: str) -> bool:
    if v not in g:
        raise InputError(f"unknown vertex {v!r}")
    if not is_action_on(G, g):
        raise InputError("group does not act on the graph by color-preserving automorphisms")
    i = G.index(v)
    nbrs = [G.index(u) for u in g.adj[v]]
    return all(s % 2 == 0 for s in _stabilizer_orbit_sizes(G.elements, i, nbrs))


def pivot_set(g: ColoredGraph, G: PermGroup) -> list[str]:
    act = _analyse(g, G)
    return act.names(i for i, p in enumerate(act.pivot) if p)


# ---- the six checks --------------------------------------------------------


def _pivots(act: _Action) -> set[int]:
    return {i for i, p in enumerate(act.pivot) if p}


def _fixed(act: _Action) -> set[int]:
    return {i for i, o in enumerate(act.orbit_of) if len(o) == 1}


def _tree_bound(act: _Action, W: set[int]) -> CheckResult:
    name = "tree_bound"
    if not is_tree(act.g):
        return _skip(name, "graph is not a tree")
    return _result(name, [Inequality("|W| <= 1", len(W), 1)])


def _fixed_vertex_bound(act: _Action, W: set[int], beta: int) -> CheckResult:
    name = "fixed_vertex_bound"
    fixed = sorted(_fixed(act))
    if not fixed:
        return _skip(name, "no G-fixed vertex")
    ineqs = [Inequality(f"|W - {{{act.labels[v0]}}}| <= beta", len(W - {v0}), beta) for v0 in fixed]
    worst = min(ineqs, key=lambda i: (i.slack, i.label))
    return _result(name, [worst], f"{len(fixed)} fixed vertices checked",
                   extra_ok=all(i.holds for i in ineqs))


def _orbit_excision_bound(act: _Action, W: set[int], beta: int) -> CheckResult:
    name = "orbit_excision_bound"
    ineqs = []
    for orb in sorted(set(act.orbit_of), key=lambda o: min(o)):
        rep = act.labels[min(orb)]
        ineqs.append(Inequality(f"|W - G{rep}| <= beta + |G{rep}| - 1", len(W - orb), beta + len(orb) - 1))
    worst = min(ineqs, key=lambda i: (i.slack, i.label))
    return _result(name, [worst], f"{len(ineqs)} orbits checked", extra_ok=all(i.holds for i in ineqs))


def _pivot_orbits(act: _Action, W: set[int]) -> list[frozenset[int]]:
    return sorted({act.orbit_of[w] for w in W}, key=lambda o: min(o))


def _main_pivot_bound(act: _Action, W: set[int], beta: int) -> CheckResult:
    name = "main_pivot_bound"
    if not W:
        return _skip(name, "no pivot vertices")
    orbits = _pivot_orbits(act, W)
    d = min(len(o) for o in orbits)
    return _result(name, [
        Inequality("|W| <= beta + 2d - 1", len(W), beta + 2 * d - 1),
        Inequality("N <= (beta - 1)/d + 2", len(orbits), Fraction(beta - 1, d) + 2),
    ])


def _orbit_count_bound(act: _Action, W: set[int], beta: int) -> CheckResult:
    name = "orbit_count_bound"
    N = len(_pivot_orbits(act, W))
    ineq = Inequality("N <= beta + 1", N, beta + 1)
    if N != beta + 1:
        return _result(name, [ineq])
    fixed = _fixed(act)
    if W == fixed:
        why, ok = "equality: pivot set equals the G-fixed set", True
    elif beta == 1 and not fixed:
        why, ok = "equality: beta = 1 and no G-fixed vertex", True
    else:
        why, ok = "equality reached but neither equality case applies", False
    return _result(name, [ineq], why, extra_ok=ok)


def _total_bound(W: set[int], beta: int, detail: str) -> CheckResult:
    name = "total_bound"
    if beta < 2:
        return _skip(name, "beta < 2")
    return _result(name, [Inequality("|W| <= 3(beta - 1)", len(W), 3 * (beta - 1))], detail)


def _require_connected(g: ColoredGraph) -> int:
    if not is_connected(g):
        raise InputError("pivot bounds require a connected graph")
    return betti(g)


def check_tree_bound(g: ColoredGraph, G: PermGroup) -> CheckResult:
    if not is_tree(g):
        return _skip("tree_bound", "graph is not a tree")
    act = _analyse(g, G)
    return _tree_bound(act, _pivots(act))


def check_fixed_vertex_bound(g: ColoredGraph, G: PermGroup) -> CheckResult:
    beta = _require_connected(g)
    act = _analyse(g, G)
    return _fixed_vertex_bound(act, _pivots(act), beta)


def check_orbit_excision_bound(g: ColoredGraph, G: PermGroup) -> CheckResult:
    beta = _require_connected(g)
    act = _analyse(g, G)
    return _orbit_excision_bound(act, _pivots(act), beta)


def check_main_pivot_bounds(g: ColoredGraph, G: PermGroup) -> CheckResult:
    beta = _require_connected(g)
    act = _analyse(g, G)
    return _main_pivot_bound(act, _pivots(act), beta)


def check_orbit_count_bound(g: ColoredGraph, G: PermGroup) -> CheckResult:
    beta = _require_connected(g)
    act = _analyse(g, G)
    return _orbit_count_bound(act, _pivots(act), beta)


def check_total_bound(g: ColoredGraph, G: PermGroup | None = None) -> CheckResult:
    """Pivot count against 3(beta - 1); uses the full automorphism group unless G is given."""
    beta = _require_connected(g)
    if beta < 2:
        return _skip("total_bound", "beta < 2")
    full = G is None
    act = _analyse(g, automorphism_group(g) if full else G, validate=not full)
    return _total_bound(_pivots(act), beta, "full automorphism group" if full else "supplied group")


# ---- report ----------------------------------------------------------------


@dataclass(frozen=True)
class PivotReport:
    n_vertices: int
    n_edges: int
    group_order: int
    pivots: tuple[str, ...]
    pivot_orbits: tuple[tuple[str, ...], ...]
    betti: int
    checks: dict[str, CheckResult]

    @property
    def n_orbits(self) -> int:
        return len(self.pivot_orbits)

    @property
    def d(self) -> int | None:
        return min((len(o) for o in self.pivot_orbits), default=None)

    @property
    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if c.status == "fail"]

    def to_dict(self) -> dict:
        return {
            "graph": {"n_vertices": self.n_vertices, "n_edges": self.n_edges},
            "group_order": self.group_order,
            "betti": self.betti,
            "pivots": list(self.pivots),
            "pivot_orbits": [list(o) for o in self.pivot_orbits],
            "N": self.n_orbits,
            "d": self.d,
            "checks": {k: self.checks[k].to_dict() for k in CHECKS if k in self.checks},
        }


def run_checks(g: ColoredGraph, G: PermGroup, validate: bool = True) -> tuple[_Action, dict[str, CheckResult]]:
    beta = _require_connected(g)
    act = _analyse(g, G, validate)
    W = _pivots(act)
    checks = {
        "tree_bound": _tree_bound(act, W),
        "fixed_vertex_bound": _fixed_vertex_bound(act, W, beta),
        "orbit_excision_bound": _orbit_excision_bound(act, W, beta),
        "main_pivot_bound": _main_pivot_bound(act, W, beta),
        "orbit_count_bound": _orbit_count_bound(act, W, beta),
        "total_bound": _total_bound(W, beta, "supplied group"),
    }
    return act, checks


def pivot_report(g: ColoredGraph, G: PermGroup) -> PivotReport:
    act, checks = run_checks(g, G)
    W = _pivots(act)
    orbits = _pivot_orbits(act, W)
    return PivotReport(
        n_vertices=g.n_vertices,
        n_edges=g.n_edges,
        group_order=G.order(),
        pivots=tuple(act.names(W)),
        pivot_orbits=tuple(tuple(act.names(o)) for o in orbits),
        betti=betti(g),
        checks=checks,
    )


# ---- example families ------------------------------------------------------


def gen_circle(n: int) -> ColoredGraph:
    if n < 3:
        raise InputError("circle graph needs n >= 3")
    vs = [f"v{i}" for i in range(n)]
    return ColoredGraph.from_edges(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def gen_path(n: int) -> ColoredGraph:
    if n < 1:
        raise InputError("path graph needs n >= 1")
    vs = [f"v{i}" for i in range(n)]
    return ColoredGraph.from_edges(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])


def gen_star(n: int) -> ColoredGraph:
    """K_{1,n}: center v0, leaves v1..vn."""
    if n < 1:
        raise InputError("star graph needs n >= 1 leaves")
    vs = [f"v{i}" for i in range(n + 1)]
    return ColoredGraph.from_edges(vs, [("v0", v) for v in vs[1:]])


def gen_necklace(n: int) -> ColoredGraph:
    """a_i joined to b_{i-1}, c_{i-1}, b_i, c_i with indices mod n.

    For n = 1 the four prescribed neighbors collapse to two, giving the
    path b1 - a1 - c1.
    """
    if n < 1:
        raise InputError("necklace needs n >= 1")
    vs = [f"{x}{i}" for i in range(1, n + 1) for x in "abc"]
    edges = set()
    for i in range(1, n + 1):
        prev = n if i == 1 else i - 1
        for x in (f"b{prev}", f"c{prev}", f"b{i}", f"c{i}"):
            edges.add(tuple(sorted((f"a{i}", x))))
    return ColoredGraph.from_edges(vs, sorted(edges))


def circle_rotation(n: int) -> Permutation:
    g = gen_circle(n)
    return Permutation.from_mapping(g.vertices, {f"v{i}": f"v{(i + 1) % n}" for i in range(n)})


def circle_reflection(n: int, shift: int = 0) -> Permutation:
    """v_i -> v_{shift - i}; fixes vertices when shift is even."""
    g = gen_circle(n)
    return Permutation.from_mapping(g.vertices, {f"v{i}": f"v{(shift - i) % n}" for i in range(n)})


def circle_dihedral(n: int, cap: int | None = None) -> PermGroup:
    return close([circle_rotation(n), circle_reflection(n)], cap)


def circle_index2_dihedral(n: int, cap: int | None = None) -> PermGroup:
    """Index-2 dihedral subgroup generated by the double rotation and a vertex-fixing reflection.

    For even n this subgroup has two vertex orbits (even and odd positions).
    """
    if n % 2:
        raise InputError("index-2 dihedral subgroup needs even n")
    r = circle_rotation(n)
    return close([r * r, circle_reflection(n)], cap)
