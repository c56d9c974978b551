"""Finite simple undirected graphs with optional cyan/pink vertex colors."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from pivotgraph.errors import InputError

CYAN = "cyan"
PINK = "pink"
COLORS = (None, CYAN, PINK)

# fixed order used by canonical encodings
COLOR_CODE = {None: 0, CYAN: 1, PINK: 2}


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    """Immutable simple graph; vertex ids are opaque nonempty strings.

    Build instances with :meth:`from_edges`, which validates the invariants.
    """

    colors: Mapping[str, str | None]
    adj: Mapping[str, frozenset[str]] = field(repr=False)

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]],
        colors: Mapping[str, str | None] | None = None,
    ) -> ColoredGraph:
        colors = dict(colors or {})
        cmap: dict[str, str | None] = {}
        for v in vertices:
            if not isinstance(v, str) or not v:
                raise InputError(f"vertex id must be a nonempty string, got {v!r}")
            if v in cmap:
                raise InputError(f"duplicate vertex id {v!r}")
            c = colors.pop(v, None)
            if c not in COLORS:
                raise InputError(f"vertex {v!r}: unknown color {c!r}")
            cmap[v] = c
        if colors:
            raise InputError(f"colors given for undeclared vertices: {sorted(colors)}")

        adj: dict[str, set[str]] = {v: set() for v in cmap}
        for e in edges:
            a, b = e
            if a not in adj or b not in adj:
                raise InputError(f"edge {a!r}-{b!r} has an undeclared endpoint")
            if a == b:
                raise InputError(f"loop at {a!r}")
            if b in adj[a]:
                raise InputError(f"duplicate edge {a!r}-{b!r}")
            adj[a].add(b)
            adj[b].add(a)

        if any(c is not None for c in cmap.values()):
            for a in adj:
                for b in adj[a]:
                    if {cmap[a], cmap[b]} != {CYAN, PINK}:
                        raise InputError(
                            f"colored graph must be cyan-pink bipartite; edge {a!r}-{b!r} "
                            f"joins {cmap[a]} and {cmap[b]}"
                        )
        return cls(cmap, {v: frozenset(n) for v, n in adj.items()})

    @property
    def vertices(self) -> list[str]:
        return sorted(self.colors)

    @property
    def edges(self) -> list[tuple[str, str]]:
        return sorted((a, b) for a in self.adj for b in self.adj[a] if a < b)

    @property
    def n_vertices(self) -> int:
        return len(self.colors)

    @property
    def n_edges(self) -> int:
        return sum(len(n) for n in self.adj.values()) // 2

    def __contains__(self, v: object) -> bool:
        return v in self.colors

    def neighbors(self, v: str) -> frozenset[str]:
        _require(self, v)
        return self.adj[v]

    def color(self, v: str) -> str | None:
        _require(self, v)
        return self.colors[v]

    def is_colored(self) -> bool:
        return any(c is not None for c in self.colors.values())

    def induced(self, keep: Iterable[str]) -> ColoredGraph:
        """Full subgraph spanned by ``keep``."""
        keep = set(keep)
        for v in keep:
            _require(self, v)
        colors = {v: self.colors[v] for v in keep}
        adj = {v: frozenset(self.adj[v] & keep) for v in keep}
        return ColoredGraph(colors, adj)

    def without(self, v: str) -> ColoredGraph:
        _require(self, v)
        return self.induced(u for u in self.colors if u != v)

    def relabel(self, mapping: Mapping[str, str]) -> ColoredGraph:
        if sorted(mapping) != self.vertices or len(set(mapping.values())) != len(mapping):
            raise InputError("relabeling must be a bijection on the vertex set")
        colors = {mapping[v]: c for v, c in self.colors.items()}
        adj = {mapping[v]: frozenset(mapping[u] for u in n) for v, n in self.adj.items()}
        return ColoredGraph(colors, adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return dict(self.colors) == dict(other.colors) and dict(self.adj) == dict(other.adj)

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.colors.items(), key=lambda kv: kv[0])), tuple(self.edges)))

    def to_dict(self) -> dict:
        verts = []
        for v in self.vertices:
            item: dict = {"id": v}
            if self.colors[v] is not None:
                item["color"] = self.colors[v]
            verts.append(item)
        return {"vertices": verts, "edges": [list(e) for e in self.edges]}


def _require(g: ColoredGraph, v: str) -> None:
    if v not in g.colors:
        raise InputError(f"unknown vertex {v!r}")


def degree(g: ColoredGraph, v: str) -> int:
    return len(g.neighbors(v))


def _bfs(g: ColoredGraph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: ColoredGraph) -> bool:
    """Empty graph counts as disconnected, a single vertex as connected."""
    if not g.colors:
        return False
    start = next(iter(g.colors))
    return len(_bfs(g, start)) == len(g.colors)


def components(g: ColoredGraph) -> list[list[str]]:
    seen: set[str] = set()
    out = []
    for v in g.vertices:
        if v not in seen:
            comp = sorted(_bfs(g, v))
            seen.update(comp)
            out.append(comp)
    return out


def betti(g: ColoredGraph) -> int:
    """Cycle rank |E| - |V| + 1 of a connected graph."""
    if not is_connected(g):
        raise InputError("betti number requires a connected graph")
    return g.n_edges - g.n_vertices + 1


def is_tree(g: ColoredGraph) -> bool:
    return is_connected(g) and g.n_edges == g.n_vertices - 1


def distance(g: ColoredGraph, v: str, v0: str) -> int:
    _require(g, v)
    _require(g, v0)
    dist = _bfs(g, v0)
    if v not in dist:
        raise InputError(f"{v!r} is not reachable from {v0!r}")
    return dist[v]


def prune_leaves(g: ColoredGraph) -> ColoredGraph:
    """Drop every degree-1 vertex once; callers iterate to a fixed point."""
    return g.induced(v for v in g.colors if len(g.adj[v]) != 1)


def prune_to_core(g: ColoredGraph) -> ColoredGraph:
    while True:
        h = prune_leaves(g)
        if h.n_vertices == g.n_vertices:
            return h
        g = h


def fresh_vertex(g: ColoredGraph, stem: str = "apex") -> str:
    name, i = stem, 0
    while name in g.colors:
        i += 1
        name = f"{stem}{i}"
    return name


def add_apex(g: ColoredGraph, targets: Iterable[str], name: str | None = None) -> tuple[ColoredGraph, str]:
    """Add one uncolored vertex joined to exactly ``targets``.

    The result keeps colors on the old vertices, so it may violate the
    bipartite color invariant; it is meant for uncolored graphs.
    """
    targets = set(targets)
    if not targets:
        raise InputError("apex needs at least one target vertex")
    for t in targets:
        _require(g, t)
    apex = name if name is not None else fresh_vertex(g)
    if apex in g.colors:
        raise InputError(f"apex id {apex!r} already in use")
    colors = dict(g.colors)
    colors[apex] = None
    adj = {v: (n | {apex}) if v in targets else n for v, n in g.adj.items()}
    adj[apex] = frozenset(targets)
    return ColoredGraph(colors, adj), apex
