"""Finite permutation groups on a set of vertex ids, by exact closure.

Permutations are stored as image tuples over the sorted domain, so
composition and hashing work on plain ``tuple[int, ...]``.  Composition is
right-to-left: ``(p * q)(x) == p(q(x))``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from pivotgraph.errors import CapacityError, InputError
from pivotgraph.graph import ColoredGraph

DEFAULT_CAP = 1_000_000


def default_cap() -> int:
    raw = os.environ.get("PIVOTGRAPH_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"PIVOTGRAPH_CAP must be a positive integer, got {raw!r}") from None
    if cap < 1:
        raise InputError(f"PIVOTGRAPH_CAP must be a positive integer, got {raw!r}")
    return cap


Images = tuple[int, ...]


def compose(p: Images, q: Images) -> Images:
    """Images of p∘q (apply q first)."""
    return tuple(map(p.__getitem__, q))


def invert(p: Images) -> Images:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class Permutation:
    domain: tuple[str, ...]
    images: Images

    def __post_init__(self) -> None:
        if len(self.images) != len(self.domain) or sorted(self.images) != list(range(len(self.domain))):
            raise InputError("permutation images must form a bijection of the domain")

    @classmethod
    def identity(cls, domain: Iterable[str]) -> Permutation:
        dom = tuple(sorted(domain))
        return cls(dom, tuple(range(len(dom))))

    @classmethod
    def from_mapping(cls, domain: Iterable[str], mapping: Mapping[str, str]) -> Permutation:
        """Omitted ids are fixed points."""
        dom = tuple(sorted(domain))
        index = {x: i for i, x in enumerate(dom)}
        if len(index) != len(dom):
            raise InputError("duplicate ids in permutation domain")
        images = list(range(len(dom)))
        for a, b in mapping.items():
            if a not in index or b not in index:
                raise InputError(f"mapping {a!r}->{b!r} leaves the domain")
            images[index[a]] = index[b]
        if len(set(images)) != len(images):
            raise InputError(f"mapping is not a bijection: {dict(mapping)}")
        return cls(dom, tuple(images))

    @classmethod
    def from_cycles(cls, domain: Iterable[str], *cycles: Sequence[str]) -> Permutation:
        mapping: dict[str, str] = {}
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if a in mapping:
                    raise InputError(f"{a!r} appears in two cycles")
                mapping[a] = b
        return cls.from_mapping(domain, mapping)

    def __call__(self, x: str) -> str:
        try:
            return self.domain[self.images[self.domain.index(x)]]
        except ValueError:
            raise InputError(f"{x!r} is outside the permutation domain") from None

    def __mul__(self, other: Permutation) -> Permutation:
        if self.domain != other.domain:
            raise InputError("cannot compose permutations on different domains")
        return Permutation(self.domain, compose(self.images, other.images))

    def inverse(self) -> Permutation:
        return Permutation(self.domain, invert(self.images))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def cycles(self) -> list[tuple[str, ...]]:
        """Nontrivial cycles, each starting at its smallest id."""
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = []
            j = i
            while j not in seen:
                seen.add(j)
                cyc.append(self.domain[j])
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def to_mapping(self) -> dict[str, str]:
        """Moved points only, sorted by source id."""
        return {self.domain[i]: self.domain[j] for i, j in enumerate(self.images) if i != j}


@dataclass(eq=False)
class PermGroup:
    """Group generated by ``generators`` on ``domain``.

    Elements are materialized on first use and cached; materialization is
    bounded by ``cap``.
    """

    domain: tuple[str, ...]
    generators: tuple[Images, ...]
    cap: int = DEFAULT_CAP
    known_order: int | None = None
    _elements: frozenset[Images] | None = field(default=None, repr=False)
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.domain = tuple(self.domain)
        self._index = {x: i for i, x in enumerate(self.domain)}
        ident = tuple(range(len(self.domain)))
        gens = []
        for g in self.generators:
            if len(g) != len(self.domain) or sorted(g) != list(ident):
                raise InputError("generator is not a permutation of the group domain")
            if g != ident and g not in gens:
                gens.append(tuple(g))
        self.generators = tuple(gens)

    @classmethod
    def from_elements(cls, domain: Sequence[str], elements: Iterable[Images], cap: int = DEFAULT_CAP) -> PermGroup:
        """Wrap an element set already known to be closed."""
        elems = frozenset(elements)
        ident = tuple(range(len(domain)))
        grp = cls(tuple(domain), tuple(sorted(e for e in elems if e != ident)), cap)
        grp._elements = elems | {ident}
        grp.known_order = len(grp._elements)
        return grp

    @classmethod
    def trivial(cls, domain: Iterable[str]) -> PermGroup:
        return close([], domain=domain)

    @property
    def identity(self) -> Images:
        return tuple(range(len(self.domain)))

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise InputError(f"{x!r} is outside the group domain") from None

    @property
    def elements(self) -> frozenset[Images]:
        if self._elements is None:
            if self.known_order is not None and self.known_order > self.cap:
                raise CapacityError(f"group order {self.known_order} exceeds cap {self.cap}")
            self._elements = _closure(self.identity, self.generators, self.cap)
        return self._elements

    def order(self) -> int:
        if self._elements is None and self.known_order is not None:
            return self.known_order
        return len(self.elements)

    def is_materialized(self) -> bool:
        return self._elements is not None

    def permutations(self) -> Iterator[Permutation]:
        for e in sorted(self.elements):
            yield Permutation(self.domain, e)

    def generator_perms(self) -> list[Permutation]:
        return [Permutation(self.domain, g) for g in self.generators]

    def __contains__(self, p: object) -> bool:
        if isinstance(p, Permutation):
            return p.domain == self.domain and p.images in self.elements
        return p in self.elements

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.domain == other.domain and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.domain, self.elements))

    def key(self) -> tuple:
        """Deduplication key: sorted element encodings."""
        return tuple(sorted(self.elements))

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.domain == other.domain and self.elements <= other.elements

    def orbit_indices(self, i: int) -> set[int]:
        # generator BFS; no materialization needed
        seen = {i}
        stack = [i]
        while stack:
            j = stack.pop()
            for g in self.generators:
                k = g[j]
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        return seen

    def orbits(self) -> list[list[str]]:
        """Orbit partition of the domain, each orbit sorted, orbits sorted by first element."""
        seen: set[int] = set()
        out = []
        for i in range(len(self.domain)):
            if i not in seen:
                orb = self.orbit_indices(i)
                seen |= orb
                out.append(sorted(self.domain[j] for j in orb))
        return sorted(out)

    def to_dict(self) -> dict:
        return {"generators": [Permutation(self.domain, g).to_mapping() for g in self.generators]}


def _closure(identity: Images, gens: Sequence[Images], cap: int) -> frozenset[Images]:
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = compose(g, e)
                if h not in elements:
                    elements.add(h)
                    if len(elements) > cap:
                        raise CapacityError(f"group order exceeds cap {cap}")
                    nxt.append(h)
        frontier = nxt
    return frozenset(elements)


def close(
    gens: Sequence[Permutation],
    cap: int | None = None,
    domain: Iterable[str] | None = None,
) -> PermGroup:
    """Materialize the group generated by ``gens``.

    ``domain`` is required when ``gens`` is empty.
    """
    cap = default_cap() if cap is None else cap
    if cap < 1:
        raise InputError("cap must be positive")
    if domain is not None:
        dom = tuple(sorted(domain))
    elif gens:
        dom = gens[0].domain
    else:
        raise InputError("empty generator list needs an explicit domain")
    for g in gens:
        if g.domain != dom:
            raise InputError("generators must share one domain")
    grp = PermGroup(dom, tuple(g.images for g in gens), cap)
    grp.elements  # noqa: B018 - force materialization so cap breaches surface here
    return grp


def orbit(G: PermGroup, x: str) -> set[str]:
    return {G.domain[j] for j in G.orbit_indices(G.index(x))}


def stabilizer(G: PermGroup, v: str) -> PermGroup:
    i = G.index(v)
    return PermGroup.from_elements(G.domain, (e for e in G.elements if e[i] == i), G.cap)


def is_action_on(G: PermGroup, g: ColoredGraph) -> bool:
    """Every generator maps edges to edges and preserves colors."""
    if tuple(g.vertices) != G.domain:
        raise InputError("group domain differs from the graph's vertex set")
    dom = G.domain
    edges = [(G.index(a), G.index(b)) for a, b in g.edges]
    for p in G.generators:
        for i, x in enumerate(dom):
            if g.colors[x] != g.colors[dom[p[i]]]:
                return False
        for a, b in edges:
            if dom[p[b]] not in g.adj[dom[p[a]]]:
                return False
    return True
