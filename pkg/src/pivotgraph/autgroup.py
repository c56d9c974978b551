"""Automorphism groups and canonical forms of colored graphs, plus subgroup lists for the verifier.

Both searches run over the usual individualization/refinement tree: cells
of an ordered partition are refined to an equitable partition, and the
first non-singleton cell is split by individualizing one of its vertices.

Automorphism generators come from a stabilizer chain along the first path
of the tree: at each depth every vertex of the target cell that is not yet
in the orbit of the path vertex is tested for a leaf isomorphic to the
first leaf.  This yields a complete generating set and the exact order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from pivotgraph.errors import CapacityError, InputError
from pivotgraph.graph import COLOR_CODE, ColoredGraph
from pivotgraph.permgroup import (
    Images,
    PermGroup,
    _closure,
    compose,
    default_cap,
    invert,
)

Cells = list[list[int]]
Policy = Literal["cyclic", "pairs", "all"]
POLICIES = ("cyclic", "pairs", "all")

# the "all" policy enumerates the whole subgroup lattice
ALL_POLICY_MAX_ORDER = 1000


class _Tree:
    def __init__(self, g: ColoredGraph):
        self.labels = g.vertices
        index = {v: i for i, v in enumerate(self.labels)}
        self.n = len(self.labels)
        self.nbrs = [frozenset(index[u] for u in g.adj[v]) for v in self.labels]
        self.color = [COLOR_CODE[g.colors[v]] for v in self.labels]

    def root(self) -> Cells:
        by_color: dict[int, list[int]] = {}
        for i, c in enumerate(self.color):
            by_color.setdefault(c, []).append(i)
        return self.refine([by_color[c] for c in sorted(by_color)])

    def refine(self, cells: Cells) -> Cells:
        while True:
            cell_of = [0] * self.n
            for ci, cell in enumerate(cells):
                for v in cell:
                    cell_of[v] = ci
            k = len(cells)
            new: Cells = []
            for cell in cells:
                if len(cell) == 1:
                    new.append(cell)
                    continue
                groups: dict[tuple[int, ...], list[int]] = {}
                for v in cell:
                    counts = [0] * k
                    for u in self.nbrs[v]:
                        counts[cell_of[u]] += 1
                    groups.setdefault(tuple(counts), []).append(v)
                for sig in sorted(groups):
                    new.append(groups[sig])
            if len(new) == len(cells):
                return new
            cells = new

    def child(self, cells: Cells, u: int) -> Cells:
        out: Cells = []
        for cell in cells:
            if u in cell:
                out.append([u])
                out.append([v for v in cell if v != u])
            else:
                out.append(cell)
        return self.refine(out)

    @staticmethod
    def target(cells: Cells) -> list[int] | None:
        for cell in cells:
            if len(cell) > 1:
                return cell
        return None

    def code(self, order: Sequence[int]) -> tuple[int, ...]:
        pos = [0] * self.n
        for p, v in enumerate(order):
            pos[v] = p
        rows = []
        for v in order:
            row = 0
            for u in self.nbrs[v]:
                row |= 1 << pos[u]
            rows.append(row)
        return tuple(self.color[v] for v in order) + tuple(rows)

    def is_automorphism(self, p: Images) -> bool:
        for v in range(self.n):
            if self.color[p[v]] != self.color[v]:
                return False
            img = self.nbrs[p[v]]
            for u in self.nbrs[v]:
                if p[u] not in img:
                    return False
        return True


@dataclass
class _Chain:
    generators: list[Images]
    orbit_sizes: list[int]
    base: list[int]
    first_path: list[Cells] = field(repr=False)


def _orbit(gens: Iterable[Images], x: int) -> set[int]:
    gens = list(gens)
    seen = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for g in gens:
            z = g[y]
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def _stabilizer_chain(tree: _Tree) -> _Chain:
    path: list[Cells] = []
    base: list[int] = []
    cells = tree.root()
    while True:
        path.append(cells)
        tc = tree.target(cells)
        if tc is None:
            break
        b = min(tc)
        base.append(b)
        cells = tree.child(cells, b)
    first_leaf = [c[0] for c in path[-1]]
    shapes = [tuple(len(c) for c in p) for p in path]

    def find(cells: Cells, depth: int) -> Images | None:
        if tuple(len(c) for c in cells) != shapes[depth]:
            return None
        tc = tree.target(cells)
        if tc is None:
            img = [0] * tree.n
            for a, c in zip(first_leaf, cells):
                img[a] = c[0]
            perm = tuple(img)
            return perm if tree.is_automorphism(perm) else None
        for u in tc:
            hit = find(tree.child(cells, u), depth + 1)
            if hit is not None:
                return hit
        return None

    levels: list[list[Images]] = [[] for _ in base]
    sizes = [1] * len(base)
    for lev in reversed(range(len(base))):
        active = [g for gs in levels[lev:] for g in gs]
        orb = _orbit(active, base[lev])
        for u in sorted(tree.target(path[lev]) or []):
            if u in orb:
                continue
            perm = find(tree.child(path[lev], u), lev + 1)
            if perm is not None:
                levels[lev].append(perm)
                active.append(perm)
                orb = _orbit(active, base[lev])
        sizes[lev] = len(orb)
    gens = [g for gs in levels for g in gs]
    return _Chain(gens, sizes, base, path)


def automorphism_group(g: ColoredGraph, cap: int | None = None) -> PermGroup:
    """Full color-preserving automorphism group.

    Only generators are computed eagerly; ``known_order`` carries the exact
    order so callers can compare against a cap before materializing.
    """
    tree = _Tree(g)
    chain = _stabilizer_chain(tree)
    grp = PermGroup(tuple(tree.labels), tuple(chain.generators), default_cap() if cap is None else cap)
    grp.known_order = math.prod(chain.orbit_sizes)
    return grp


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical encoding; equality compares ``code`` only."""

    code: str
    order: tuple[str, ...] = field(compare=False)

    def __str__(self) -> str:
        return self.code


def _hex(tree: _Tree, key: tuple[int, ...]) -> str:
    n = tree.n
    colors = key[:n]
    rows = key[n:]
    bits = 0
    nbits = 0
    for i in range(n):
        for j in range(i + 1, n):
            bits = (bits << 1) | ((rows[i] >> j) & 1)
            nbits += 1
    color_part = "".join(str(c) for c in colors)
    width = max(1, (nbits + 3) // 4)
    return f"{n:x}.{color_part}.{bits:0{width}x}"


def canonical_form(g: ColoredGraph, aut: PermGroup | None = None) -> CanonicalForm:
    tree = _Tree(g)
    if tree.n == 0:
        return CanonicalForm("0..0", ())
    gens = list(aut.generators) if aut is not None else _stabilizer_chain(tree).generators
    best: list = [None, None]

    def visit(cells: Cells, prefix: list[int]) -> None:
        tc = tree.target(cells)
        if tc is None:
            order = [c[0] for c in cells]
            key = tree.code(order)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, order
            return
        fixing = [p for p in gens if all(p[x] == x for x in prefix)]
        done: set[int] = set()
        for u in sorted(tc):
            if u in done:
                continue
            done |= _orbit(fixing, u)
            visit(tree.child(cells, u), prefix + [u])

    visit(tree.root(), [])
    key, order = best
    return CanonicalForm(_hex(tree, key), tuple(tree.labels[i] for i in order))


def canonical_relabel(g: ColoredGraph, form: CanonicalForm | None = None) -> ColoredGraph:
    """Relabel to v0, v1, ... following the canonical order."""
    form = form or canonical_form(g)
    return g.relabel({v: f"v{i}" for i, v in enumerate(form.order)})


def are_isomorphic(a: ColoredGraph, b: ColoredGraph) -> bool:
    return canonical_form(a) == canonical_form(b)


# ---- subgroup enumeration -------------------------------------------------


def _cyclic(e: Images, ident: Images) -> frozenset[Images]:
    out = {ident}
    x = e
    while x != ident:
        out.add(x)
        x = compose(e, x)
    return frozenset(out)


def _cyclic_subgroups(elements: Iterable[Images], ident: Images) -> dict[frozenset[Images], Images]:
    """Map element set -> smallest generator, for every cyclic subgroup."""
    subs: dict[frozenset[Images], Images] = {}
    covered: set[Images] = set()
    for e in sorted(elements):
        if e in covered:
            continue
        c = _cyclic(e, ident)
        covered.add(e)
        if c not in subs:
            subs[c] = e
    return subs


def _conj(g: Images, x: Images, g_inv: Images) -> Images:
    return compose(g, compose(x, g_inv))


def subgroup_actions(
    G: PermGroup,
    policy: Policy = "pairs",
    cap: int | None = None,
    up_to_conjugacy: bool = False,
) -> list[PermGroup]:
    """Deduplicated subgroups of a materialized group.

    ``cyclic``: every cyclic subgroup.  ``pairs``: every subgroup generated
    by two elements (which covers the cyclic ones and, for 2-generated G,
    G itself).  ``all``: the whole subgroup lattice, only for small G.
    The trivial group and G are always included.

    With ``up_to_conjugacy`` one representative per G-conjugacy class of
    pair-generating data is kept; conjugate subgroups act on the graph
    identically up to relabeling by an element of G.
    """
    cap = default_cap() if cap is None else cap
    if policy not in POLICIES:
        raise InputError(f"unknown subgroup policy {policy!r}")
    if G.known_order is not None and G.known_order > cap:
        raise CapacityError(f"group order {G.known_order} exceeds cap {cap}")
    elements = G.elements
    if len(elements) > cap:
        raise CapacityError(f"group order {len(elements)} exceeds cap {cap}")
    if policy == "all" and len(elements) > min(cap, ALL_POLICY_MAX_ORDER):
        raise CapacityError(
            f"policy 'all' is limited to groups of order <= {min(cap, ALL_POLICY_MAX_ORDER)}"
        )

    dom = G.domain
    ident = G.identity
    cyc = _cyclic_subgroups(elements, ident)
    found: dict[frozenset[Images], tuple[Images, ...]] = {frozenset({ident}): ()}
    found.setdefault(frozenset(elements), G.generators)

    if policy == "cyclic":
        for c, gen in cyc.items():
            found.setdefault(c, (gen,))
    elif policy == "pairs":
        for c, gen in cyc.items():
            found.setdefault(c, (gen,))
        sub_of = {gen: c for c, gen in cyc.items()}
        for a, b in _pair_representatives(elements, cyc, ident, up_to_conjugacy):
            if b in sub_of[a] or a in sub_of[b]:
                continue
            sub = _closure(ident, (a, b), cap)
            found.setdefault(sub, (a, b))
    else:
        frontier = []
        for c, gen in cyc.items():
            if c not in found:
                found[c] = (gen,)
            frontier.append(c)
        cyc_items = sorted(cyc.items(), key=lambda kv: kv[1])
        while frontier:
            nxt = []
            for h in frontier:
                hgens = found[h]
                for c, gen in cyc_items:
                    if gen in h:
                        continue
                    sub = _closure(ident, hgens + (gen,), cap)
                    if sub not in found:
                        found[sub] = hgens + (gen,)
                        nxt.append(sub)
            frontier = nxt

    groups = []
    for elems, gens in found.items():
        grp = PermGroup.from_elements(dom, elems, G.cap)
        if gens:
            grp.generators = tuple(gens)
        groups.append(grp)
    groups.sort(key=lambda h: (len(h.elements), h.key()))
    return groups


def _pair_representatives(
    elements: frozenset[Images],
    cyc: dict[frozenset[Images], Images],
    ident: Images,
    up_to_conjugacy: bool,
) -> list[tuple[Images, Images]]:
    """Generator pairs covering every 2-generated subgroup.

    <a, b> depends only on <a> and <b>, so pairs of cyclic-subgroup
    generators suffice.  Under conjugacy reduction the first subgroup runs
    over class representatives and the second over orbits of the
    normalizer of the first.
    """
    subs = sorted(((c, gen) for c, gen in cyc.items() if len(c) > 1), key=lambda kv: kv[1])
    if not up_to_conjugacy:
        return [(a, b) for i, (_, a) in enumerate(subs) for (_, b) in subs[i + 1:]]

    elems = sorted(elements)
    inverses = {g: invert(g) for g in elems}

    def conj_sub(g: Images, c: frozenset[Images]) -> frozenset[Images]:
        gi = inverses[g]
        return frozenset(_conj(g, x, gi) for x in c)

    # class representatives of cyclic subgroups
    reps: list[frozenset[Images]] = []
    assigned: set[frozenset[Images]] = set()
    for c, _ in subs:
        if c in assigned:
            continue
        reps.append(c)
        gen = cyc[c]
        for g in elems:
            assigned.add(_cyclic(_conj(g, gen, inverses[g]), ident))

    pairs = []
    for a_sub in reps:
        a = cyc[a_sub]
        norm = [g for g in elems if _conj(g, a, inverses[g]) in a_sub]
        seen: set[frozenset[Images]] = set()
        for b_sub, b in subs:
            if b_sub in seen:
                continue
            for g in norm:
                seen.add(conj_sub(g, b_sub))
            if b_sub != a_sub:
                pairs.append((a, b))
    return pairs
