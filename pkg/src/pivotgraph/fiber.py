"""Special-fiber intersection data and the genus/Betti inequalities built on it.

Multiplicities, genera and self-intersections are inputs; nothing here
derives them from geometry.  Validation only checks that the numbers are
mutually consistent.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from pivotgraph.errors import DataInconsistencyError, InputError
from pivotgraph.graph import CYAN, PINK, ColoredGraph, betti, is_connected
from pivotgraph.permgroup import PermGroup, Permutation, close
from pivotgraph.pivot import Inequality, _analyse, _num


class NonMinimalWarning(UserWarning):
    """A genus-0 component with self-intersection -1 can be contracted."""


Pair = tuple[str, str]


def pair(a: str, b: str) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class ComponentData:
    id: str
    multiplicity: int
    genus: int
    geometric_genus: int
    self_intersection: int


@dataclass(frozen=True)
class PointData:
    id: str
    incident: tuple[str, ...]
    local_multiplicities: Mapping[Pair, int] = field(default_factory=dict)

    def multiplicity(self, a: str, b: str) -> int:
        return self.local_multiplicities.get(pair(a, b), 1)

    @property
    def degree(self) -> int:
        return len(self.incident)

    def pairs(self) -> list[Pair]:
        return [pair(a, b) for a, b in combinations(sorted(self.incident), 2)]


@dataclass(frozen=True)
class FiberData:
    components: tuple[ComponentData, ...]
    points: tuple[PointData, ...]
    galois: PermGroup

    @property
    def ids(self) -> list[str]:
        return sorted([c.id for c in self.components] + [p.id for p in self.points])

    def component(self, cid: str) -> ComponentData:
        for c in self.components:
            if c.id == cid:
                return c
        raise InputError(f"unknown component {cid!r}")


def make_fiber(
    components: Sequence[ComponentData],
    points: Sequence[PointData] = (),
    generators: Sequence[Mapping[str, str]] = (),
    strict: bool = False,
) -> FiberData:
    """Assemble and validate; ``generators`` are partial mappings on component and point ids."""
    ids = [c.id for c in components] + [p.id for p in points]
    dup = sorted({x for x in ids if ids.count(x) > 1})
    if dup:
        raise DataInconsistencyError("unique_ids", f"duplicate ids {dup}")
    perms = [Permutation.from_mapping(ids, m) for m in generators]
    galois = close(perms, domain=ids)
    f = FiberData(tuple(components), tuple(points), galois)
    validate(f, strict=strict)
    return f


def intersection_numbers(f: FiberData) -> dict[Pair, int]:
    """m_ij = sum of local multiplicities over shared points, for i < j."""
    ids = sorted(c.id for c in f.components)
    m = {pair(a, b): 0 for a, b in combinations(ids, 2)}
    for p in f.points:
        for ab in p.pairs():
            m[ab] += p.multiplicity(*ab)
    return m


def validate(f: FiberData, strict: bool = False) -> None:
    """Raise DataInconsistencyError naming the first violated constraint."""
    comp = {c.id: c for c in f.components}
    if not comp:
        raise DataInconsistencyError("components", "a fiber needs at least one component")
    for c in f.components:
        if c.multiplicity < 1:
            raise DataInconsistencyError("multiplicity_positive", f"component {c.id!r} has multiplicity {c.multiplicity}")
        if c.genus < 0 or c.geometric_genus < 0:
            raise DataInconsistencyError("genus_nonnegative", f"component {c.id!r} has a negative genus")
        if c.geometric_genus > c.genus:
            raise DataInconsistencyError(
                "geometric_genus_le_genus",
                f"component {c.id!r}: geometric genus {c.geometric_genus} exceeds genus {c.genus}",
            )
    for p in f.points:
        if len(set(p.incident)) != len(p.incident) or len(p.incident) < 2:
            raise DataInconsistencyError("point_incidence", f"point {p.id!r} must lie on at least two distinct components")
        for x in p.incident:
            if x not in comp:
                raise DataInconsistencyError("point_incidence", f"point {p.id!r} lies on unknown component {x!r}")
        valid = set(p.pairs())
        for key, mult in p.local_multiplicities.items():
            if key not in valid:
                raise DataInconsistencyError(
                    "local_multiplicity", f"point {p.id!r}: pair {key} is not a pair of incident components"
                )
            if mult < 1:
                raise DataInconsistencyError("local_multiplicity", f"point {p.id!r}: multiplicity {mult} < 1")

    if tuple(f.ids) != f.galois.domain:
        raise DataInconsistencyError("galois_action", "galois domain must be the component and point ids")
    _validate_galois(f, comp)

    m = intersection_numbers(f)
    square = sum(c.multiplicity ** 2 * c.self_intersection for c in f.components)
    square += 2 * sum(comp[a].multiplicity * comp[b].multiplicity * v for (a, b), v in m.items())
    if square != 0:
        raise DataInconsistencyError("fiber_square_zero", f"sum d_i d_j Gamma_i.Gamma_j = {square}, expected 0")
    reduced = sum(c.self_intersection for c in f.components) + 2 * sum(m.values())
    if reduced > 0:
        raise DataInconsistencyError("reduced_square_nonpositive", f"(sum Gamma_i)^2 = {reduced} > 0")
    if strict:
        for cid, bal in balance(f).items():
            if bal != 0:
                raise DataInconsistencyError("component_balance", f"component {cid!r}: X_s . Gamma = {bal}, expected 0")


def balance(f: FiberData) -> dict[str, int]:
    """X_s . Gamma_i = d_i Gamma_i^2 + sum_j d_j m_ij for each component."""
    m = intersection_numbers(f)
    d = {c.id: c.multiplicity for c in f.components}
    out = {c.id: c.multiplicity * c.self_intersection for c in f.components}
    for (a, b), v in m.items():
        out[a] += d[b] * v
        out[b] += d[a] * v
    return out


def _validate_galois(f: FiberData, comp: Mapping[str, ComponentData]) -> None:
    pts = {p.id: p for p in f.points}
    for perm in f.galois.generator_perms():
        for c in f.components:
            img = perm(c.id)
            if img not in comp:
                raise DataInconsistencyError("galois_action", f"{c.id!r} is sent to non-component {img!r}")
            d = comp[img]
            if (c.multiplicity, c.genus, c.geometric_genus, c.self_intersection) != (
                d.multiplicity, d.genus, d.geometric_genus, d.self_intersection
            ):
                raise DataInconsistencyError("galois_action", f"{c.id!r} -> {img!r} changes component data")
        for p in f.points:
            img = perm(p.id)
            if img not in pts:
                raise DataInconsistencyError("galois_action", f"{p.id!r} is sent to non-point {img!r}")
            q = pts[img]
            if sorted(perm(x) for x in p.incident) != sorted(q.incident):
                raise DataInconsistencyError("galois_action", f"{p.id!r} -> {img!r} breaks incidence")
            for a, b in p.pairs():
                if p.multiplicity(a, b) != q.multiplicity(perm(a), perm(b)):
                    raise DataInconsistencyError(
                        "galois_action", f"{p.id!r} -> {img!r} changes local multiplicity of {a}|{b}"
                    )


# ---- graph and invariants ---------------------------------------------------------


def build_intersection_graph(f: FiberData) -> ColoredGraph:
    """Cyan vertex per component, pink vertex per point, edge for incidence."""
    colors = {c.id: CYAN for c in f.components}
    colors.update({p.id: PINK for p in f.points})
    edges = [(c, p.id) for p in f.points for c in p.incident]
    return ColoredGraph.from_edges(sorted(colors), edges, colors)


def beta_hat(f: FiberData) -> int:
    return 1 - len(f.components) + sum(intersection_numbers(f).values())


def minimality_warnings(f: FiberData) -> list[str]:
    return [
        f"component {c.id!r} has genus 0 and self-intersection -1: not relatively minimal"
        for c in f.components
        if c.self_intersection == -1 and c.genus == 0
    ]


def structural_warnings(f: FiberData) -> list[str]:
    """Conditions every genuine fiber meets but validation does not enforce by default."""
    out = []
    if len(f.components) > 1:
        out += [
            f"component {c.id!r} has self-intersection {c.self_intersection} >= 0 in a reducible fiber"
            for c in f.components
            if c.self_intersection >= 0
        ]
    out += [f"component {cid!r} is unbalanced: X_s . Gamma = {bal}" for cid, bal in balance(f).items() if bal]
    return out


def epsilon(f: FiberData) -> Fraction:
    """Sum over self-intersection -1 components of (genus - 1/2)(d - 1)."""
    for msg in minimality_warnings(f):
        warnings.warn(msg, NonMinimalWarning, stacklevel=2)
    return sum(
        ((c.genus - Fraction(1, 2)) * (c.multiplicity - 1) for c in f.components if c.self_intersection == -1),
        Fraction(0),
    )


def fiber_genus(f: FiberData) -> int:
    """Arithmetic genus from adjunction with X_s . X_s = 0."""
    twice = sum(c.multiplicity * c.self_intersection for c in f.components)
    if twice % 2:
        raise DataInconsistencyError("integral_genus", f"sum d_i Gamma_i^2 = {twice} is odd")
    g = 1 + sum(c.multiplicity * (c.genus - 1) for c in f.components) - twice // 2
    if g < 0:
        raise DataInconsistencyError("nonnegative_genus", f"fiber genus {g} < 0")
    return g


def _require_connected(f: FiberData) -> ColoredGraph:
    g = build_intersection_graph(f)
    if not is_connected(g):
        raise DataInconsistencyError("connected", "special fiber is not connected")
    return g


@dataclass(frozen=True)
class ChainRecord:
    beta: int
    beta_hat: int
    genus: int
    sum_genus: int
    epsilon: Fraction
    left: Inequality
    right: Inequality
    status: str  # pass | fail | hypothesis_violation
    equality_observed: bool
    literal_predicts_equality: bool
    refined_predicts_equality: bool
    excess_multiplicity: int
    excess_degree: int
    warnings: tuple[str, ...] = ()

    @property
    def literal_agrees(self) -> bool:
        return self.literal_predicts_equality == self.equality_observed

    @property
    def refined_agrees(self) -> bool:
        return self.refined_predicts_equality == self.equality_observed

    @property
    def flags(self) -> list[str]:
        out = []
        if not self.literal_agrees:
            out.append("literal_equality_criterion_disagrees")
        if not self.refined_agrees:
            out.append("refined_equality_criterion_disagrees")
        return out

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "beta_hat": self.beta_hat,
            "genus": self.genus,
            "sum_genus": self.sum_genus,
            "epsilon": _num(self.epsilon),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "status": self.status,
            "beta_hat_minus_beta": {
                "excess_multiplicity": self.excess_multiplicity,
                "excess_degree": self.excess_degree,
            },
            "equality": {
                "observed": self.equality_observed,
                "literal": {"predicts_equality": self.literal_predicts_equality, "agrees": self.literal_agrees},
                "refined": {"predicts_equality": self.refined_predicts_equality, "agrees": self.refined_agrees},
            },
            "flags": self.flags,
            "warnings": list(self.warnings),
        }


def check_betti_genus_chain(f: FiberData) -> ChainRecord:
    """beta(B_X) <= beta_hat <= genus - sum of component genera - epsilon.

    Equality beta = beta_hat is diagnosed two ways: the literal criterion
    (all point degrees 2 and all pairwise intersection numbers <= 1) and the
    refined one (all point degrees 2 and all local multiplicities 1).
    """
    g = _require_connected(f)
    b = betti(g)
    bh = beta_hat(f)
    genus = fiber_genus(f)
    sg = sum(c.genus for c in f.components)
    warn = minimality_warnings(f) + structural_warnings(f)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonMinimalWarning)
        eps = epsilon(f)
    left = Inequality("beta <= beta_hat", b, bh)
    right = Inequality("beta_hat <= genus - sum genus - epsilon", bh, genus - sg - eps)
    if not left.holds:
        status = "fail"
    elif not right.holds:
        status = "hypothesis_violation" if warn else "fail"
    else:
        status = "pass"
    m = intersection_numbers(f)
    degrees_two = all(p.degree == 2 for p in f.points)
    excess_mult = sum(p.multiplicity(*ab) - 1 for p in f.points for ab in p.pairs())
    excess_deg = sum((p.degree - 1) * (p.degree - 2) // 2 for p in f.points)
    return ChainRecord(
        beta=b,
        beta_hat=bh,
        genus=genus,
        sum_genus=sg,
        epsilon=eps,
        left=left,
        right=right,
        status=status,
        equality_observed=b == bh,
        literal_predicts_equality=degrees_two and all(v <= 1 for v in m.values()),
        refined_predicts_equality=degrees_two and excess_mult == 0,
        excess_multiplicity=excess_mult,
        excess_degree=excess_deg,
        warnings=tuple(warn),
    )


# ---- counting layer ------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    n_components: int
    n_points: int
    chain: ChainRecord
    pivot_cyan: tuple[str, ...]
    pivot_cyan_orbits: tuple[tuple[str, ...], ...]
    galois_order: int
    orbit_bound: Inequality
    betti_bound: Inequality
    conic_candidates: tuple[str, ...]
    ruled_or_excluded: tuple[str, ...]
    singular_rational: tuple[str, ...]
    sum_geometric_genus: int
    sum_genus_singular_rational: int

    @property
    def N(self) -> int:
        return len(self.pivot_cyan_orbits)

    @property
    def status(self) -> str:
        if self.chain.status == "fail" or not self.orbit_bound.holds:
            return "fail"
        if self.chain.status == "hypothesis_violation" or not self.betti_bound.holds:
            return "hypothesis_violation" if self.chain.warnings else "fail"
        return "pass"

    @property
    def tight(self) -> bool:
        return self.orbit_bound.slack == 0 and self.betti_bound.slack == 0

    def to_dict(self) -> dict:
        c = self.chain
        return {
            "n_components": self.n_components,
            "n_points": self.n_points,
            "beta": c.beta,
            "beta_hat": c.beta_hat,
            "epsilon": _num(c.epsilon),
            "genus": c.genus,
            "sum_genus": c.sum_genus,
            "sum_geometric_genus": self.sum_geometric_genus,
            "galois_order": self.galois_order,
            "pivot_cyan": list(self.pivot_cyan),
            "pivot_cyan_orbits": [list(o) for o in self.pivot_cyan_orbits],
            "N": self.N,
            "betti_genus_chain": c.to_dict(),
            "counting_chain": {
                "orbit_bound": self.orbit_bound.to_dict(),
                "betti_bound": self.betti_bound.to_dict(),
                "tight": self.tight,
            },
            "components": {
                "conic_candidates": list(self.conic_candidates),
                "ruled_or_excluded": list(self.ruled_or_excluded),
                "singular_rational": list(self.singular_rational),
                "sum_genus_singular_rational": self.sum_genus_singular_rational,
            },
            "warnings": list(c.warnings),
            "status": self.status,
        }


def bound_report(f: FiberData) -> BoundReport:
    """Pivot cyan orbits under the galois action against beta + 1 and the genus bound.

    Genus-0 components that are pivot vertices are the only ones that can
    be non-ruled; genus-0 components that are not pivot are reported as
    ruled or excluded.  Components with genus > geometric genus = 0 are
    listed separately since the pivot criterion says nothing about them.
    """
    chain = check_betti_genus_chain(f)
    g = build_intersection_graph(f)
    act = _analyse(g, f.galois)
    cyan = {c.id for c in f.components}
    W = {x for i, x in enumerate(f.galois.domain) if act.pivot[i] and x in cyan}
    orbits = sorted(
        {tuple(sorted(f.galois.domain[j] for j in act.orbit_of[f.galois.index(x)])) for x in W}
    )
    N = len(orbits)
    orbit_bound = Inequality("N <= beta + 1", N, chain.beta + 1)
    betti_bound = Inequality(
        "beta + 1 <= genus - sum genus - epsilon + 1",
        chain.beta + 1,
        chain.genus - chain.sum_genus - chain.epsilon + 1,
    )
    comps = sorted(f.components, key=lambda c: c.id)
    return BoundReport(
        n_components=len(f.components),
        n_points=len(f.points),
        chain=chain,
        pivot_cyan=tuple(sorted(W)),
        pivot_cyan_orbits=tuple(orbits),
        galois_order=f.galois.order(),
        orbit_bound=orbit_bound,
        betti_bound=betti_bound,
        conic_candidates=tuple(c.id for c in comps if c.genus == 0 and c.id in W),
        ruled_or_excluded=tuple(c.id for c in comps if c.genus == 0 and c.id not in W),
        singular_rational=tuple(c.id for c in comps if c.genus > c.geometric_genus == 0),
        sum_geometric_genus=sum(c.geometric_genus for c in comps),
        sum_genus_singular_rational=sum(c.genus for c in comps if c.genus > c.geometric_genus == 0),
    )
