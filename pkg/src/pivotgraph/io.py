"""JSON schemas for graphs, groups and fiber data, plus canonical serialization."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, conlist

from pivotgraph.errors import InputError
from pivotgraph.fiber import ComponentData, FiberData, PointData, make_fiber, pair
from pivotgraph.graph import ColoredGraph
from pivotgraph.permgroup import PermGroup, Permutation, close


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)


class VertexModel(_Strict):
    id: str
    color: Optional[Literal["cyan", "pink"]] = None


class GraphModel(_Strict):
    vertices: list[VertexModel]
    edges: list[conlist(str, min_length=2, max_length=2)]


class GroupModel(_Strict):
    generators: list[dict[str, str]]


class ComponentModel(_Strict):
    id: str
    multiplicity: int = Field(default=1, ge=1)
    genus: int = Field(ge=0)
    geometric_genus: Optional[int] = Field(default=None, ge=0)
    self_intersection: int


class PointModel(_Strict):
    id: str
    incident: list[str]
    local_multiplicities: dict[str, int] = Field(default_factory=dict)


class FiberModel(_Strict):
    components: list[ComponentModel]
    points: list[PointModel] = Field(default_factory=list)
    galois: GroupModel = Field(default_factory=lambda: GroupModel(generators=[]))


def _parse(model: type[BaseModel], data: Any, what: str) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputError(f"invalid {what} JSON: {exc}") from None


def graph_from_json(data: Any) -> ColoredGraph:
    m = _parse(GraphModel, data, "graph")
    return ColoredGraph.from_edges(
        [v.id for v in m.vertices],
        [tuple(e) for e in m.edges],
        {v.id: v.color for v in m.vertices},
    )


def graph_to_json(g: ColoredGraph) -> dict:
    return g.to_dict()


def group_from_json(data: Any, domain: list[str] | tuple[str, ...], cap: int | None = None) -> PermGroup:
    """Generators are partial mappings over ``domain``; unmapped ids are fixed."""
    m = _parse(GroupModel, data, "group")
    return close([Permutation.from_mapping(domain, gen) for gen in m.generators], cap=cap, domain=domain)


def fiber_from_json(data: Any, strict: bool = False) -> FiberData:
    m = _parse(FiberModel, data, "fiber")
    comps = [
        ComponentData(
            c.id,
            c.multiplicity,
            c.genus,
            c.genus if c.geometric_genus is None else c.geometric_genus,
            c.self_intersection,
        )
        for c in m.components
    ]
    points = []
    for p in m.points:
        mults = {}
        for key, val in p.local_multiplicities.items():
            parts = key.split("|")
            if len(parts) != 2:
                raise InputError(f"point {p.id!r}: local multiplicity key {key!r} is not of the form 'A|B'")
            if key != "|".join(sorted(parts)):
                raise InputError(f"point {p.id!r}: key {key!r} must list ids in sorted order")
            mults[pair(*parts)] = val
        points.append(PointData(p.id, tuple(p.incident), mults))
    return make_fiber(comps, points, m.galois.generators, strict=strict)


def fiber_to_json(f: FiberData) -> dict:
    return {
        "components": [
            {
                "id": c.id,
                "multiplicity": c.multiplicity,
                "genus": c.genus,
                "geometric_genus": c.geometric_genus,
                "self_intersection": c.self_intersection,
            }
            for c in sorted(f.components, key=lambda c: c.id)
        ],
        "points": [
            {
                "id": p.id,
                "incident": sorted(p.incident),
                "local_multiplicities": {f"{a}|{b}": p.multiplicity(a, b) for a, b in p.pairs()},
            }
            for p in sorted(f.points, key=lambda p: p.id)
        ],
        "galois": f.galois.to_dict(),
    }


def dumps(obj: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def digest(*blobs: bytes) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return "sha256:" + h.hexdigest()


def read_json(path: str | Path) -> tuple[Any, bytes]:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {p}: {exc.strerror}") from None
    try:
        return json.loads(raw), raw
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{p} is not valid JSON: {exc}") from None
