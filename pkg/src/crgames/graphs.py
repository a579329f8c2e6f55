"""Labelled undirected graphs with loops and a protected/unprotected edge distinction.

Vertices are dense integer ids assigned at insertion; display names carry
human-readable symbols for debugging. Parallel edges are collapsed with
UNPROTECTED dominating PROTECTED, since only the strongest label matters for
capture. An unprotected loop is the sole representation of an "unprotected
vertex" (a vertex on which a co-located pursuer may capture in place).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional


class EdgeLabel(Enum):
    PROTECTED = "P"
    UNPROTECTED = "U"


PROTECTED = EdgeLabel.PROTECTED
UNPROTECTED = EdgeLabel.UNPROTECTED


class GraphError(ValueError):
    """Raised on invalid graph construction or queries."""


@dataclass(frozen=True, slots=True)
class VertexAnnotation:
    """Provenance tag for a constructed vertex (role, layout indices)."""

    vertex: int
    role: str
    level: Optional[int] = None
    track: Optional[int] = None
    copy: Optional[int] = None
    mechanism: Optional[int] = None

    def to_json(self) -> dict:
        d: dict = {"role": self.role}
        for key in ("level", "track", "copy", "mechanism"):
            value = getattr(self, key)
            if value is not None:
                d[key] = value
        return d

    @staticmethod
    def from_json(vertex: int, d: dict) -> "VertexAnnotation":
        return VertexAnnotation(
            vertex=vertex,
            role=d["role"],
            level=d.get("level"),
            track=d.get("track"),
            copy=d.get("copy"),
            mechanism=d.get("mechanism"),
        )


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


class GraphBuilder:
    """Single-owner mutable builder; freeze with .build().

    Repeated adds of the same unordered pair collapse to one edge whose label
    is UNPROTECTED if any of the adds was UNPROTECTED.
    """

    def __init__(self) -> None:
        self._names: list[str] = []
        self._edges: dict[tuple[int, int], EdgeLabel] = {}

    def add_vertex(self, name: str | None = None) -> int:
        vid = len(self._names)
        self._names.append(name if name is not None else f"v{vid}")
        return vid

    def add_vertices(self, count: int) -> list[int]:
        return [self.add_vertex() for _ in range(count)]

    def _check(self, v: int) -> None:
        if not (0 <= v < len(self._names)):
            raise GraphError(f"unknown vertex id {v} (graph has {len(self._names)} vertices)")

    def add_edge(self, u: int, v: int, label: EdgeLabel) -> tuple[int, int]:
        self._check(u)
        self._check(v)
        key = _edge_key(u, v)
        old = self._edges.get(key)
        if old is UNPROTECTED or label is UNPROTECTED:
            self._edges[key] = UNPROTECTED
        else:
            self._edges[key] = PROTECTED
        return key

    def build(self, annotations: Iterable[VertexAnnotation] = ()) -> "LabelledGraph":
        return LabelledGraph(self._names, self._edges, annotations)


class LabelledGraph:
    """Immutable labelled graph. Safe to share across solver workers."""

    __slots__ = ("names", "_edges", "annotations", "_adj", "_unprot_adj")

    def __init__(
        self,
        names: list[str],
        edges: dict[tuple[int, int], EdgeLabel],
        annotations: Iterable[VertexAnnotation] = (),
    ) -> None:
        if not names:
            raise GraphError("graph must have at least one vertex")
        self.names = tuple(names)
        n = len(self.names)
        for (u, v) in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) references an unknown vertex")
            if u > v:
                raise GraphError("internal: edge keys must be ordered")
        self._edges = dict(edges)
        anns = tuple(annotations)
        for a in anns:
            if not (0 <= a.vertex < n):
                raise GraphError(f"annotation references unknown vertex {a.vertex}")
        self.annotations = anns

        adj: list[list[tuple[int, EdgeLabel]]] = [[] for _ in range(n)]
        unprot: list[set[int]] = [set() for _ in range(n)]
        for (u, v), label in self._edges.items():
            adj[u].append((v, label))
            if u != v:
                adj[v].append((u, label))
            if label is UNPROTECTED:
                unprot[u].add(v)
                unprot[v].add(u)
        self._adj = tuple(tuple(sorted(row)) for row in adj)
        self._unprot_adj = tuple(frozenset(s) for s in unprot)

    # -- basic queries ----------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.names)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(len(self.names))

    def edges(self) -> Iterable[tuple[int, int, EdgeLabel]]:
        for (u, v), label in sorted(self._edges.items()):
            yield u, v, label

    def _check(self, v: int) -> None:
        if not (0 <= v < len(self.names)):
            raise GraphError(f"unknown vertex id {v} (graph has {len(self.names)} vertices)")

    def label(self, u: int, v: int) -> Optional[EdgeLabel]:
        self._check(u)
        self._check(v)
        return self._edges.get(_edge_key(u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.label(u, v) is not None

    def neighbors(self, v: int) -> tuple[tuple[int, EdgeLabel], ...]:
        """All (u, label) with an edge {v,u}; v itself appears when a loop exists."""
        self._check(v)
        return self._adj[v]

    def is_unprotected_vertex(self, v: int) -> bool:
        """True iff v carries an unprotected loop."""
        self._check(v)
        return self._edges.get((v, v)) is UNPROTECTED

    def unprotected_contacts(self, v: int) -> frozenset[int]:
        """Vertices joined to v by an unprotected edge (v itself for a loop)."""
        self._check(v)
        return self._unprot_adj[v]

    def annotation_map(self) -> dict[int, VertexAnnotation]:
        return {a.vertex: a for a in self.annotations}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return (
            self.names == other.names
            and self._edges == other._edges
            and self.annotations == other.annotations
        )

    def __hash__(self) -> int:  # pragma: no cover - identity hashing is enough
        return id(self)

    def __repr__(self) -> str:
        return f"LabelledGraph({len(self.names)} vertices, {len(self._edges)} edges)"

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        ann = self.annotation_map()
        return {
            "vertices": [
                {
                    "id": v,
                    "name": self.names[v],
                    "ann": ann[v].to_json() if v in ann else None,
                }
                for v in self.vertices()
            ],
            "edges": [
                {"u": u, "v": v, "label": label.value} for u, v, label in self.edges()
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_obj(), indent=indent, sort_keys=True)

    @staticmethod
    def from_json_obj(obj: dict) -> "LabelledGraph":
        try:
            raw_vertices = obj["vertices"]
            raw_edges = obj["edges"]
        except (TypeError, KeyError) as exc:
            raise GraphError(f"graph JSON must contain 'vertices' and 'edges': {exc}") from exc
        ids = [rv["id"] for rv in raw_vertices]
        if sorted(ids) != list(range(len(ids))):
            raise GraphError("vertex ids must be dense integers 0..n-1")
        names = [""] * len(ids)
        anns = []
        for rv in raw_vertices:
            names[rv["id"]] = rv.get("name", f"v{rv['id']}")
            if rv.get("ann"):
                anns.append(VertexAnnotation.from_json(rv["id"], rv["ann"]))
        edges: dict[tuple[int, int], EdgeLabel] = {}
        for re in raw_edges:
            try:
                u, v, label = re["u"], re["v"], EdgeLabel(re["label"])
            except (KeyError, ValueError) as exc:
                raise GraphError(f"bad edge record {re!r}: {exc}") from exc
            key = _edge_key(u, v)
            if edges.get(key) is not UNPROTECTED:
                edges[key] = label
        return LabelledGraph(names, edges, anns)

    @staticmethod
    def from_json(text: str) -> "LabelledGraph":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from exc
        return LabelledGraph.from_json_obj(obj)

    def to_dot(self, name: str = "G") -> str:
        """GraphViz export following the drawing convention of the domain:

        unprotected edges solid, protected edges dashed; vertices with an
        unprotected loop drawn as filled circles (the loop itself is implied
        by the fill and not drawn).
        """
        lines = [f"graph {name} {{"]
        for v in self.vertices():
            style = "filled" if self.is_unprotected_vertex(v) else "solid"
            lines.append(f'  {v} [label="{self.names[v]}", shape=circle, style={style}];')
        for u, v, label in self.edges():
            if u == v:
                if label is PROTECTED:
                    lines.append(f"  {u} -- {v} [style=dashed];")
                continue
            style = "solid" if label is UNPROTECTED else "dashed"
            lines.append(f"  {u} -- {v} [style={style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(
    names: Iterable[str],
    edges: Iterable[tuple[int, int, EdgeLabel]],
    annotations: Iterable[VertexAnnotation] = (),
) -> LabelledGraph:
    """Convenience constructor used heavily in tests."""
    b = GraphBuilder()
    for name in names:
        b.add_vertex(name)
    for u, v, label in edges:
        b.add_edge(u, v, label)
    return b.build(annotations)
