"""Evader-favorable graph constructions.

Two builders: the point/line incidence graph of a projective plane of order
the smallest power of two at least the pursuer count (the evader perpetually
escapes that many pursuers on it), and a parted product graph over it whose
parts the evader can steer into at will while still escaping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import GraphBuilder, LabelledGraph, UNPROTECTED, VertexAnnotation

# Irreducible polynomials over GF(2), index = field exponent k (GF(2^k)).
_IRREDUCIBLE = {1: 0b10, 2: 0b111, 3: 0b1011, 4: 0b10011}

MAX_PLANE_ORDER = 16


class UnsupportedOrderError(ValueError):
    """Pursuer count needs a field beyond the fixed polynomial table."""


def _gf_mul(a: int, b: int, k: int) -> int:
    poly = _IRREDUCIBLE[k]
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> k:
            a ^= poly
    return out


def smallest_power_of_two_at_least(n: int) -> int:
    q = 1
    while q < n:
        q *= 2
    return q


def _plane_points(q: int, k: int) -> list[tuple[int, int, int]]:
    """Canonical representatives of 1-dim subspaces of GF(q)^3.

    Normalized so the first nonzero coordinate is 1: (1,a,b), (0,1,a), (0,0,1).
    """
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts.extend((0, 1, a) for a in range(q))
    pts.append((0, 0, 1))
    return pts


def projective_plane_incidence(n: int) -> LabelledGraph:
    """Incidence graph of the projective plane of order q = 2^ceil(log2 n).

    Vertices are the q^2+q+1 points and q^2+q+1 lines; edges (all
    unprotected) join a point to each line through it. Order 1 degenerates to
    the triangle plane, i.e. the 6-cycle. Annotated with roles "point"/"line".
    """
    if n < 1:
        raise ValueError(f"pursuer count must be >= 1, got {n}")
    q = smallest_power_of_two_at_least(n)
    if q > MAX_PLANE_ORDER:
        raise UnsupportedOrderError(
            f"{n} pursuers need plane order {q}; field table stops at {MAX_PLANE_ORDER}"
        )
    b = GraphBuilder()
    anns = []
    if q == 1:
        # Triangle plane: 3 points, 3 lines, each line holding 2 points.
        points = [b.add_vertex(f"p{i}") for i in range(3)]
        lines = [b.add_vertex(f"l{i}") for i in range(3)]
        for i, l in enumerate(lines):
            b.add_edge(points[i], l, UNPROTECTED)
            b.add_edge(points[(i + 1) % 3], l, UNPROTECTED)
        anns = [VertexAnnotation(v, "point") for v in points]
        anns += [VertexAnnotation(v, "line") for v in lines]
        return b.build(anns)

    k = q.bit_length() - 1
    coords = _plane_points(q, k)
    points = [b.add_vertex("P" + "".join(map(str, c))) for c in coords]
    lines = [b.add_vertex("L" + "".join(map(str, c))) for c in coords]
    for pi, p in enumerate(coords):
        for li, l in enumerate(coords):
            dot = _gf_mul(p[0], l[0], k) ^ _gf_mul(p[1], l[1], k) ^ _gf_mul(p[2], l[2], k)
            if dot == 0:
                b.add_edge(points[pi], lines[li], UNPROTECTED)
    anns = [VertexAnnotation(v, "point") for v in points]
    anns += [VertexAnnotation(v, "line") for v in lines]
    return b.build(anns)


@dataclass(frozen=True)
class PartedGraph:
    """A graph together with a partition of its vertices into parts 1..g."""

    graph: LabelledGraph
    parts: tuple[tuple[int, ...], ...]

    @property
    def part_count(self) -> int:
        return len(self.parts)

    def part_of(self, v: int) -> int:
        return v // (self.graph.vertex_count // len(self.parts)) + 1


def evader_product(p: LabelledGraph, g: int) -> PartedGraph:
    """Product of g parts over the evasion graph `p`.

    Vertices are (part, vertex-of-p); two distinct vertices are joined (all
    edges unprotected) iff their p-coordinates are equal or adjacent in p.
    Any move of the underlying evasion play thus combines freely with any
    part choice, which is what lets the evader steer into every part.
    """
    if g < 1:
        raise ValueError(f"part count must be >= 1, got {g}")
    np_ = p.vertex_count
    b = GraphBuilder()
    anns = []
    for i in range(1, g + 1):
        for v in p.vertices():
            vid = b.add_vertex(f"({i},{p.names[v]})")
            anns.append(VertexAnnotation(vid, "product", track=i, copy=v))

    def vid(i: int, v: int) -> int:
        return (i - 1) * np_ + v

    for i in range(1, g + 1):
        for j in range(i, g + 1):
            for v in p.vertices():
                for u in p.vertices():
                    if i == j and u <= v:
                        continue
                    if u == v or p.has_edge(u, v):
                        b.add_edge(vid(i, v), vid(j, u), UNPROTECTED)
    parts = tuple(tuple(range((i - 1) * np_, i * np_)) for i in range(1, g + 1))
    return PartedGraph(graph=b.build(anns), parts=parts)
