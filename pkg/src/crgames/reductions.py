"""Instance compilers between game variants and from quantified formulas.

Five compilers: the trivial lowering of the classic game into the protection
variant; the converse simulation via parted product graphs; the
dominating-set reduction; the formula gadget with fixed starts; and the full
circular construction with two reset mechanisms. Every emitted vertex is
annotated with role/level/track/copy/mechanism so structural tests and
scripted agents can navigate instances without relying on raw ids.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .engine import Elective, Fixed, GameSpec, Side, Variant
from .evader import evader_product, projective_plane_incidence
from .graphs import (
    PROTECTED,
    UNPROTECTED,
    GraphBuilder,
    LabelledGraph,
    VertexAnnotation,
)
from .qbf import Qbf


class ReductionError(ValueError):
    """Raised when an input violates a compiler's preconditions."""


class ReductionWarning(UserWarning):
    pass


@dataclass
class ReductionOutput:
    """A compiled game instance plus provenance annotations."""

    spec: GameSpec
    projection: Optional[dict[int, int]] = None  # emitted-vertex -> source-vertex
    meta: dict = field(default_factory=dict)

    @property
    def annotations(self) -> tuple[VertexAnnotation, ...]:
        return self.spec.graph.annotations

    def to_json_obj(self) -> dict:
        start = self.spec.start
        if isinstance(start, Fixed):
            start_obj = {
                "type": "fixed",
                "cops": list(start.cops),
                "robber": start.robber,
                "first_mover": start.first_mover.value,
            }
        else:
            start_obj = {"type": "elective"}
        return {
            "format": "crgames-instance",
            "graph": self.spec.graph.to_json_obj(),
            "n_cops": self.spec.n_cops,
            "variant": self.spec.variant.value,
            "start": start_obj,
            "projection": (
                {str(k): v for k, v in sorted(self.projection.items())}
                if self.projection is not None
                else None
            ),
            "meta": self.meta,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_obj(), indent=indent, sort_keys=True)


def spec_from_json_obj(obj: dict) -> GameSpec:
    graph = LabelledGraph.from_json_obj(obj["graph"])
    start_obj = obj.get("start", {"type": "elective"})
    if start_obj["type"] == "fixed":
        start = Fixed(
            cops=tuple(start_obj["cops"]),
            robber=start_obj["robber"],
            first_mover=Side(start_obj["first_mover"]),
        )
    else:
        start = Elective()
    return GameSpec(
        graph=graph,
        n_cops=obj["n_cops"],
        variant=Variant(obj.get("variant", "crp")),
        start=start,
    )


def instance_from_json(text: str) -> ReductionOutput:
    obj = json.loads(text)
    spec = spec_from_json_obj(obj)
    projection = obj.get("projection")
    if projection is not None:
        projection = {int(k): v for k, v in projection.items()}
    return ReductionOutput(spec=spec, projection=projection, meta=obj.get("meta", {}))


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# -- trivial lowering ---------------------------------------------------------


def cr_to_crp(graph: LabelledGraph, n_cops: int, start=None) -> ReductionOutput:
    """Classic game -> protection game: everything unprotected, loops everywhere."""
    b = GraphBuilder()
    for name in graph.names:
        b.add_vertex(name)
    for u, v, _ in graph.edges():
        b.add_edge(u, v, UNPROTECTED)
    for v in graph.vertices():
        b.add_edge(v, v, UNPROTECTED)
    out = b.build(graph.annotations)
    spec = GameSpec(out, n_cops, Variant.CRP, start if start is not None else Elective())
    return ReductionOutput(
        spec=spec,
        projection={v: v for v in graph.vertices()},
        meta={"kind": "cr_to_crp", "source": _digest(graph.to_json())},
    )


# -- protection game -> classic game ------------------------------------------


def crp_to_cr(graph: LabelledGraph, n_cops: int) -> ReductionOutput:
    """Simulate the protection game inside the classic game.

    Every source vertex becomes a fiber carrying a copy of the evasion graph;
    unprotected source edges join fibers completely (threat transfers),
    protected source edges and fiber interiors get only product-graph edges
    (the evader steers among them untouched). The output is a plain classic
    instance: all labels unprotected, no loops; lower it once when solving.
    """
    if n_cops < 1:
        raise ReductionError("need at least one pursuer")
    g = graph.vertex_count
    plane = projective_plane_incidence(n_cops)
    parted = evader_product(plane, g)
    np_ = plane.vertex_count

    def fiber(i: int) -> range:  # source vertex i -> emitted ids
        return range(i * np_, (i + 1) * np_)

    b = GraphBuilder()
    anns = []
    projection = {}
    for i in graph.vertices():
        for p in plane.vertices():
            vid = b.add_vertex(f"({graph.names[i]}|{plane.names[p]})")
            anns.append(VertexAnnotation(vid, "fiber", track=i, copy=p))
            projection[vid] = i

    h = parted.graph  # parts of h are laid out identically to our fibers
    for i in graph.vertices():
        for j in range(i, g):
            lab = graph.label(i, j)
            if i == j:
                if lab is UNPROTECTED:
                    # unprotected loop: the whole fiber becomes mutually fatal
                    for p, q in itertools.combinations(fiber(i), 2):
                        b.add_edge(p, q, UNPROTECTED)
                else:
                    for p, q in itertools.combinations(range(np_), 2):
                        if plane.has_edge(p, q):
                            b.add_edge(i * np_ + p, i * np_ + q, UNPROTECTED)
                continue
            if lab is UNPROTECTED:
                for p in fiber(i):
                    for q in fiber(j):
                        b.add_edge(p, q, UNPROTECTED)
            elif lab is PROTECTED:
                for p in plane.vertices():
                    for q in plane.vertices():
                        if p == q or plane.has_edge(p, q):
                            b.add_edge(i * np_ + p, j * np_ + q, UNPROTECTED)

    out = b.build(anns)
    spec = GameSpec(out, n_cops, Variant.CR, Elective())
    return ReductionOutput(
        spec=spec,
        projection=projection,
        meta={
            "kind": "crp_to_cr",
            "source": _digest(graph.to_json()),
            "plane_order": (plane.vertex_count - 2) // 2 if plane.vertex_count == 6 else None,
            "fiber_size": np_,
        },
    )


# -- dominating set ------------------------------------------------------------


def dominating_set_to_crp(graph: LabelledGraph, k: int) -> ReductionOutput:
    """Domination instance -> protection game on a relabelled complete graph.

    Source edges become unprotected, non-edges protected, every vertex gets
    an unprotected loop; k pursuers with elective starts. A placement on a
    dominating set captures wherever the evader appears; otherwise some
    vertex is always unthreatened and reachable across the complete graph.
    """
    V = graph.vertex_count
    if not (1 <= k < V):
        raise ReductionError(f"need 1 <= k < |V|, got k={k} on {V} vertices")
    b = GraphBuilder()
    for name in graph.names:
        b.add_vertex(name)
    for u, v in itertools.combinations(range(V), 2):
        b.add_edge(u, v, UNPROTECTED if graph.has_edge(u, v) else PROTECTED)
    for v in range(V):
        b.add_edge(v, v, UNPROTECTED)
    out = b.build(graph.annotations)
    spec = GameSpec(out, k, Variant.CRP, Elective())
    return ReductionOutput(
        spec=spec,
        projection={v: v for v in range(V)},
        meta={"kind": "dominating_set_to_crp", "source": _digest(graph.to_json()), "k": k},
    )


def has_dominating_set(graph: LabelledGraph, k: int) -> bool:
    """Brute-force closed-neighborhood domination check (the test oracle)."""
    V = graph.vertex_count
    closed = []
    for v in graph.vertices():
        s = {v}
        s.update(u for u, _ in graph.neighbors(v))
        closed.append(s)
    everything = set(range(V))
    for combo in itertools.combinations(range(V), min(k, V)):
        cover = set()
        for v in combo:
            cover |= closed[v]
        if cover == everything:
            return True
    return False


# -- formula gadget -------------------------------------------------------------


@dataclass
class _Gadget:
    """Handle map for one formula gadget built into a shared builder."""

    r: dict[int, int]  # odd level -> robber-track vertex
    rt: dict[int, int]  # even level -> true-side diamond vertex
    rf: dict[int, int]  # even level -> false-side diamond vertex
    c: dict[tuple[int, int], int]  # (track, level) -> chain vertex
    t: dict[tuple[int, int], int]  # (track, level) -> true branch vertex
    f: dict[tuple[int, int], int]  # (track, level) -> false branch vertex
    a: dict[tuple[int, int], int]  # (track, level) -> true-side escape chain
    bb: dict[tuple[int, int], int]  # (track, level) -> false-side escape chain
    clauses: list[int]
    c0: Optional[int] = None
    heavens: list[int] = field(default_factory=list)

    def bottom_level_vertices(self, n: int) -> list[int]:
        out = list(self.clauses)
        for t in range(1, 2 * n + 1, 2):
            out.append(self.a[(t, 2 * n + 2)])
            out.append(self.bb[(t, 2 * n + 2)])
        return sorted(out)

    def top_level_vertices(self, n: int) -> list[int]:
        return [self.r[1]] + [self.c[(t, 1)] for t in range(1, 2 * n + 1)]


def _build_gadget(
    b: GraphBuilder,
    anns: list[VertexAnnotation],
    q: Qbf,
    *,
    prefix: str = "",
    with_c0: bool = True,
    with_heaven: bool = True,
    per_gadget_heavens: bool = False,
    copy: Optional[int] = None,
    level_of=None,
) -> _Gadget:
    """Emit one formula gadget; returns handles to every constituent vertex.

    Loops are added on every vertex except heavens. `level_of` maps a gadget
    level (0..2n+3) to the annotated level, letting the circular construction
    re-number levels; identity by default.
    """
    n2 = q.var_count
    n = n2 // 2
    if level_of is None:
        level_of = lambda lvl: lvl  # noqa: E731

    gadget = _Gadget(r={}, rt={}, rf={}, c={}, t={}, f={}, a={}, bb={}, clauses=[])
    looped: list[int] = []

    def vert(name: str, role: str, level: int, track: int | None = None) -> int:
        vid = b.add_vertex(prefix + name)
        anns.append(
            VertexAnnotation(vid, role, level=level_of(level), track=track, copy=copy)
        )
        looped.append(vid)
        return vid

    # Evader track: single vertices on odd levels, choice diamonds on even.
    for j in range(1, n2 + 2, 2):
        gadget.r[j] = vert(f"r{j}", "robber-node", j)
    for j in range(2, n2 + 1, 2):
        gadget.rt[j] = vert(f"rT{j}", "robber-true", j)
        gadget.rf[j] = vert(f"rF{j}", "robber-false", j)
    for j in range(2, n2 + 1, 2):
        b.add_edge(gadget.r[j - 1], gadget.rt[j], UNPROTECTED)
        b.add_edge(gadget.r[j - 1], gadget.rf[j], UNPROTECTED)
        b.add_edge(gadget.rt[j], gadget.r[j + 1], UNPROTECTED)
        b.add_edge(gadget.rf[j], gadget.r[j + 1], UNPROTECTED)

    # Pursuer tracks: chain to the track's own level, then a true/false fork.
    for t in range(1, n2 + 1):
        for j in range(1, t + 1):
            gadget.c[(t, j)] = vert(f"c{t}_{j}", "cop-chain", j, track=t)
            if j > 1:
                b.add_edge(gadget.c[(t, j - 1)], gadget.c[(t, j)], UNPROTECTED)
        for j in range(t + 1, n2 + 2):
            gadget.t[(t, j)] = vert(f"T{t}_{j}", "cop-true", j, track=t)
            gadget.f[(t, j)] = vert(f"F{t}_{j}", "cop-false", j, track=t)
            if j == t + 1:
                b.add_edge(gadget.c[(t, t)], gadget.t[(t, j)], UNPROTECTED)
                b.add_edge(gadget.c[(t, t)], gadget.f[(t, j)], UNPROTECTED)
            else:
                b.add_edge(gadget.t[(t, j - 1)], gadget.t[(t, j)], UNPROTECTED)
                b.add_edge(gadget.f[(t, j - 1)], gadget.f[(t, j)], UNPROTECTED)

    # Escape chains enforcing the fork choice on universal tracks: the branch
    # entry and the matching diamond side both touch the chain head, so an
    # unguarded head is a clear run to safety.
    for t in range(1, n2 + 1, 2):
        for j in range(t + 2, n2 + 3):
            gadget.a[(t, j)] = vert(f"a{t}_{j}", "escape-true", j, track=t)
            gadget.bb[(t, j)] = vert(f"b{t}_{j}", "escape-false", j, track=t)
            if j == t + 2:
                b.add_edge(gadget.t[(t, t + 1)], gadget.a[(t, j)], UNPROTECTED)
                b.add_edge(gadget.rt[t + 1], gadget.a[(t, j)], UNPROTECTED)
                b.add_edge(gadget.f[(t, t + 1)], gadget.bb[(t, j)], UNPROTECTED)
                b.add_edge(gadget.rf[t + 1], gadget.bb[(t, j)], UNPROTECTED)
            else:
                b.add_edge(gadget.a[(t, j - 1)], gadget.a[(t, j)], UNPROTECTED)
                b.add_edge(gadget.bb[(t, j - 1)], gadget.bb[(t, j)], UNPROTECTED)

    # Clause level: a vertex per clause, wired to the matching fork ends.
    for ci, clause in enumerate(q.clauses):
        cv = vert(f"clause{ci + 1}", "clause", n2 + 2)
        gadget.clauses.append(cv)
        b.add_edge(gadget.r[n2 + 1], cv, UNPROTECTED)
        for lit in clause:
            t = abs(lit)
            end = gadget.t[(t, n2 + 1)] if lit > 0 else gadget.f[(t, n2 + 1)]
            b.add_edge(end, cv, UNPROTECTED)

    if with_c0:
        gadget.c0 = vert("c0", "c0-anchor", 0)
        b.add_edge(gadget.c0, gadget.r[1], UNPROTECTED)

    for v in looped:
        b.add_edge(v, v, UNPROTECTED)

    if with_heaven:

        def heaven(name: str) -> int:
            vid = b.add_vertex(prefix + name)
            anns.append(VertexAnnotation(vid, "heaven", level=level_of(n2 + 3), copy=copy))
            gadget.heavens.append(vid)
            return vid

        if per_gadget_heavens:
            for t in range(1, n2 + 1, 2):
                ha = heaven(f"heaven_a{t}")
                b.add_edge(gadget.a[(t, n2 + 2)], ha, PROTECTED)
                hb = heaven(f"heaven_b{t}")
                b.add_edge(gadget.bb[(t, n2 + 2)], hb, PROTECTED)
            hc = heaven("heaven_clauses")
            for cv in gadget.clauses:
                b.add_edge(cv, hc, PROTECTED)
        else:
            h = heaven("heaven")
            for cv in gadget.clauses:
                b.add_edge(cv, h, PROTECTED)
            for t in range(1, n2 + 1, 2):
                b.add_edge(gadget.a[(t, n2 + 2)], h, PROTECTED)
                b.add_edge(gadget.bb[(t, n2 + 2)], h, PROTECTED)

    return gadget


def qbf_to_crps(
    q: Qbf,
    *,
    per_gadget_heavens: bool = False,
    strict: bool = True,
) -> ReductionOutput:
    """Formula -> fixed-start protection game on one gadget.

    Pursuers: two on the anchor below the evader track plus one on each
    track head; evader on the track head; evader moves first. The pursuers
    win iff the formula is true.
    """
    if not q.clauses:
        if strict:
            raise ReductionError("formula has no clauses; pass strict=False to allow")
        warnings.warn("clause-free formula: gadget has no clause level", ReductionWarning)
    if q.has_empty_clause():
        warnings.warn(
            "empty clause present: formula is unsatisfiable by fiat", ReductionWarning
        )
    b = GraphBuilder()
    anns: list[VertexAnnotation] = []
    gadget = _build_gadget(
        b, anns, q, with_c0=True, with_heaven=True, per_gadget_heavens=per_gadget_heavens
    )
    graph = b.build(anns)
    n2 = q.var_count
    cops = [gadget.c0, gadget.c0] + [gadget.c[(t, 1)] for t in range(1, n2 + 1)]
    spec = GameSpec(
        graph,
        n2 + 2,
        Variant.CRP,
        Fixed(cops=tuple(cops), robber=gadget.r[1], first_mover=Side.ROBBER),
    )
    return ReductionOutput(
        spec=spec,
        meta={
            "kind": "qbf_to_crps",
            "source": _digest(json.dumps([q.var_count, [list(c) for c in q.clauses]])),
            "var_count": q.var_count,
            "clause_count": len(q.clauses),
            "per_gadget_heavens": per_gadget_heavens,
        },
    )


# -- the circular construction --------------------------------------------------


def _wrap(i: int, modulus: int) -> int:
    return (i - 1) % modulus + 1


def qbf_to_crp(
    q: Qbf,
    *,
    level2_completion: str = "mixed",
    strict: bool = True,
) -> ReductionOutput:
    """Formula -> elective protection game on the circular construction.

    4n+4 gadget copies (anchor and heavens removed) alternate with two reset
    mechanisms around a circle of 4n+8 levels; each level connects only to
    its neighbors. The evader can wait in a mechanism until forced around the
    circle; the pursuers win iff the formula is true.

    `level2_completion` picks the labelling of the completion edges on the
    waiting level: "mixed" (default) keeps edges at protected waiting
    vertices protected, so each pursuer threatens at most one of them, which
    both sides' forcing arguments rely on; "literal" makes all completion
    edges unprotected.
    """
    if level2_completion not in ("mixed", "literal"):
        raise ReductionError(f"unknown level2_completion {level2_completion!r}")
    warns = []
    if not any(q.clauses):
        msg = "construction assumes at least one non-empty clause"
        if strict and not q.clauses:
            raise ReductionError("formula has no clauses; pass strict=False to allow")
        warns.append(msg)
        warnings.warn(msg, ReductionWarning)
    if q.has_empty_clause():
        warns.append("empty clause present")
        warnings.warn("empty clause present: formula is false by fiat", ReductionWarning)
    n2 = q.var_count
    n = n2 // 2
    if n2 < 8:
        warns.append("fewer than 8 variables: the pursuer-side argument assumes 2n >= 8")
        warnings.warn(warns[-1], ReductionWarning)

    width = n2 + 2  # vertices per reset layer, also pursuer count
    total_levels = 4 * n + 8
    b = GraphBuilder()
    anns: list[VertexAnnotation] = []

    # Gadget copies: group 0 hangs below mechanism 0, group 1 below mechanism 1.
    def copy_level(group: int, j: int) -> int:
        if group == 0:
            return 3 + j
        return (2 * n + 6 + j) % total_levels + 1

    copies: dict[tuple[int, int], _Gadget] = {}
    for group in (0, 1):
        for i in range(1, width + 1):
            copies[(group, i)] = _build_gadget(
                b,
                anns,
                q,
                prefix=f"g{group}c{i}.",
                with_c0=False,
                with_heaven=False,
                copy=group * width + i,
                level_of=lambda lvl, g=group: copy_level(g, lvl),
            )

    # Reset mechanisms: mechanism m sits between group 1-m bottoms (its level
    # 1) and group m tops (its level 4).
    reset: dict[tuple[int, str], list[int]] = {}
    for mech in (0, 1):
        base = 0 if mech == 0 else 2 * n + 4
        layers = {
            "a_prime": ("a'", 2, "reset-a-prime", True),
            "a_dprime": ("a''", 2, "reset-a-dblprime", False),
            "b_prime": ("b'", 3, "reset-b-prime", True),
            "b_dprime": ("b''", 3, "reset-b-dblprime", True),
        }
        for key, (sym, lvl, role, looped) in layers.items():
            ids = []
            for i in range(1, width + 1):
                vid = b.add_vertex(f"m{mech}.{sym}{i}")
                anns.append(
                    VertexAnnotation(vid, role, level=base + lvl, track=i, mechanism=mech)
                )
                if looped:
                    b.add_edge(vid, vid, UNPROTECTED)
                ids.append(vid)
            reset[(mech, key)] = ids

        ap, ad = reset[(mech, "a_prime")], reset[(mech, "a_dprime")]
        bp, bd = reset[(mech, "b_prime")], reset[(mech, "b_dprime")]
        level1 = []
        for i in range(1, width + 1):
            level1.extend(copies[(1 - mech, i)].bottom_level_vertices(n))
        for i in range(width):
            b.add_edge(ap[i], ad[i], UNPROTECTED)
            for v in level1:
                b.add_edge(ap[i], v, UNPROTECTED)
                b.add_edge(ad[i], v, PROTECTED)
            b.add_edge(bp[i], ap[i], UNPROTECTED)
            b.add_edge(bd[i], ad[i], PROTECTED)
        completion_all_unprotected = level2_completion == "literal"
        for i, j in itertools.combinations(range(width), 2):
            b.add_edge(ap[i], ap[j], UNPROTECTED)
            label = UNPROTECTED if completion_all_unprotected else PROTECTED
            b.add_edge(ad[i], ad[j], label)
            b.add_edge(ap[i], ad[j], label)
            b.add_edge(ad[i], ap[j], label)
            b.add_edge(bp[i], bp[j], UNPROTECTED)
            b.add_edge(bd[i], bd[j], UNPROTECTED)

        # Level 4 wiring into the tops of this mechanism's own copy group.
        for i in range(1, width + 1):
            g = copies[(mech, i)]
            b.add_edge(g.r[1], bd[i - 1], UNPROTECTED)
            for k in range(1, n2 + 1):
                target = _wrap(i + k, width)
                b.add_edge(g.c[(k, 1)], bp[target - 1], UNPROTECTED)

    graph = b.build(anns)
    spec = GameSpec(graph, width, Variant.CRP, Elective())
    return ReductionOutput(
        spec=spec,
        meta={
            "kind": "qbf_to_crp",
            "source": _digest(json.dumps([q.var_count, [list(c) for c in q.clauses]])),
            "var_count": q.var_count,
            "clause_count": len(q.clauses),
            "copies": 4 * n + 4,
            "levels": total_levels,
            "level2_completion": level2_completion,
            "warnings": warns,
        },
    )
