"""Rules of the pursuit game with protected edges.

The engine implements the protection variant only: capture happens exactly
when a pursuer traverses an unprotected edge whose destination is the
evader's current vertex (an unprotected loop counts when they share the
vertex). The classic variant is realized by `lower_to_crp`, which marks all
edges unprotected and adds an unprotected loop everywhere; the winner is
preserved, transcripts may differ by one ply when the evader steps onto a
pursuer.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Union

from .graphs import GraphBuilder, LabelledGraph, UNPROTECTED


class Side(Enum):
    COPS = "cops"
    ROBBER = "robber"

    def other(self) -> "Side":
        return Side.ROBBER if self is Side.COPS else Side.COPS


class Variant(Enum):
    CR = "cr"
    CRP = "crp"


#: Convention for who moves first after both elective placements. The rules
#: text leaves this open; the verification suites re-run with it flipped.
DEFAULT_ELECTIVE_FIRST_MOVER = Side.COPS


class RuleError(ValueError):
    """Raised on inconsistent specs, positions, or illegal moves."""


@dataclass(frozen=True, slots=True)
class Elective:
    pass


@dataclass(frozen=True, slots=True)
class Fixed:
    cops: tuple[int, ...]
    robber: int
    first_mover: Side

    def __post_init__(self) -> None:
        object.__setattr__(self, "cops", tuple(sorted(self.cops)))


Start = Union[Elective, Fixed]


@dataclass(frozen=True)
class GameSpec:
    graph: LabelledGraph
    n_cops: int
    variant: Variant = Variant.CRP
    start: Start = Elective()

    def __post_init__(self) -> None:
        if not (1 <= self.n_cops < self.graph.vertex_count):
            raise RuleError(
                f"need 1 <= n_cops < |V|, got {self.n_cops} cops on "
                f"{self.graph.vertex_count} vertices"
            )
        if isinstance(self.start, Fixed):
            if len(self.start.cops) != self.n_cops:
                raise RuleError(
                    f"fixed start has {len(self.start.cops)} cops, spec says {self.n_cops}"
                )
            for v in self.start.cops + (self.start.robber,):
                self.graph.neighbors(v)  # raises on unknown id


@dataclass(frozen=True, slots=True)
class Position:
    cops: tuple[int, ...]  # sorted multiset
    robber: int
    to_move: Side

    def __post_init__(self) -> None:
        object.__setattr__(self, "cops", tuple(sorted(self.cops)))


# Moves. A per-cop action is None (stay) or a destination vertex (traverse
# the edge there; destination == source means traversing a loop, which is
# distinct from staying because loop traversal can capture).
CopAction = Optional[int]


@dataclass(frozen=True, slots=True)
class CopMove:
    actions: tuple[CopAction, ...]


@dataclass(frozen=True, slots=True)
class RobberMove:
    action: CopAction


@dataclass(frozen=True, slots=True)
class CopPlacement:
    cops: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cops", tuple(sorted(self.cops)))


@dataclass(frozen=True, slots=True)
class RobberPlacement:
    vertex: int


Move = Union[CopMove, RobberMove, CopPlacement, RobberPlacement]


def _check_position(spec: GameSpec, pos: Position) -> None:
    if len(pos.cops) != spec.n_cops:
        raise RuleError(f"position has {len(pos.cops)} cops, spec says {spec.n_cops}")
    for v in pos.cops + (pos.robber,):
        spec.graph.neighbors(v)


def _dest(graph: LabelledGraph, src: int, action: CopAction) -> int:
    if action is None:
        return src
    if graph.label(src, action) is None:
        raise RuleError(f"no edge from {src} to {action}")
    return action


def _captures(graph: LabelledGraph, src: int, action: CopAction, robber: int) -> bool:
    """A single traversal captures iff it crosses an unprotected edge onto the robber."""
    if action is None or action != robber:
        return False
    return graph.label(src, action) is UNPROTECTED


def cop_move_outcomes(spec: GameSpec, pos: Position) -> Iterator[tuple[CopMove, tuple[int, ...], bool]]:
    """All simultaneous cop moves with resulting multiset and capture flag.

    Deduplicated by (resulting multiset, captured): cops are interchangeable,
    but a capturing and a non-capturing move to the same multiset are kept
    apart because only one of them ends the game.
    """
    graph = spec.graph
    choice_lists = []
    for c in pos.cops:
        choices: list[CopAction] = [None]
        choices.extend(u for u, _ in graph.neighbors(c))
        choice_lists.append(choices)
    seen: set[tuple[tuple[int, ...], bool]] = set()
    for actions in itertools.product(*choice_lists):
        dests = tuple(sorted(_dest(graph, c, a) for c, a in zip(pos.cops, actions)))
        captured = any(_captures(graph, c, a, pos.robber) for c, a in zip(pos.cops, actions))
        key = (dests, captured)
        if key in seen:
            continue
        seen.add(key)
        yield CopMove(actions), dests, captured


def legal_moves(spec: GameSpec, pos: Position) -> list[Move]:
    """Moves for the side to move; Stay always exists, so never empty."""
    _check_position(spec, pos)
    if pos.to_move is Side.COPS:
        return [m for m, _, _ in cop_move_outcomes(spec, pos)]
    moves: list[Move] = [RobberMove(None)]
    moves.extend(RobberMove(u) for u, _ in spec.graph.neighbors(pos.robber))
    return moves


def apply(spec: GameSpec, pos: Position, move: Move) -> tuple[Position, bool]:
    """Apply a move; returns the successor position and the capture flag.

    Only cop moves can capture. Validates legality and raises RuleError on
    illegal input.
    """
    _check_position(spec, pos)
    graph = spec.graph
    if isinstance(move, CopMove):
        if pos.to_move is not Side.COPS:
            raise RuleError("cops are not to move")
        if len(move.actions) != spec.n_cops:
            raise RuleError(f"cop move must contain {spec.n_cops} actions")
        dests = tuple(sorted(_dest(graph, c, a) for c, a in zip(pos.cops, move.actions)))
        captured = any(
            _captures(graph, c, a, pos.robber) for c, a in zip(pos.cops, move.actions)
        )
        return Position(dests, pos.robber, Side.ROBBER), captured
    if isinstance(move, RobberMove):
        if pos.to_move is not Side.ROBBER:
            raise RuleError("robber is not to move")
        dest = _dest(graph, pos.robber, move.action)
        return Position(pos.cops, dest, Side.COPS), False
    raise RuleError(f"placement move {move!r} not valid during play")


def robber_is_threatened(spec: GameSpec, pos: Position) -> bool:
    """True iff some capturing cop move exists (cops to move)."""
    if pos.to_move is not Side.COPS:
        raise RuleError("threat is defined with cops to move")
    _check_position(spec, pos)
    contacts = spec.graph.unprotected_contacts(pos.robber)
    return any(c in contacts for c in pos.cops)


def lower_to_crp(graph: LabelledGraph) -> LabelledGraph:
    """Classic-rules graph -> protection-rules graph with identical winner.

    All edges become unprotected and every vertex gets an unprotected loop,
    so cohabitation is punished by a loop traversal one ply later.
    """
    b = GraphBuilder()
    for name in graph.names:
        b.add_vertex(name)
    for u, v, _ in graph.edges():
        b.add_edge(u, v, UNPROTECTED)
    for v in graph.vertices():
        b.add_edge(v, v, UNPROTECTED)
    return b.build(graph.annotations)


def lower_spec(spec: GameSpec) -> GameSpec:
    """Return an equivalent protection-variant spec (identity if already one)."""
    if spec.variant is Variant.CRP:
        return spec
    return GameSpec(
        graph=lower_to_crp(spec.graph),
        n_cops=spec.n_cops,
        variant=Variant.CRP,
        start=spec.start,
    )


def start_position(spec: GameSpec) -> Position:
    if not isinstance(spec.start, Fixed):
        raise RuleError("spec has an elective start; no fixed start position")
    return Position(spec.start.cops, spec.start.robber, spec.start.first_mover)


# -- transcripts ------------------------------------------------------------


def move_to_json(move: Move) -> dict:
    if isinstance(move, CopMove):
        return {"type": "cops", "actions": list(move.actions)}
    if isinstance(move, RobberMove):
        return {"type": "robber", "action": move.action}
    if isinstance(move, CopPlacement):
        return {"type": "cop_placement", "cops": list(move.cops)}
    return {"type": "robber_placement", "vertex": move.vertex}


def position_to_json(pos: Position) -> dict:
    return {"cops": list(pos.cops), "robber": pos.robber, "to_move": pos.to_move.value}


@dataclass
class Transcript:
    """Move-by-move log of a play-out."""

    spec: GameSpec
    start: Position
    plies: list[dict]
    captured: bool
    fault: Optional[Side] = None
    fault_reason: Optional[str] = None

    @property
    def final_position(self) -> Position:
        if not self.plies:
            return self.start
        return self.plies[-1]["_position"]

    def to_json_obj(self) -> dict:
        return {
            "n_cops": self.spec.n_cops,
            "variant": self.spec.variant.value,
            "start": position_to_json(self.start),
            "plies": [
                {k: v for k, v in ply.items() if not k.startswith("_")}
                for ply in self.plies
            ],
            "captured": self.captured,
            "fault": self.fault.value if self.fault else None,
            "fault_reason": self.fault_reason,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_obj(), indent=indent, sort_keys=True)
