"""Exact decision of pursuit games by backward induction over position space.

Public surface: `solve_fixed`, `solve_elective`, `minimax_oracle`,
`extract_move`, `play`, plus `SolveResult` queries (winning region
membership, ranks, strategy extraction). The hot kernel is compiled when the
extension built; a pure-Python twin is selected otherwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..engine import (
    DEFAULT_ELECTIVE_FIRST_MOVER,
    Elective,
    Fixed,
    GameSpec,
    Move,
    Position,
    RobberMove,
    RuleError,
    Side,
    Transcript,
    Variant,
    apply,
    cop_move_outcomes,
    lower_spec,
    move_to_json,
    start_position,
)
from ._core import (
    DEFAULT_STATE_BUDGET,
    CompiledGame,
    InfeasibleError,
    estimate_states,
    select_kernel,
    state_budget,
)
from .minimax import DEFAULT_MINIMAX_BUDGET, minimax_winner

_KERNEL = select_kernel()

WIN = 2


def kernel_name() -> str:
    return _KERNEL.KERNEL_NAME


@dataclass(frozen=True)
class SolveStats:
    states: int
    win_states: int
    seeds: int
    iterations: int
    wall_time: float
    kernel: str
    mode: str

    def to_json_obj(self, include_timing: bool = False) -> dict:
        d = {
            "states": self.states,
            "win_states": self.win_states,
            "seeds": self.seeds,
            "iterations": self.iterations,
            "kernel": self.kernel,
            "mode": self.mode,
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class SolveResult:
    """Outcome of an exact solve, with queryable winning region and ranks."""

    winner: Side
    spec: GameSpec  # lowered spec actually solved
    original_spec: GameSpec
    stats: SolveStats
    cop_start: Optional[tuple[int, ...]] = None  # witnessing elective placement
    _cg: CompiledGame = field(default=None, repr=False)
    _status_c2m: np.ndarray = field(default=None, repr=False)
    _status_r2m: np.ndarray = field(default=None, repr=False)
    _rank_c2m: np.ndarray = field(default=None, repr=False)
    _rank_r2m: np.ndarray = field(default=None, repr=False)

    def _index(self, pos: Position) -> tuple[int, np.ndarray, np.ndarray]:
        if len(pos.cops) != self._cg.n:
            raise RuleError(f"position has {len(pos.cops)} cops, solved game has {self._cg.n}")
        sidx = self._cg.crank(pos.cops) * self._cg.V + pos.robber
        if pos.to_move is Side.COPS:
            return sidx, self._status_c2m, self._rank_c2m
        return sidx, self._status_r2m, self._rank_r2m

    def is_explored(self, pos: Position) -> bool:
        sidx, status, _ = self._index(pos)
        return status[sidx] != 0

    def is_cop_win(self, pos: Position) -> bool:
        sidx, status, _ = self._index(pos)
        if status[sidx] == 0:
            raise LookupError(f"position {pos} not explored (reachable-mode solve)")
        return bool(status[sidx] == WIN)

    def layer(self, pos: Position) -> int:
        """Internal BFS layer (0 = capture available now); -1 outside the region."""
        sidx, _, rank = self._index(pos)
        return int(rank[sidx])

    def rank(self, pos: Position) -> int:
        """Pursuer moves remaining to capture under rank-decreasing play."""
        lay = self.layer(pos)
        if lay < 0:
            raise LookupError(f"position {pos} is not in the winning region")
        return lay // 2 + 1

    def cop_win_positions(self, limit: int = 1_000_000):
        """Iterate positions of the winning region (small instances only)."""
        count = int(self.stats.win_states)
        if count > limit:
            raise InfeasibleError(f"winning region has {count} states > limit {limit}")
        cg = self._cg
        for side, status in ((Side.COPS, self._status_c2m), (Side.ROBBER, self._status_r2m)):
            for sidx in np.nonzero(status == WIN)[0]:
                crank, r = divmod(int(sidx), cg.V)
                yield Position(cg.unrank(crank), int(r), side)

    def extract_move(self, pos: Position) -> Move:
        return extract_move(self, pos)


def _solve_arrays(spec: GameSpec, mode: str, budget: int | None):
    lowered = lower_spec(spec)
    V, n = lowered.graph.vertex_count, lowered.n_cops
    est = estimate_states(V, n)
    cap = state_budget(budget)
    if est > cap:
        raise InfeasibleError(f"estimated {est} state keys exceed budget {cap}")
    cg = CompiledGame(lowered.graph, n)
    if mode == "full":
        args = (cg, True, 0, 0, True)
    elif mode == "reachable":
        start = start_position(lowered)
        args = (
            cg,
            False,
            cg.crank(start.cops),
            start.robber,
            start.to_move is Side.COPS,
        )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    sc, sr, rc, rr, raw = _KERNEL.solve_attractor(*args)
    wall = time.perf_counter() - t0
    stats = SolveStats(
        states=raw["states_c2m"] + raw["states_r2m"],
        win_states=raw["win_c2m"] + raw["win_r2m"],
        seeds=raw["seeds"],
        iterations=raw["layers"],
        wall_time=wall,
        kernel=raw["kernel"],
        mode=raw["mode"],
    )
    return lowered, cg, sc, sr, rc, rr, stats


def solve_fixed(
    spec: GameSpec,
    *,
    mode: str = "reachable",
    budget: int | None = None,
) -> SolveResult:
    """Exact winner from the spec's fixed start.

    ``mode="reachable"`` (default) solves the subspace reachable from the
    start; ``mode="full"`` solves every position. Winners agree; full mode
    additionally answers queries about off-path positions.
    """
    if not isinstance(spec.start, Fixed):
        raise RuleError("solve_fixed needs a spec with a fixed start")
    lowered, cg, sc, sr, rc, rr, stats = _solve_arrays(spec, mode, budget)
    start = start_position(lowered)
    sidx = cg.crank(start.cops) * cg.V + start.robber
    status = sc if start.to_move is Side.COPS else sr
    winner = Side.COPS if status[sidx] == WIN else Side.ROBBER
    return SolveResult(
        winner=winner,
        spec=lowered,
        original_spec=spec,
        stats=stats,
        _cg=cg,
        _status_c2m=sc,
        _status_r2m=sr,
        _rank_c2m=rc,
        _rank_r2m=rr,
    )


def solve_elective(
    spec: GameSpec,
    *,
    first_mover: Side | None = None,
    budget: int | None = None,
) -> SolveResult:
    """Exact winner with both sides choosing their starting vertices.

    Pursuers win iff some placement multiset beats every evader placement.
    One full-space pass answers all placements; the witnessing placement (in
    multiset-rank order, hence deterministic) is returned on a pursuer win.
    ``first_mover`` is who moves first after both placements; defaults to the
    engine-wide convention.
    """
    if not isinstance(spec.start, Elective):
        raise RuleError("solve_elective needs a spec with an elective start")
    if first_mover is None:
        first_mover = DEFAULT_ELECTIVE_FIRST_MOVER
    lowered, cg, sc, sr, rc, rr, stats = _solve_arrays(spec, "full", budget)
    status = sc if first_mover is Side.COPS else sr
    grid = status.reshape(cg.n_multisets, cg.V) == WIN
    all_r = grid.all(axis=1)
    winner = Side.COPS if all_r.any() else Side.ROBBER
    cop_start = cg.unrank(int(np.argmax(all_r))) if winner is Side.COPS else None
    return SolveResult(
        winner=winner,
        spec=lowered,
        original_spec=spec,
        stats=stats,
        cop_start=cop_start,
        _cg=cg,
        _status_c2m=sc,
        _status_r2m=sr,
        _rank_c2m=rc,
        _rank_r2m=rr,
    )


def minimax_oracle(
    spec: GameSpec,
    *,
    native_cr: bool = False,
    budget: int = DEFAULT_MINIMAX_BUDGET,
) -> Side:
    """Winner by the independent game-tree oracle (tiny instances only)."""
    return minimax_winner(spec, native_cr=native_cr, state_budget=budget)


def extract_move(result: SolveResult, pos: Position) -> Move:
    """A winning-side move that stays in its region.

    For the pursuers the move strictly decreases the internal layer (hence
    the public rank), guaranteeing progress to capture.
    """
    spec = result.spec
    if pos.to_move is not result.winner:
        raise RuleError(f"{result.winner.value} won, but {pos.to_move.value} is to move")
    if pos.to_move is Side.COPS:
        if not result.is_cop_win(pos):
            raise RuleError("position is not in the pursuer winning region")
        lay = result.layer(pos)
        best = None
        for move, dests, captured in cop_move_outcomes(spec, pos):
            if captured:
                return move
            nxt = Position(dests, pos.robber, Side.ROBBER)
            nxt_lay = result.layer(nxt)
            if 0 <= nxt_lay < lay and (best is None or (nxt_lay, dests) < best[0]):
                best = ((nxt_lay, dests), move)
        if best is None:
            raise RuleError("no layer-decreasing move found (inconsistent result)")
        return best[1]
    if result.is_cop_win(pos):
        raise RuleError("position is not in the evader winning region")
    best = None
    for u in sorted({pos.robber, *(v for v, _ in spec.graph.neighbors(pos.robber))}):
        nxt = Position(pos.cops, u, Side.COPS)
        if not result.is_cop_win(nxt):
            if best is None:
                best = u
    if best is None:
        raise RuleError("no safe evader move found (inconsistent result)")
    return RobberMove(None if best == pos.robber else best)


def play(
    spec: GameSpec,
    cop_agent,
    robber_agent,
    max_plies: int,
    start: Position | None = None,
) -> Transcript:
    """Alternating play-out from the fixed start; ends at capture or budget.

    An agent raising or emitting an illegal move ends the transcript with a
    fault attributed to that agent.
    """
    lowered = lower_spec(spec)
    pos = start if start is not None else start_position(lowered)
    transcript = Transcript(spec=lowered, start=pos, plies=[], captured=False)
    for agent in (cop_agent, robber_agent):
        reset = getattr(agent, "reset", None)
        if reset is not None:
            reset(lowered)
    for ply in range(max_plies):
        side = pos.to_move
        agent = cop_agent if side is Side.COPS else robber_agent
        try:
            move = agent.choose(lowered, pos, transcript)
            nxt, captured = apply(lowered, pos, move)
        except Exception as exc:  # noqa: BLE001 - fault attribution is the contract
            transcript.fault = side
            transcript.fault_reason = str(exc)
            return transcript
        transcript.plies.append(
            {
                "ply": ply,
                "side": side.value,
                "move": move_to_json(move),
                "position": {"cops": list(nxt.cops), "robber": nxt.robber},
                "captured": captured,
                "_position": nxt,
                "_move": move,
            }
        )
        pos = nxt
        if captured:
            transcript.captured = True
            break
    return transcript
