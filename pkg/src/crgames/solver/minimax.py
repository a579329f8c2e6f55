"""Depth-first minimax oracle, an independent cross-check of the attractor.

The game is a reachability game for the pursuers, so a repeat of a position
along the current search path gains them nothing and is scored as an evader
win. Pursuer wins are always sound to memoize; evader verdicts are memoized
only when no path repetition influenced them (otherwise they are
path-dependent). With that rule the root verdict is exact.

A native classic-rules variant (capture on any cohabitation) is included to
cross-check the lowering performed by the engine.
"""

from __future__ import annotations

import itertools
import sys

from ..engine import (
    GameSpec,
    Position,
    Side,
    Variant,
    lower_spec,
    start_position,
)
from ._core import InfeasibleError, estimate_states

DEFAULT_MINIMAX_BUDGET = 2_000_000


def _search_crp(spec: GameSpec, root: Position) -> bool:
    graph = spec.graph
    nbhd = []
    for v in graph.vertices():
        dests = {v}
        dests.update(u for u, _ in graph.neighbors(v))
        nbhd.append(tuple(sorted(dests)))

    memo: dict[tuple, bool] = {}
    path: set[tuple] = set()

    def search(cops: tuple[int, ...], robber: int, cops_move: bool) -> tuple[bool, bool]:
        """Returns (cop_win, tainted-by-repetition)."""
        key = (cops, robber, cops_move)
        if key in memo:
            return memo[key], False
        if key in path:
            return False, True
        path.add(key)
        try:
            if cops_move:
                contacts = graph.unprotected_contacts(robber)
                if any(c in contacts for c in cops):
                    memo[key] = True
                    return True, False
                any_taint = False
                for combo in itertools.product(*(nbhd[c] for c in cops)):
                    win, taint = search(tuple(sorted(combo)), robber, False)
                    if win:
                        memo[key] = True
                        return True, False
                    any_taint = any_taint or taint
                if not any_taint:
                    memo[key] = False
                return False, any_taint
            found_clean_escape = False
            found_escape = False
            for u in nbhd[robber]:
                win, taint = search(cops, u, True)
                if not win:
                    found_escape = True
                    if not taint:
                        found_clean_escape = True
                        break
            if found_escape:
                if found_clean_escape:
                    memo[key] = False
                    return False, False
                return False, True
            memo[key] = True
            return True, False
        finally:
            path.discard(key)

    win, _ = search(root.cops, root.robber, root.to_move is Side.COPS)
    return win


def _search_native_cr(spec: GameSpec, root: Position) -> bool:
    graph = spec.graph
    nbhd = []
    for v in graph.vertices():
        dests = {v}
        dests.update(u for u, _ in graph.neighbors(v))
        nbhd.append(tuple(sorted(dests)))

    memo: dict[tuple, bool] = {}
    path: set[tuple] = set()

    def search(cops: tuple[int, ...], robber: int, cops_move: bool) -> tuple[bool, bool]:
        if robber in cops:  # cohabitation is capture at any time
            return True, False
        key = (cops, robber, cops_move)
        if key in memo:
            return memo[key], False
        if key in path:
            return False, True
        path.add(key)
        try:
            if cops_move:
                any_taint = False
                for combo in itertools.product(*(nbhd[c] for c in cops)):
                    win, taint = search(tuple(sorted(combo)), robber, False)
                    if win:
                        memo[key] = True
                        return True, False
                    any_taint = any_taint or taint
                if not any_taint:
                    memo[key] = False
                return False, any_taint
            found_clean_escape = False
            found_escape = False
            for u in nbhd[robber]:
                win, taint = search(cops, u, True)
                if not win:
                    found_escape = True
                    if not taint:
                        found_clean_escape = True
                        break
            if found_escape:
                if found_clean_escape:
                    memo[key] = False
                    return False, False
                return False, True
            memo[key] = True
            return True, False
        finally:
            path.discard(key)

    win, _ = search(root.cops, root.robber, root.to_move is Side.COPS)
    return win


def minimax_winner(
    spec: GameSpec,
    *,
    native_cr: bool = False,
    state_budget: int = DEFAULT_MINIMAX_BUDGET,
) -> Side:
    """Exact winner of a fixed-start game by memoized game-tree search.

    ``native_cr=True`` plays the classic rules directly on the spec's graph
    (variant must be the classic one); otherwise the spec is lowered to the
    protection rules first.
    """
    est = estimate_states(spec.graph.vertex_count, spec.n_cops)
    if est > state_budget:
        raise InfeasibleError(
            f"estimated {est} states exceeds minimax budget {state_budget}"
        )
    root = start_position(spec)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, est + 1000))
    try:
        if native_cr:
            if spec.variant is not Variant.CR:
                raise ValueError("native_cr oracle expects a classic-variant spec")
            win = _search_native_cr(spec, root)
        else:
            win = _search_crp(lower_spec(spec), root)
    finally:
        sys.setrecursionlimit(limit)
    return Side.COPS if win else Side.ROBBER


__all__ = ["minimax_winner", "DEFAULT_MINIMAX_BUDGET"]
