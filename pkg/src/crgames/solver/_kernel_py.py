"""Pure-Python backward-induction kernel (fallback twin of the compiled one).

Computes the least fixed point of positions from which the pursuers force a
capture, optionally restricted to the subspace reachable from a fixed start.
Successor enumeration runs forward (BFS over reachable states); the fixed
point runs backward with on-the-fly predecessor enumeration, so the
transition relation is never stored. Rank = BFS layer at which a state
entered the winning set; pursuer layers strictly decrease along extracted
play, guaranteeing progress to capture.

Status codes: 0 unseen, 1 reachable, 2 winning-for-pursuers.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

KERNEL_NAME = "python"

UNSEEN, REACHED, WIN = 0, 1, 2


def solve_attractor(cg, mode_full: bool, start_crank: int, start_robber: int, start_c2m: bool):
    V, n = cg.V, cg.n
    nbhd = cg.nbhd
    unprot = cg.unprot
    S = cg.states_per_side
    crank_of = cg.crank
    unrank_cache: dict[int, tuple[int, ...]] = {}

    def unrank(rank: int) -> tuple[int, ...]:
        cops = unrank_cache.get(rank)
        if cops is None:
            cops = cg.unrank(rank)
            unrank_cache[rank] = cops
        return cops

    status_c2m = bytearray(S)
    status_r2m = bytearray(S)
    rank_c2m = np.full(S, -1, dtype=np.int32)
    rank_r2m = np.full(S, -1, dtype=np.int32)
    dec_r2m = np.zeros(S, dtype=np.int32)  # decrements toward closed-degree of robber
    seeds: deque[int] = deque()  # c2m state indices with an immediate capture

    def threatened(cops, r) -> bool:
        contacts = unprot[r]
        return any(c in contacts for c in cops)

    if mode_full:
        for crank in range(cg.n_multisets):
            cops = cg.unrank(crank)
            base = crank * V
            for r in range(V):
                if threatened(cops, r):
                    status_c2m[base + r] = WIN
                    rank_c2m[base + r] = 0
                    seeds.append(base + r)
                else:
                    status_c2m[base + r] = REACHED
                status_r2m[base + r] = REACHED
    else:
        start = start_crank * V + start_robber
        queue: deque[tuple[int, bool]] = deque()
        if start_c2m:
            if threatened(unrank(start_crank), start_robber):
                status_c2m[start] = WIN
                rank_c2m[start] = 0
                seeds.append(start)
            else:
                status_c2m[start] = REACHED
                queue.append((start, True))
        else:
            status_r2m[start] = REACHED
            queue.append((start, False))
        while queue:
            s, c2m = queue.popleft()
            crank, r = divmod(s, V)
            cops = unrank(crank)
            if c2m:
                for combo in itertools.product(*(nbhd[c] for c in cops)):
                    s2 = crank_of(combo) * V + r
                    if status_r2m[s2] == UNSEEN:
                        status_r2m[s2] = REACHED
                        queue.append((s2, False))
            else:
                base = crank * V
                for u in nbhd[r]:
                    s2 = base + u
                    if status_c2m[s2] == UNSEEN:
                        if threatened(cops, u):
                            status_c2m[s2] = WIN
                            rank_c2m[s2] = 0
                            seeds.append(s2)
                        else:
                            status_c2m[s2] = REACHED
                            queue.append((s2, True))

    # Backward propagation from the capture seeds.
    n_seeds = len(seeds)
    back: deque[tuple[int, bool]] = deque((s, True) for s in seeds)
    while back:
        s, c2m = back.popleft()
        crank, r = divmod(s, V)
        cops = unrank(crank)
        if c2m:
            layer = rank_c2m[s] + 1
            base = crank * V
            for u in nbhd[r]:
                s2 = base + u
                if status_r2m[s2] == REACHED:
                    dec_r2m[s2] += 1
                    if dec_r2m[s2] == len(nbhd[u]):
                        status_r2m[s2] = WIN
                        rank_r2m[s2] = layer
                        back.append((s2, False))
        else:
            layer = rank_r2m[s] + 1
            for combo in itertools.product(*(nbhd[c] for c in cops)):
                s2 = crank_of(combo) * V + r
                if status_c2m[s2] == REACHED:
                    status_c2m[s2] = WIN
                    rank_c2m[s2] = layer
                    back.append((s2, True))

    sc = np.frombuffer(bytes(status_c2m), dtype=np.uint8)
    sr = np.frombuffer(bytes(status_r2m), dtype=np.uint8)
    stats = {
        "kernel": KERNEL_NAME,
        "mode": "full" if mode_full else "reachable",
        "states_c2m": int(np.count_nonzero(sc)),
        "states_r2m": int(np.count_nonzero(sr)),
        "win_c2m": int(np.count_nonzero(sc == WIN)),
        "win_r2m": int(np.count_nonzero(sr == WIN)),
        "seeds": n_seeds,
        "layers": int(max(rank_c2m.max(), rank_r2m.max())) + 1,
    }
    return sc, sr, rank_c2m, rank_r2m, stats
