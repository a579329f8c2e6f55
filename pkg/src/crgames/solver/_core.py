"""Flattening of a game spec into kernel-ready arrays, plus kernel dispatch.

Positions are ranked into dense indices: the sorted cop multiset gets its
colexicographic multiset rank, and a state index is ``crank * V + robber``
with the side to move kept in separate per-parity arrays. The backward
induction kernel exists twice with identical semantics: a compiled Cython
extension for speed and a pure-Python fallback selected at import time
(force the fallback with ``CRGAMES_PURE_PYTHON=1``).
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from ..graphs import LabelledGraph

#: Hard cap on cops the kernels accept; state counts explode far earlier.
MAX_KERNEL_COPS = 16

#: Default feasibility cap on position-space keys (see also CRGAMES_STATE_BUDGET).
DEFAULT_STATE_BUDGET = 500_000_000


class InfeasibleError(RuntimeError):
    """Instance exceeds the configured state budget; no winner is guessed."""


@lru_cache(maxsize=None)
def _binom_rows(nmax: int, kmax: int) -> tuple[tuple[int, ...], ...]:
    rows = []
    for a in range(nmax + 1):
        row = [1]
        for b in range(1, kmax + 1):
            row.append(rows[a - 1][b - 1] + rows[a - 1][b] if a else 0)
        rows.append(tuple(row))
    return tuple(rows)


def multiset_count(V: int, n: int) -> int:
    """Number of n-multisets over V vertices: C(V+n-1, n)."""
    return _binom_rows(V + n, n)[V + n - 1][n]


def estimate_states(V: int, n: int) -> int:
    """Full position-space key count: C(V+n-1, n) * V * 2."""
    return multiset_count(V, n) * V * 2


def state_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get("CRGAMES_STATE_BUDGET")
    return int(env) if env else DEFAULT_STATE_BUDGET


class CompiledGame:
    """Immutable flat-array view of (graph, n_cops) shared by both kernels."""

    def __init__(self, graph: LabelledGraph, n_cops: int) -> None:
        if not (1 <= n_cops <= MAX_KERNEL_COPS):
            raise InfeasibleError(f"kernels support 1..{MAX_KERNEL_COPS} cops, got {n_cops}")
        V = graph.vertex_count
        self.graph = graph
        self.V = V
        self.n = n_cops

        # Closed neighborhoods, sorted unique: a token's one-move destinations.
        nbhd = []
        for v in graph.vertices():
            dests = {v}
            dests.update(u for u, _ in graph.neighbors(v))
            nbhd.append(tuple(sorted(dests)))
        self.nbhd = tuple(nbhd)
        self.nbhd_indptr = np.zeros(V + 1, dtype=np.int32)
        for v in range(V):
            self.nbhd_indptr[v + 1] = self.nbhd_indptr[v] + len(nbhd[v])
        self.nbhd_indices = np.fromiter(
            (u for row in nbhd for u in row), dtype=np.int32, count=int(self.nbhd_indptr[-1])
        )

        # Unprotected contacts as bit rows: bit c of row r set iff a cop at c
        # can capture a robber at r this move.
        self.unprot = tuple(graph.unprotected_contacts(v) for v in graph.vertices())
        self.words = (V + 63) // 64
        masks = np.zeros((V, self.words), dtype=np.uint64)
        for r in range(V):
            for c in self.unprot[r]:
                masks[r, c >> 6] |= np.uint64(1) << np.uint64(c & 63)
        self.unprot_words = masks

        rows = _binom_rows(V + n_cops, n_cops)
        self.binom = rows
        self.binom_arr = np.array(rows, dtype=np.int64)
        self.n_multisets = multiset_count(V, n_cops)
        self.states_per_side = self.n_multisets * V

    def crank(self, cops) -> int:
        """Colex rank of a sorted cop multiset."""
        rank = 0
        for i, c in enumerate(sorted(cops)):
            rank += self.binom[c + i][i + 1]
        return rank

    def unrank(self, rank: int) -> tuple[int, ...]:
        """Inverse of crank."""
        out = [0] * self.n
        rem = rank
        for i in range(self.n, 0, -1):
            d = i - 1
            while self.binom[d + 1][i] <= rem:
                d += 1
            rem -= self.binom[d][i]
            out[i - 1] = d - (i - 1)
        return tuple(out)

    def threatened(self, cops, r: int) -> bool:
        contacts = self.unprot[r]
        return any(c in contacts for c in cops)


def select_kernel(force_python: bool | None = None):
    """Import-time kernel selection: compiled extension, else pure Python."""
    if force_python is None:
        force_python = bool(os.environ.get("CRGAMES_PURE_PYTHON"))
    if not force_python:
        try:
            from . import _kernel_cy

            return _kernel_cy
        except ImportError:
            pass
    from . import _kernel_py

    return _kernel_py
