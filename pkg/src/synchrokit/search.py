"""Exact synchronization searches over the subset space.

Up to :data:`DIRECT_MAX_STATES` states the searches run in the kernels of
:mod:`synchrokit.kernels` with direct-indexed visited tables; above that (and
up to :data:`SEARCH_MAX_STATES`) a dictionary-backed BFS in plain Python is
used.  Every search takes an optional ``backend`` (``"numba"``, ``"numpy"``
or ``"python"``) to force one implementation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .automaton import Dfa, StateSet, Word, image_mask, preimage_mask
from .errors import (
    DomainError,
    NotExtensibleError,
    NotSynchronizingError,
    ParameterError,
    SizeError,
)

DIRECT_MAX_STATES = 25
SEARCH_MAX_STATES = 64


@dataclass(frozen=True)
class RtResult:
    threshold: int
    witness: Word
    q0: int


@dataclass(frozen=True)
class LevelProfile:
    q0: int
    widths: Tuple[int, ...]
    depth_to_full: Optional[int]

    @property
    def max_width(self) -> int:
        return max(self.widths)


def _check_size(dfa: Dfa, limit: int = SEARCH_MAX_STATES) -> None:
    if dfa.n > limit:
        raise SizeError(f"subset search supports n <= {limit}, got n={dfa.n}")


def _pick(dfa: Dfa, backend: Optional[str]) -> str:
    if backend is None:
        return kernels.BACKEND if dfa.n <= DIRECT_MAX_STATES else "python"
    if backend not in ("numba", "numpy", "python"):
        raise ParameterError(f"unknown backend {backend!r}")
    if backend != "python" and dfa.n > DIRECT_MAX_STATES:
        raise SizeError(f"kernel backends support n <= {DIRECT_MAX_STATES}, got n={dfa.n}")
    return backend


def _image_maps(dfa: Dfa) -> np.ndarray:
    return np.left_shift(np.int64(1), dfa.delta_table.T).astype(np.int64)


def _kernel_search(dfa, backend, maps, starts, lo, hi):
    """Run ``subset_bfs`` and return ``(end, path)``; ``path`` lists the letters
    from the goal back to its start."""
    fam = kernels.get(backend)
    tab = fam.chunk_table(maps, dfa.n)
    end, parent, via = fam.subset_bfs(tab, dfa.n, np.asarray(starts, dtype=np.int64), lo, hi)
    end = int(end)
    if end < 0:
        return None, None, None
    path = []
    cur = end
    while parent[cur] != cur:
        path.append(int(via[cur]))
        cur = int(parent[cur])
    return end, path, cur


def _dict_search(dfa, step, starts, lo, hi):
    parent = {}
    queue = deque()

    def done(m):
        return lo <= bin(m).count("1") <= hi

    for s in starts:
        if s in parent:
            continue
        parent[s] = None
        if done(s):
            return s, [], s
        queue.append(s)
    while queue:
        cur = queue.popleft()
        for a in range(dfa.k):
            nxt = step(dfa, cur, a)
            if nxt == 0 or nxt in parent:
                continue
            parent[nxt] = (cur, a)
            if done(nxt):
                path = []
                m = nxt
                while parent[m] is not None:
                    m, letter = parent[m]
                    path.append(letter)
                return nxt, path, m
            queue.append(nxt)
    return None, None, None


def is_synchronizing(dfa: Dfa, backend: Optional[str] = None) -> bool:
    """Pair-graph test: every pair of states is merged by some word."""
    _check_size(dfa)
    if dfa.n == 1:
        return True
    fam = kernels.get(None if backend in (None, "python") else backend)
    delta = dfa.delta_table
    order = np.argsort(delta, axis=0, kind="stable").T.copy()
    starts = np.empty((dfa.k, dfa.n + 1), np.int64)
    for a in range(dfa.k):
        starts[a] = np.searchsorted(delta[order[a], a], np.arange(dfa.n + 1))
    return bool(fam.pair_synchronizing(delta, order, starts))


def reset_threshold_exact(dfa: Dfa, backend: Optional[str] = None) -> RtResult:
    """Shortest reset word by forward BFS over images of the full set.

    Letters are tried in declared order, so the witness is deterministic.
    """
    _check_size(dfa)
    backend = _pick(dfa, backend)
    full = dfa.full_mask
    if backend == "python":
        end, path, _ = _dict_search(dfa, image_mask, [full], 1, 1)
    else:
        end, path, _ = _kernel_search(dfa, backend, _image_maps(dfa), [full], 1, 1)
    if end is None:
        raise NotSynchronizingError("automaton is not synchronizing")
    return RtResult(len(path), tuple(reversed(path)), end.bit_length() - 1)


def reset_threshold_backward(dfa: Dfa, backend: Optional[str] = None) -> RtResult:
    """Shortest reset word by BFS over preimages, from all singletons at once."""
    _check_size(dfa)
    backend = _pick(dfa, backend)
    starts = [1 << q for q in range(dfa.n)]
    if backend == "python":
        end, path, root = _dict_search(dfa, preimage_mask, starts, dfa.n, dfa.n)
    else:
        end, path, root = _kernel_search(dfa, backend, dfa.pre_table, starts, dfa.n, dfa.n)
    if end is None:
        raise NotSynchronizingError("automaton is not synchronizing")
    return RtResult(len(path), tuple(path), root.bit_length() - 1)


def shortest_extending_word(dfa: Dfa, s, backend: Optional[str] = None) -> Word:
    """A shortest word ``w`` with ``|s . w^-1| > |s|``.

    Searches the preimage space breadth-first from ``s``; intermediate sets
    may be smaller than ``s``.
    """
    _check_size(dfa)
    mask = dfa.as_mask(s)
    if mask == 0 or mask == dfa.full_mask:
        raise DomainError("extending words are defined for proper nonempty subsets")
    backend = _pick(dfa, backend)
    size = bin(mask).count("1")
    if backend == "python":
        end, path, _ = _dict_search(dfa, preimage_mask, [mask], size + 1, dfa.n)
    else:
        end, path, _ = _kernel_search(dfa, backend, dfa.pre_table, [mask], size + 1, dfa.n)
    if end is None:
        raise NotExtensibleError(f"no word extends {StateSet(dfa.n, mask)!r}")
    return tuple(path)


def backward_level_profile(
    dfa: Dfa, q0: int, max_depth: int, backend: Optional[str] = None
) -> LevelProfile:
    """Number of distinct nonempty subsets at each backward BFS distance from ``{q0}``."""
    _check_size(dfa, DIRECT_MAX_STATES)
    q0 = dfa.check_state(q0)
    if max_depth < 0:
        raise ParameterError("max_depth must be non-negative")
    fam = kernels.get(None if backend in (None, "python") else backend)
    tab = fam.chunk_table(dfa.pre_table, dfa.n)
    widths, depth = fam.level_widths(tab, dfa.n, 1 << q0, int(max_depth))
    depth = int(depth)
    return LevelProfile(q0, tuple(int(x) for x in widths), depth if depth >= 0 else None)
