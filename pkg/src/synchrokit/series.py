"""The quaternary Eulerian series ``A_m`` and its reset-word construction.

``A_m`` has ``N = 4m + 1`` states and letters ``a, b, w0, w1`` (alpha, beta,
omega0, omega1, in this order):

* ``q.a = (-q - 1) mod N`` and ``q.b = (-q + 1) mod N`` are involutions;
* ``w0`` sends 1 to 0 and ``w1`` sends 0 to 1, fixing everything else.

The shortest reset word is ``w . w0`` where
``w = v_{N-1} b v_{N-2} b ... b v_3 b v_2``, ``v_j = w1 t_{N-j}`` for even
``j`` and ``v_j = w0 t_{j-2}`` for odd ``j``, and ``t_i = a (b a)^((i-1)/2)``.
Its length is ``(N^2 - 3) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import Dfa, StateSet, Word
from .errors import ParameterError

ALPHA, BETA, OMEGA0, OMEGA1 = 0, 1, 2, 3
AM_LETTERS = ("a", "b", "w0", "w1")


@dataclass(frozen=True)
class SeriesParams:
    m: int

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ParameterError(f"series index m must be a positive integer, got {self.m!r}")

    @property
    def N(self) -> int:
        return 4 * self.m + 1


def _params(m) -> SeriesParams:
    return m if isinstance(m, SeriesParams) else SeriesParams(m)


def build_am(m) -> Dfa:
    N = _params(m).N
    q = np.arange(N)
    delta = np.empty((N, 4), dtype=np.int64)
    delta[:, ALPHA] = (-q - 1) % N
    delta[:, BETA] = (-q + 1) % N
    delta[:, OMEGA0] = q
    delta[1, OMEGA0] = 0
    delta[:, OMEGA1] = q
    delta[0, OMEGA1] = 1
    return Dfa(delta, AM_LETTERS)


def build_t(i: int) -> Word:
    """``t_i = a (b a)^((i-1)/2)`` for odd ``i >= 1``; a palindrome of length ``i``."""
    if not isinstance(i, (int, np.integer)) or i < 1 or i % 2 == 0:
        raise ParameterError(f"t_i needs an odd positive i, got {i!r}")
    return (ALPHA,) + (BETA, ALPHA) * ((i - 1) // 2)


def build_v(N: int, j: int) -> Word:
    if N < 5 or N % 4 != 1:
        raise ParameterError(f"N must be 4m+1 with m >= 1, got {N}")
    if not 2 <= j <= N - 1:
        raise ParameterError(f"v_j needs 2 <= j <= N-1, got j={j}")
    if j % 2 == 0:
        return (OMEGA1,) + build_t(N - j)
    # v_3 = w0 t_1 is the smallest odd case
    return (OMEGA0,) + build_t(j - 2)


def build_w(m) -> Word:
    N = _params(m).N
    word = list(build_v(N, N - 1))
    for j in range(N - 2, 1, -1):
        word.append(BETA)
        word.extend(build_v(N, j))
    return tuple(word)


def build_reset_word(m) -> Word:
    return build_w(m) + (OMEGA0,)


def predicted_rt(m) -> int:
    N = _params(m).N
    return (N * N - 3) // 2


def subset_family(N: int, kind: str, j: int) -> StateSet:
    """The sets ``Q_j``, ``R_j``, ``Q_j<>`` and ``R_j<>`` of ``A_m``.

    ``kind`` is one of ``"Q"``, ``"R"``, ``"Qd"``, ``"Rd"`` (the ``d`` forms
    drop state 0 from ``Q_j`` and state 1 from ``R_j``).  ``Q_j`` is
    ``{0, ..., j-1}`` and ``R_j`` is its image under ``b``.
    """
    if N < 5 or N % 4 != 1:
        raise ParameterError(f"N must be 4m+1 with m >= 1, got {N}")
    if not 0 <= j <= N:
        raise ParameterError(f"family index j must lie in 0..N, got {j}")
    q = set(range(j))
    if kind == "Q":
        members = q
    elif kind == "Qd":
        members = q - {0}
    elif kind == "R":
        members = {(-x + 1) % N for x in q}
    elif kind == "Rd":
        members = {(-x + 1) % N for x in q} - {1}
    else:
        raise ParameterError(f"unknown subset family {kind!r}")
    return StateSet.of(N, members)


def build_cerny(n: int) -> Dfa:
    """Cerny automaton ``C_n`` with reset threshold ``(n-1)^2``.

    Letter ``a`` is the cycle ``q -> q+1 mod n``; letter ``b`` moves only
    state ``n-1`` to ``0``.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ParameterError(f"Cerny automaton needs n >= 2, got {n!r}")
    q = np.arange(n)
    delta = np.stack([(q + 1) % n, q], axis=1)
    delta[n - 1, 1] = 0
    return Dfa(delta, ("a", "b"))


def build_cycle(n: int) -> Dfa:
    """One-letter cyclic permutation; Eulerian and never synchronizing for n >= 2."""
    if n < 1:
        raise ParameterError(f"cycle needs n >= 1, got {n}")
    return Dfa(((np.arange(n) + 1) % n).reshape(n, 1), ("a",))
