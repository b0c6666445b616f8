"""Complete DFAs and the subset algebra used by every search.

States are ``0..n-1`` and letters are indexed ``0..k-1`` in declared order.
Subsets of states are carried as Python integers used as bit vectors, wrapped
in :class:`StateSet` at the public surface.  Words are tuples of letter
indices.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Sequence, Set
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidLetterError, InvalidStateError, ParameterError

Word = Tuple[int, ...]

# one int64 per subset in the kernels; bit 63 is the sign bit
KERNEL_MAX_STATES = 62


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class StateSet(Set):
    """Immutable subset of ``{0, ..., n-1}`` backed by a bit mask.

    Behaves as a ``collections.abc.Set``: it compares equal to any set with
    the same members and hashes like the equivalent ``frozenset``.
    """

    __slots__ = ("n", "mask")

    def __init__(self, n: int, mask: int = 0):
        if n < 0:
            raise ParameterError(f"universe size must be non-negative, got {n}")
        if mask < 0 or mask >> n:
            raise InvalidStateError(f"mask {mask:#x} has states outside 0..{n - 1}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("StateSet is immutable")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "StateSet":
        mask = 0
        for q in members:
            q = int(q)
            if not 0 <= q < n:
                raise InvalidStateError(f"state {q} outside 0..{n - 1}")
            mask |= 1 << q
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "StateSet":
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "StateSet":
        return cls(n, 0)

    def _from_iterable(self, it):
        return StateSet.of(self.n, it)

    def __contains__(self, q) -> bool:
        return isinstance(q, (int, np.integer)) and 0 <= q < self.n and bool(self.mask >> int(q) & 1)

    def __iter__(self):
        return _iter_bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __eq__(self, other):
        if isinstance(other, StateSet):
            return self.mask == other.mask
        return Set.__eq__(self, other)

    def __hash__(self):
        return self._hash()

    def __le__(self, other):
        if isinstance(other, StateSet):
            return self.mask & ~other.mask == 0
        return Set.__le__(self, other)

    def __lt__(self, other):
        if isinstance(other, StateSet):
            return self.mask != other.mask and self.mask & ~other.mask == 0
        return Set.__lt__(self, other)

    def __and__(self, other):
        if isinstance(other, StateSet):
            return StateSet(max(self.n, other.n), self.mask & other.mask)
        return Set.__and__(self, other)

    def __or__(self, other):
        if isinstance(other, StateSet):
            return StateSet(max(self.n, other.n), self.mask | other.mask)
        return Set.__or__(self, other)

    def __sub__(self, other):
        if isinstance(other, StateSet):
            return StateSet(self.n, self.mask & ~other.mask)
        return Set.__sub__(self, other)

    def __repr__(self):
        return f"StateSet({self.n}, {{{', '.join(map(str, self))}}})"

    def to_list(self) -> list:
        return list(self)


def _default_letter_names(k: int) -> Tuple[str, ...]:
    if k <= 26:
        return tuple(chr(ord("a") + i) for i in range(k))
    return tuple(f"x{i}" for i in range(k))


class Dfa:
    """A complete deterministic automaton ``(Q, Sigma, delta)``.

    Parameters
    ----------
    delta : array_like of shape (n, k)
        ``delta[q][a]`` is the successor of state ``q`` under letter ``a``.
    letters : sequence of str, optional
        Unique nonempty letter names; defaults to ``a, b, c, ...``.

    The transition table is stored as a read-only ``int64`` array.  Per-letter
    preimage masks (state -> bit mask of predecessors) are built here once,
    since backward searches query them constantly.
    """

    __slots__ = ("n", "k", "letters", "delta", "_cols", "_pre", "__dict__")

    def __init__(self, delta, letters: Optional[Sequence[str]] = None):
        table = np.array(delta, dtype=np.int64)
        if table.ndim != 2:
            raise ParameterError("delta must be a 2-D table of shape (n, k)")
        n, k = table.shape
        if n < 1 or k < 1:
            raise ParameterError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
        if table.min() < 0 or table.max() >= n:
            raise ParameterError("every transition target must lie in 0..n-1")
        if letters is None:
            names = _default_letter_names(k)
        else:
            names = tuple(str(x) for x in letters)
        if len(names) != k:
            raise ParameterError(f"{len(names)} letter names for {k} letters")
        if any(not name or any(c.isspace() for c in name) for name in names):
            raise ParameterError("letter names must be nonempty and contain no whitespace")
        if len(set(names)) != k:
            raise ParameterError("letter names must be unique")
        table.setflags(write=False)
        self.n = n
        self.k = k
        self.letters = names
        self.delta = table
        self._cols = tuple(tuple(int(x) for x in table[:, a]) for a in range(k))
        pre = [[0] * n for _ in range(k)]
        for a in range(k):
            col = self._cols[a]
            for q in range(n):
                pre[a][col[q]] |= 1 << q
        self._pre = tuple(tuple(row) for row in pre)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Dfa):
            return NotImplemented
        return self.letters == other.letters and np.array_equal(self.delta, other.delta)

    def __hash__(self):
        return hash((self.letters, self.delta.tobytes()))

    def __repr__(self):
        return f"Dfa(n={self.n}, letters={list(self.letters)})"

    # -- tables -----------------------------------------------------------

    def successor(self, q: int, a: int) -> int:
        return self._cols[a][q]

    def preimage_mask(self, a: int, q: int) -> int:
        """Bit mask of all states mapped to ``q`` by letter ``a``."""
        return self._pre[a][q]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def pre_table(self) -> np.ndarray:
        """``(k, n)`` int64 array of preimage masks, for the search kernels."""
        if self.n > KERNEL_MAX_STATES:
            raise ParameterError(f"kernel tables support n <= {KERNEL_MAX_STATES}")
        return np.array(self._pre, dtype=np.int64).reshape(self.k, self.n)

    @cached_property
    def delta_table(self) -> np.ndarray:
        """Contiguous ``(n, k)`` int64 copy of the transition table."""
        return np.ascontiguousarray(self.delta, dtype=np.int64)

    def letter_index(self, name: str) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise InvalidLetterError(f"unknown letter {name!r}") from None

    def check_letter(self, a) -> int:
        if isinstance(a, str):
            return self.letter_index(a)
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.k:
            raise InvalidLetterError(f"letter index {a!r} outside 0..{self.k - 1}")
        return int(a)

    def check_word(self, word: Iterable) -> Word:
        return tuple(self.check_letter(a) for a in word)

    def check_state(self, q) -> int:
        if not isinstance(q, (int, np.integer)) or not 0 <= q < self.n:
            raise InvalidStateError(f"state {q!r} outside 0..{self.n - 1}")
        return int(q)

    def states(self, members: Iterable[int] = ()) -> StateSet:
        return StateSet.of(self.n, members)

    def as_mask(self, s) -> int:
        if isinstance(s, StateSet):
            if s.mask >> self.n:
                raise InvalidStateError(f"{s!r} has states outside 0..{self.n - 1}")
            return s.mask
        return StateSet.of(self.n, s).mask

    def relabel(self, state_perm: Sequence[int], letter_perm: Optional[Sequence[int]] = None) -> "Dfa":
        """Isomorphic copy where state ``q`` becomes ``state_perm[q]`` and letter
        ``a`` becomes ``letter_perm[a]`` (names travel with their letters)."""
        pi = np.asarray(state_perm, dtype=np.int64)
        sigma = np.arange(self.k) if letter_perm is None else np.asarray(letter_perm, dtype=np.int64)
        if sorted(pi.tolist()) != list(range(self.n)) or sorted(sigma.tolist()) != list(range(self.k)):
            raise ParameterError("relabeling maps must be permutations")
        new = np.empty_like(self.delta)
        new[pi[:, None], sigma[None, :]] = pi[self.delta]
        names = [""] * self.k
        for a, b in enumerate(sigma.tolist()):
            names[b] = self.letters[a]
        return Dfa(new, names)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"n": self.n, "letters": list(self.letters), "delta": self.delta.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Dfa":
        try:
            n = data["n"]
            letters = data["letters"]
            delta = data["delta"]
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"DFA object lacks field {exc}") from None
        if not isinstance(n, int) or len(delta) != n:
            raise ParameterError("field 'n' must equal the number of delta rows")
        if any(len(row) != len(letters) for row in delta):
            raise ParameterError("every delta row needs one entry per letter")
        if not all(isinstance(x, int) and not isinstance(x, bool) for row in delta for x in row):
            raise ParameterError("delta entries must be integers")
        return cls(delta, letters)

    @classmethod
    def from_json(cls, text: str) -> "Dfa":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")

    @classmethod
    def load(cls, path) -> "Dfa":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def parse_word(dfa: Dfa, text: str, compact: bool = False) -> Word:
    """Parse whitespace-separated letter names.

    With ``compact=True`` and single-character names, ``"abba"`` is accepted.
    """
    if compact:
        if any(len(name) != 1 for name in dfa.letters):
            raise ParameterError("compact words need single-character letter names")
        tokens = [c for c in text if not c.isspace()]
    else:
        tokens = text.split()
    return tuple(dfa.letter_index(tok) for tok in tokens)


def format_word(dfa: Dfa, word: Iterable[int]) -> str:
    return " ".join(dfa.letters[a] for a in word)


# -- subset algebra --------------------------------------------------------

def image_mask(dfa: Dfa, mask: int, a: int) -> int:
    col = dfa._cols[a]
    out = 0
    for q in _iter_bits(mask):
        out |= 1 << col[q]
    return out


def preimage_mask(dfa: Dfa, mask: int, a: int) -> int:
    pre = dfa._pre[a]
    out = 0
    for q in _iter_bits(mask):
        out |= pre[q]
    return out


def image(dfa: Dfa, s, a) -> StateSet:
    """``{delta(q, a) : q in s}``."""
    a = dfa.check_letter(a)
    return StateSet(dfa.n, image_mask(dfa, dfa.as_mask(s), a))


def preimage(dfa: Dfa, s, a) -> StateSet:
    """``{q : delta(q, a) in s}``; may be empty."""
    a = dfa.check_letter(a)
    return StateSet(dfa.n, preimage_mask(dfa, dfa.as_mask(s), a))


def apply_word(dfa: Dfa, s, word: Iterable) -> StateSet:
    """Image of ``s`` under ``word``, letters applied left to right."""
    mask = dfa.as_mask(s)
    for a in dfa.check_word(word):
        mask = image_mask(dfa, mask, a)
    return StateSet(dfa.n, mask)


def apply_word_inverse(dfa: Dfa, s, word: Iterable) -> StateSet:
    """Preimage ``s . word^-1``: the states that ``word`` maps into ``s``.

    ``s . (xv)^-1 = (s . v^-1) . x^-1``, so letters are consumed right to left.
    """
    mask = dfa.as_mask(s)
    for a in reversed(dfa.check_word(word)):
        mask = preimage_mask(dfa, mask, a)
    return StateSet(dfa.n, mask)


def is_extensible(dfa: Dfa, s, a) -> bool:
    """True iff letter ``a`` extends ``s``, i.e. ``|s . a^-1| > |s|``."""
    a = dfa.check_letter(a)
    mask = dfa.as_mask(s)
    return bin(preimage_mask(dfa, mask, a)).count("1") > bin(mask).count("1")


@dataclass(frozen=True)
class LetterProfile:
    permutational: bool
    involutory: bool
    unitary: bool
    moved_state: Optional[Tuple[int, int]] = None


def classify_letter(dfa: Dfa, a) -> LetterProfile:
    a = dfa.check_letter(a)
    col = dfa._cols[a]
    permutational = len(set(col)) == dfa.n
    involutory = all(col[col[q]] == q for q in range(dfa.n))
    moved = [q for q in range(dfa.n) if col[q] != q]
    if len(moved) == 1:
        p = moved[0]
        return LetterProfile(permutational, involutory, True, (p, col[p]))
    return LetterProfile(permutational, involutory, False)


def _reach(adj: Sequence[int], start: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for q in _iter_bits(frontier):
            nxt |= adj[q]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def is_strongly_connected(dfa: Dfa) -> bool:
    """Strong connectivity of the support digraph, via forward and backward
    reachability from state 0."""
    succ = [0] * dfa.n
    pred = [0] * dfa.n
    for q in range(dfa.n):
        for a in range(dfa.k):
            r = dfa._cols[a][q]
            succ[q] |= 1 << r
            pred[r] |= 1 << q
    full = dfa.full_mask
    return _reach(succ, 0) == full and _reach(pred, 0) == full


def in_degrees(dfa: Dfa) -> np.ndarray:
    """In-degree of every state, counting parallel edges."""
    return np.bincount(dfa.delta.ravel(), minlength=dfa.n)


def is_eulerian(dfa: Dfa) -> bool:
    return bool(np.all(in_degrees(dfa) == dfa.k)) and is_strongly_connected(dfa)
