"""Word-level checks driven by backward tracing.

Everything here follows the chain of preimages of a singleton ``{q0}`` under
the suffixes of a word, ``P_i = {q0} . (suffix of length i)^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from .automaton import (
    Dfa,
    StateSet,
    Word,
    apply_word,
    apply_word_inverse,
    classify_letter,
    preimage_mask,
)
from .errors import DomainError, InvalidLetterError
from .series import AM_LETTERS


@dataclass(frozen=True)
class TraceRow:
    suffix_len: int
    subset: StateSet
    extender_letters: FrozenSet[int]


@dataclass(frozen=True)
class PreimageChain:
    q0: int
    rows: Tuple[TraceRow, ...]

    def subsets(self) -> list:
        return [row.subset for row in self.rows]

    def to_dict(self, dfa: Optional[Dfa] = None) -> dict:
        def letter(a):
            return dfa.letters[a] if dfa is not None else a

        return {
            "q0": self.q0,
            "rows": [
                {
                    "suffix_len": r.suffix_len,
                    "subset": r.subset.to_list(),
                    "extenders": [letter(a) for a in sorted(r.extender_letters)],
                }
                for r in self.rows
            ],
        }


def verify_reset(dfa: Dfa, word: Iterable) -> Optional[int]:
    """The state ``q0`` with ``Q . word = {q0}``, or ``None`` if ``word`` does not reset."""
    final = apply_word(dfa, StateSet.full(dfa.n), word)
    if len(final) == 1:
        return next(iter(final))
    return None


def _chain_masks(dfa: Dfa, word: Word, q0: int) -> list:
    masks = [1 << q0]
    for a in reversed(word):
        masks.append(preimage_mask(dfa, masks[-1], a))
    return masks


def _extenders(dfa: Dfa, mask: int) -> FrozenSet[int]:
    size = bin(mask).count("1")
    return frozenset(
        a for a in range(dfa.k) if bin(preimage_mask(dfa, mask, a)).count("1") > size
    )


def preimage_chain(dfa: Dfa, word: Iterable, q0: int) -> PreimageChain:
    word = dfa.check_word(word)
    q0 = dfa.check_state(q0)
    rows = tuple(
        TraceRow(i, StateSet(dfa.n, m), _extenders(dfa, m))
        for i, m in enumerate(_chain_masks(dfa, word, q0))
    )
    return PreimageChain(q0, rows)


def is_straight(dfa: Dfa, word: Iterable, q0: int) -> bool:
    """No later preimage in the chain is contained in an earlier one.

    Only nonempty middle factors count: ``P_j`` is compared with ``P_i`` for
    ``i < j``, and equality is a violation.
    """
    word = dfa.check_word(word)
    masks = _chain_masks(dfa, word, dfa.check_state(q0))
    for j in range(1, len(masks)):
        pj = masks[j]
        for i in range(j):
            if pj & ~masks[i] == 0:
                return False
    return True


def is_greedy(dfa: Dfa, word: Iterable, q0: int) -> bool:
    """Whenever some letter extends ``{q0} . v^-1`` for a proper suffix ``v``,
    the letter preceding ``v`` in ``word`` extends it too."""
    word = dfa.check_word(word)
    masks = _chain_masks(dfa, word, dfa.check_state(q0))
    L = len(word)
    for i in range(L):
        ext = _extenders(dfa, masks[i])
        if ext and word[L - 1 - i] not in ext:
            return False
    return True


def involutory_reversal_holds(dfa: Dfa, s, word: Iterable) -> bool:
    """Compare ``s . w^-1`` with ``s . w^R`` for a word of involutory letters.

    Always true; exposed as a test oracle.  Raises ``DomainError`` if a
    letter of ``word`` is not involutory.
    """
    word = dfa.check_word(word)
    for a in set(word):
        if not classify_letter(dfa, a).involutory:
            raise DomainError(f"letter {dfa.letters[a]!r} is not involutory")
    return apply_word_inverse(dfa, s, word) == apply_word(dfa, s, word[::-1])


@dataclass(frozen=True)
class FactorReport:
    factors: dict = field(default_factory=dict)
    last_letter: Optional[str] = None

    @property
    def clean(self) -> bool:
        return not any(self.factors.values())

    def to_dict(self) -> dict:
        return {**self.factors, "ends_with": self.last_letter}


def forbidden_factor_check(
    word: Iterable, dfa: Dfa, names: Sequence[str] = AM_LETTERS
) -> FactorReport:
    """Report which of the factors ``aa``, ``bb``, ``w0 b``, ``w1 b`` occur.

    ``names`` gives the letter names playing alpha, beta, omega0, omega1.
    """
    try:
        alpha, beta, omega0, omega1 = (dfa.letter_index(x) for x in names)
    except InvalidLetterError as exc:
        raise InvalidLetterError(f"factor check needs letters {list(names)}: {exc}") from None
    word = dfa.check_word(word)
    pairs = set(zip(word, word[1:]))
    watched = {
        names[0] + names[0]: (alpha, alpha),
        names[1] + names[1]: (beta, beta),
        names[2] + names[1]: (omega0, beta),
        names[3] + names[1]: (omega1, beta),
    }
    factors = {key: pair in pairs for key, pair in watched.items()}
    return FactorReport(factors, dfa.letters[word[-1]] if word else None)
