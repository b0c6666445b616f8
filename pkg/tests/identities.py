"""Mechanical checks of the structural identities of the series A_m.

Each checker returns a list of human-readable failures (empty on success) so
that both the unit tests and the acceptance gate can reuse it.
"""
import itertools

import numpy as np

from synchrokit import (
    StateSet,
    apply_word,
    apply_word_inverse,
    build_am,
    build_t,
    build_v,
    build_w,
    involutory_reversal_holds,
    is_extensible,
    subset_family,
)
from synchrokit.series import ALPHA, BETA, OMEGA0, OMEGA1


def _n(m):
    return 4 * m + 1


def _odd(upto):
    return range(1, upto, 2)


def check_reversal(m, samples=1000, exhaustive_len=6, seed=0, subsets_per_word=64):
    """S.w^-1 == S.w^R for words over the involutory letters."""
    dfa = build_am(m)
    N = dfa.n
    rng = np.random.default_rng(seed + m)
    fails = []
    if N <= 5:
        subset_pool = [StateSet(N, mask) for mask in range(1 << N)]
    else:
        subset_pool = [StateSet(N, int(x)) for x in rng.integers(0, 1 << N, subsets_per_word)]
    for length in range(exhaustive_len + 1):
        for word in itertools.product((ALPHA, BETA), repeat=length):
            for s in subset_pool:
                if not involutory_reversal_holds(dfa, s, word):
                    fails.append(f"m={m} S={s!r} w={word}")
    for _ in range(samples):
        s = StateSet(N, int(rng.integers(0, 1 << N)))
        word = tuple(int(x) for x in rng.choice((ALPHA, BETA), size=int(rng.integers(0, 25))))
        if not involutory_reversal_holds(dfa, s, word):
            fails.append(f"m={m} S={s!r} w={word}")
    return fails


def check_explicit_translations(m):
    """q.(beta alpha)^h = q - 2h and q.t_i = -q - i (mod N)."""
    dfa = build_am(m)
    N = dfa.n
    fails = []
    for q in range(N):
        for h in range(N + 1):
            got = apply_word(dfa, [q], (BETA, ALPHA) * h)
            if got != {(q - 2 * h) % N}:
                fails.append(f"m={m} q={q} (ba)^{h} -> {sorted(got)}")
        for i in _odd(2 * N + 2):
            got = apply_word(dfa, [q], build_t(i))
            if got != {(-q - i) % N}:
                fails.append(f"m={m} q={q} t_{i} -> {sorted(got)}")
    return fails


def check_cikcak(m):
    """The four image identities of Q_j and R_j under the words t_i."""
    N = _n(m)
    dfa = build_am(m)
    fails = []

    def expect(label, got, want):
        if got != want:
            fails.append(f"m={m} {label}: {sorted(got)} != {sorted(want)}")

    for j in range(2, N - 1):
        if j % 2 == 0:
            t = build_t(N - j)
            expect(f"Q_{j}.t_{N - j}", apply_word(dfa, subset_family(N, "Q", j), t),
                   subset_family(N, "Qd", j + 1))
            expect(f"Q_{j + 1}.t_{N - j}", apply_word(dfa, subset_family(N, "Q", j + 1), t),
                   subset_family(N, "Q", j + 1))
        else:
            t = build_t(j - 2)
            expect(f"R_{j}.t_{j - 2}", apply_word(dfa, subset_family(N, "R", j), t),
                   subset_family(N, "Rd", j + 1))
            expect(f"R_{j + 1}.t_{j - 2}", apply_word(dfa, subset_family(N, "R", j + 1), t),
                   subset_family(N, "R", j + 1))
    return fails


def _suffix_through(N, j):
    """The word v_j beta v_{j-1} beta ... beta v_2."""
    word = ()
    for i in range(j, 1, -1):
        word += build_v(N, i)
        if i > 2:
            word += (BETA,)
    return word


def check_w_analysis(m):
    """Q_2.(v_j beta ... beta v_2)^-1 is Q_{j+1} (j even) or R_{j+1} (j odd)."""
    N = _n(m)
    dfa = build_am(m)
    q2 = subset_family(N, "Q", 2)
    fails = []
    for j in range(2, N):
        got = apply_word_inverse(dfa, q2, _suffix_through(N, j))
        want = subset_family(N, "Q" if j % 2 == 0 else "R", j + 1)
        if got != want:
            fails.append(f"m={m} j={j}: {sorted(got)} != {sorted(want)}")
    if _suffix_through(N, N - 1) != build_w(m):
        fails.append(f"m={m}: w differs from v_(N-1) beta ... beta v_2")
    return fails


def check_no_idle_omega(m):
    """Every unitary letter in w extends the preimage of Q_2 under what follows it."""
    N = _n(m)
    dfa = build_am(m)
    w = build_w(m)
    q2 = subset_family(N, "Q", 2)
    fails = []
    for pos, x in enumerate(w):
        if x not in (OMEGA0, OMEGA1):
            continue
        rest = apply_word_inverse(dfa, q2, w[pos + 1:])
        if not is_extensible(dfa, rest, x):
            fails.append(f"m={m} position {pos}: {dfa.letters[x]} is idle on {sorted(rest)}")
    return fails


def check_w_greedy_sets(m):
    """{0,1} misses Q_j.t_h (j even, h < N-j) and lies in R_j.t_h (j odd, h < j-2)."""
    N = _n(m)
    dfa = build_am(m)
    zero_one = {0, 1}
    fails = []
    count = 0
    for j in range(2, N):
        if j % 2 == 0:
            base = subset_family(N, "Q", j)
            for h in _odd(N - j):
                count += 1
                if zero_one & apply_word(dfa, base, build_t(h)):
                    fails.append(f"m={m} j={j} h={h}: Q_j.t_h meets {{0,1}}")
        else:
            base = subset_family(N, "R", j)
            for h in _odd(j - 2):
                count += 1
                if not zero_one <= apply_word(dfa, base, build_t(h)):
                    fails.append(f"m={m} j={j} h={h}: {{0,1}} not inside R_j.t_h")
    if count == 0:
        fails.append(f"m={m}: no (j, h) pairs checked")
    return fails


ALL_CHECKS = {
    "reversal": check_reversal,
    "explicit translations": check_explicit_translations,
    "cikcak": check_cikcak,
    "analysis of w": check_w_analysis,
    "no idle omega": check_no_idle_omega,
    "w greedy sets": check_w_greedy_sets,
}
