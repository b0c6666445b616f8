"""Exhaustive enumeration of small (Eulerian) automata and reset-threshold census.

Transition tables are handled flattened letter-major,
``flat[a * n + q] = delta[q][a]``.  In Eulerian mode the enumerator walks the
multiset permutations of ``{0^k, 1^k, ..., (n-1)^k}``, i.e. exactly the
tables where every state has in-degree ``k``, and then keeps the strongly
connected ones.  Isomorphism covers state and letter relabelings; the
canonical representative is the lexicographically smallest flattened table.

Work is split into shards by the first entries of the first letter's column.
Shards are independent, and merging (sums, max, sorted unions) does not
depend on the order in which they finish.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import kernels
from .automaton import Dfa
from .errors import BudgetExceededError, ParameterError, SizeError

DEFAULT_BUDGET = 10**9
CANONICAL_MAX_STATES = 8
SHARD_DEPTH = 2

Table = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class CensusSpec:
    n: int
    k: int
    eulerian_only: bool = True
    up_to_iso: bool = True
    bound_to_check: Optional[int] = None

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ParameterError(f"census needs n >= 1 and k >= 1, got n={self.n}, k={self.k}")

    def table_count(self) -> int:
        """Tables the enumerator scans before any filtering."""
        n, k = self.n, self.k
        if self.eulerian_only:
            return math.factorial(n * k) // math.factorial(k) ** n
        return n ** (n * k)


@dataclass
class CensusRecord:
    spec: CensusSpec
    tables_scanned: int
    total_enumerated: int
    synchronizing_count: int
    max_rt: int
    witnesses: List[Table]
    bound_holds: Optional[bool]
    violations: List[Table] = field(default_factory=list)
    kari_violations: int = 0
    extension_checked: int = 0
    extension_max: int = -1
    extension_violations: int = 0
    witness_classes_states_only: int = 0
    rt_histogram: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        s = self.spec
        return {
            "n": s.n,
            "k": s.k,
            "eulerian": s.eulerian_only,
            "iso": s.up_to_iso,
            "bound": s.bound_to_check,
            "bound_holds": self.bound_holds,
            "tables_scanned": self.tables_scanned,
            "total": self.total_enumerated,
            "synchronizing": self.synchronizing_count,
            "max_rt": self.max_rt,
            "witness_classes": len(self.witnesses),
            "witness_classes_states_only": self.witness_classes_states_only,
            "witnesses": [[list(row) for row in t] for t in self.witnesses],
            "violations": [[list(row) for row in t] for t in self.violations],
            "kari_violations": self.kari_violations,
            "extension_checked": self.extension_checked,
            "extension_max": self.extension_max,
            "extension_violations": self.extension_violations,
            "rt_histogram": {str(r): c for r, c in sorted(self.rt_histogram.items())},
        }

    def summary_row(self) -> dict:
        s = self.spec
        return {
            "n": s.n,
            "k": s.k,
            "total": self.total_enumerated,
            "synchronizing": self.synchronizing_count,
            "max_rt": self.max_rt,
            "bound": "" if s.bound_to_check is None else s.bound_to_check,
            "bound_holds": "" if self.bound_holds is None else self.bound_holds,
        }


# -- permutations and canonical forms ---------------------------------------


def _perm_tables(m: int):
    perms = np.array(list(itertools.permutations(range(m))), dtype=np.int64).reshape(-1, m)
    inv = np.argsort(perms, axis=1).astype(np.int64)
    return perms, inv


def _relabelings(n: int, k: int, iso: bool, letters: bool = True):
    if not iso:
        ident = np.arange(n, dtype=np.int64)[None, :]
        return ident, ident.copy(), np.arange(k, dtype=np.int64)[None, :]
    sperm, sperm_inv = _perm_tables(n)
    if letters:
        _, lperm_inv = _perm_tables(k)
    else:
        lperm_inv = np.arange(k, dtype=np.int64)[None, :]
    return sperm, sperm_inv, lperm_inv


def _flatten(delta) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(delta, dtype=np.int64).T).ravel()


def _unflatten(flat, n: int, k: int) -> Table:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(flat).reshape(k, n).T)


def _canonical_flat(flat, n, k, backend=None, letters=True):
    sperm, sperm_inv, lperm_inv = _relabelings(n, k, True, letters)
    fam = kernels.get(backend)
    return fam.flat_canonical_form(np.asarray(flat, dtype=np.int64), n, k, sperm, sperm_inv, lperm_inv)


def canonical_form(dfa: Dfa, backend: Optional[str] = None, letters: bool = True) -> Table:
    """Lexicographically least flattened table over all state and letter
    relabelings, returned as an ``n x k`` tuple table.

    ``letters=False`` restricts to state relabelings.
    """
    if dfa.n > CANONICAL_MAX_STATES:
        raise SizeError(f"canonical form scans n! relabelings; n <= {CANONICAL_MAX_STATES} only")
    best = _canonical_flat(_flatten(dfa.delta), dfa.n, dfa.k, backend, letters)
    return _unflatten(best, dfa.n, dfa.k)


# -- enumeration -------------------------------------------------------------


def resolve_budget(budget: Optional[float] = None) -> float:
    if budget is not None:
        return budget
    env = os.environ.get("SYNCHROKIT_BUDGET")
    return float(env) if env else DEFAULT_BUDGET


def check_budget(spec: CensusSpec, budget: Optional[float] = None, force: bool = False) -> int:
    estimate = spec.table_count()
    limit = resolve_budget(budget)
    if estimate > limit and not force:
        raise BudgetExceededError(estimate, limit)
    if spec.up_to_iso and spec.n > CANONICAL_MAX_STATES:
        raise SizeError(f"isomorphism reduction supports n <= {CANONICAL_MAX_STATES}")
    if spec.n > 16:
        raise SizeError("census tables are stored with one byte per entry; n <= 16")
    return estimate


def shard_prefixes(spec: CensusSpec, depth: int = SHARD_DEPTH) -> List[Tuple[int, ...]]:
    """Fixed prefixes of the first letter's column, one per shard."""
    depth = min(depth, spec.n * spec.k)
    out = []
    for prefix in itertools.product(range(spec.n), repeat=depth):
        if spec.eulerian_only and max(np.bincount(prefix, minlength=spec.n)) > spec.k:
            continue
        out.append(prefix)
    return out


def enumerate_eulerian(
    spec: CensusSpec,
    visitor: Optional[Callable] = None,
    *,
    as_tables: bool = False,
    backend: Optional[str] = None,
    budget: Optional[float] = None,
    force: bool = False,
) -> int:
    """Visit every table admitted by ``spec`` and return how many were visited.

    The visitor receives a :class:`Dfa` (or, with ``as_tables=True``, the
    ``(n, k)`` int array).  With ``spec.eulerian_only`` these are the tables
    with in-degree exactly ``k`` at every state and a strongly connected
    support; with ``spec.up_to_iso`` one canonical table per class.
    """
    check_budget(spec, budget, force)
    n, k = spec.n, spec.k
    fam = kernels.get(backend)
    perms = _relabelings(n, k, spec.up_to_iso)
    count = 0
    for prefix in shard_prefixes(spec):
        for tables, _raw in fam.iter_table_batches(n, k, spec.eulerian_only, spec.up_to_iso,
                                                   np.array(prefix, dtype=np.int64), *perms):
            count += tables.shape[0]
            if visitor is None:
                continue
            for flat in tables:
                delta = flat.reshape(k, n).T.copy()
                visitor(delta if as_tables else Dfa(delta))
    return count


# -- census ------------------------------------------------------------------


def _run_shard(args):
    n, k, eulerian, iso, prefix, bound, ext_stride, backend = args
    fam = kernels.get(backend)
    perms = _relabelings(n, k, iso)
    out = fam.census_shard(n, k, eulerian, iso, np.array(prefix, dtype=np.int64), *perms,
                           bound, ext_stride)
    (raw, visited, sync, max_rt, wit, viol, kari_bad,
     ext_checked, ext_max, ext_bad, hist) = out
    return {
        "raw": int(raw),
        "visited": int(visited),
        "sync": int(sync),
        "max_rt": int(max_rt),
        "witnesses": np.asarray(wit, dtype=np.int64),
        "violations": np.asarray(viol, dtype=np.int64),
        "kari_bad": int(kari_bad),
        "ext_checked": int(ext_checked),
        "ext_max": int(ext_max),
        "ext_bad": int(ext_bad),
        "hist": np.asarray(hist, dtype=np.int64),
    }


def _canonical_set(rows, n, k, iso_done, backend, letters=True) -> List[Table]:
    seen = set()
    for flat in rows:
        if not (iso_done and letters):
            flat = _canonical_flat(flat, n, k, backend, letters)
        seen.add(_unflatten(flat, n, k))
    return sorted(seen)


def census_run(
    spec: CensusSpec,
    *,
    jobs: int = 1,
    backend: Optional[str] = None,
    ext_stride: Optional[int] = None,
    budget: Optional[float] = None,
    force: bool = False,
) -> CensusRecord:
    """Enumerate, compute every reset threshold exactly and aggregate.

    Besides the maximum and its witnesses (canonical tables), Eulerian runs
    check ``rt <= (n-1)(n-2)+1`` on every synchronizing automaton and the
    shortest extending word of every proper nonempty subset (length at most
    ``n-1``) on every ``ext_stride``-th one.  By default every automaton is
    checked unless a non-reduced run scans more than two million tables.
    """
    estimate = check_budget(spec, budget, force)
    n, k = spec.n, spec.k
    if ext_stride is None:
        ext_stride = 1 if (spec.up_to_iso or estimate <= 2_000_000) else 97
    bound = -1 if spec.bound_to_check is None else int(spec.bound_to_check)
    backend = "numba" if kernels.get(backend) is kernels.loops else "numpy"
    tasks = [(n, k, spec.eulerian_only, spec.up_to_iso, p, bound, ext_stride, backend)
             for p in shard_prefixes(spec)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_shard, tasks))
    else:
        parts = [_run_shard(t) for t in tasks]

    max_rt = max((p["max_rt"] for p in parts), default=-1)
    hist = np.zeros(max(len(p["hist"]) for p in parts), np.int64) if parts else np.zeros(1, np.int64)
    for p in parts:
        hist[: len(p["hist"])] += p["hist"]
    wit_rows = [row for p in parts if p["max_rt"] == max_rt for row in p["witnesses"]]
    viol_rows = [row for p in parts for row in p["violations"]]
    ext_values = [p["ext_max"] for p in parts if p["ext_checked"]]
    witnesses = _canonical_set(wit_rows, n, k, spec.up_to_iso, backend) if max_rt >= 0 else []
    by_states = (_canonical_set(wit_rows, n, k, spec.up_to_iso, backend, letters=False)
                 if max_rt >= 0 else [])
    return CensusRecord(
        spec=spec,
        tables_scanned=sum(p["raw"] for p in parts),
        total_enumerated=sum(p["visited"] for p in parts),
        synchronizing_count=sum(p["sync"] for p in parts),
        max_rt=max_rt,
        witnesses=witnesses,
        bound_holds=None if spec.bound_to_check is None else max_rt <= bound,
        violations=_canonical_set(viol_rows, n, k, spec.up_to_iso, backend),
        kari_violations=sum(p["kari_bad"] for p in parts),
        extension_checked=sum(p["ext_checked"] for p in parts),
        extension_max=max(ext_values, default=-1),
        extension_violations=sum(p["ext_bad"] for p in parts),
        witness_classes_states_only=len(by_states),
        rt_histogram={int(r): int(c) for r, c in enumerate(hist) if c},
    )


def conjecture_bound(n: int, k: int) -> int:
    """``floor((n^2 - 3) / 2)``, or ``floor((n^2 - 5) / 2)`` for binary alphabets.

    Stated for Eulerian automata with ``n >= 3``.
    """
    if n < 3:
        raise ParameterError(f"the conjectured bound is stated for n >= 3, got n={n}")
    return (n * n - 5) // 2 if k == 2 else (n * n - 3) // 2


def auto_bound(n: int, k: int, eulerian: bool) -> int:
    """Default bound for ``--bound auto``: the conjectured Eulerian bound when
    it applies, Cerny's ``(n-1)^2`` otherwise."""
    if eulerian and n >= 3:
        return conjecture_bound(n, k)
    return (n - 1) ** 2


@dataclass
class ConjectureReport:
    holds: bool
    bound: int
    record: CensusRecord

    @property
    def violations(self) -> List[Table]:
        return self.record.violations

    def to_dict(self) -> dict:
        return {"holds": self.holds, "bound": self.bound, **self.record.to_dict()}


def verify_conjecture(spec: CensusSpec, **kwargs) -> ConjectureReport:
    """Run the Eulerian census with the conjectured bound and report violators."""
    bound = conjecture_bound(spec.n, spec.k)
    checked = CensusSpec(spec.n, spec.k, True, spec.up_to_iso, bound)
    record = census_run(checked, **kwargs)
    return ConjectureReport(bool(record.bound_holds), bound, record)
