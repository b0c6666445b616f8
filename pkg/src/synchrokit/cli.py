"""Command-line interface: ``synchrokit <command> ...``.

stdout carries exactly one payload (JSON, CSV or a word string); diagnostics
go to stderr.  Exit codes: 0 success, 1 census bound violated, 2 bad input,
3 domain error (not synchronizing, not extensible, too large, over budget).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time

from .automaton import Dfa, classify_letter, format_word, is_eulerian, parse_word
from .census import CensusSpec, auto_bound, census_run
from .errors import BudgetExceededError, DomainError, ParameterError, SizeError, SynchroError
from .search import (
    backward_level_profile,
    is_synchronizing,
    reset_threshold_backward,
    reset_threshold_exact,
    shortest_extending_word,
)
from .series import build_am, build_cerny, build_reset_word, build_w
from .words import (
    forbidden_factor_check,
    is_greedy,
    is_straight,
    preimage_chain,
    verify_reset,
)

EXIT_OK, EXIT_BOUND, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return Dfa.from_json(raw.decode("utf-8")), raw
    except (ParameterError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _word(dfa, text, compact):
    try:
        return parse_word(dfa, text, compact=compact)
    except ParameterError as exc:
        raise InputError(str(exc)) from None


def cmd_rt(args):
    dfa, raw = _load(args.dfa)
    res = reset_threshold_exact(dfa)
    verified = None
    if args.verify:
        back = reset_threshold_backward(dfa)
        verified = back.threshold == res.threshold and verify_reset(dfa, res.witness) == res.q0
    payload = {
        "threshold": res.threshold,
        "word": format_word(dfa, res.witness),
        "q0": res.q0,
        "verified": verified,
    }
    return payload, raw, EXIT_OK


def cmd_verify_word(args):
    dfa, raw = _load(args.dfa)
    word = _word(dfa, args.word, args.compact)
    q0 = verify_reset(dfa, word)
    straight = greedy = None
    if q0 is not None:
        straight = is_straight(dfa, word, q0)
        greedy = is_greedy(dfa, word, q0)
    try:
        factors = forbidden_factor_check(word, dfa).to_dict()
    except ParameterError:
        factors = None
    payload = {
        "reset": q0 is not None,
        "q0": q0,
        "length": len(word),
        "straight": straight,
        "greedy": greedy,
        "factors": factors,
    }
    return payload, raw, EXIT_OK


def cmd_series(args):
    if args.family == "am":
        if args.emit == "dfa":
            return build_am(args.m).to_json(), None, EXIT_OK
        dfa = build_am(args.m)
        word = build_w(args.m) if args.emit == "word" else build_reset_word(args.m)
        return format_word(dfa, word), None, EXIT_OK
    return build_cerny(args.n).to_json(), None, EXIT_OK


def _subset(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad subset {text!r}; expected comma-separated states") from None


def cmd_extend(args):
    dfa, raw = _load(args.dfa)
    subset = _subset(args.subset)
    word = shortest_extending_word(dfa, subset)
    return {"subset": sorted(set(subset)), "length": len(word), "word": format_word(dfa, word)}, raw, EXIT_OK


def cmd_trace(args):
    dfa, raw = _load(args.dfa)
    word = _word(dfa, args.word, args.compact)
    q0 = args.q0
    if q0 is None:
        q0 = verify_reset(dfa, word)
        if q0 is None:
            raise InputError("word is not a reset word; pass --q0 explicitly")
    return preimage_chain(dfa, word, q0).to_dict(dfa), raw, EXIT_OK


def cmd_levels(args):
    dfa, raw = _load(args.dfa)
    prof = backward_level_profile(dfa, args.q0, args.max_depth)
    payload = {
        "q0": prof.q0,
        "widths": list(prof.widths),
        "max_width": prof.max_width,
        "depth_to_full": prof.depth_to_full,
    }
    return payload, raw, EXIT_OK


def cmd_check(args):
    dfa, raw = _load(args.dfa)
    letters = {}
    for a, name in enumerate(dfa.letters):
        prof = classify_letter(dfa, a)
        letters[name] = {
            "permutational": prof.permutational,
            "involutory": prof.involutory,
            "unitary": prof.unitary,
            "moved_state": list(prof.moved_state) if prof.moved_state else None,
        }
    payload = {
        "n": dfa.n,
        "k": dfa.k,
        "eulerian": is_eulerian(dfa),
        "synchronizing": is_synchronizing(dfa) if dfa.n <= 64 else None,
        "letters": letters,
    }
    return payload, raw, EXIT_OK


def cmd_census(args):
    if args.bound is None:
        bound = None
    elif args.bound == "auto":
        bound = auto_bound(args.n, args.k, args.eulerian)
    else:
        try:
            bound = int(args.bound)
        except ValueError:
            raise InputError(f"--bound must be 'auto' or an integer, got {args.bound!r}") from None
    spec = CensusSpec(args.n, args.k, args.eulerian, args.iso, bound)
    record = census_run(spec, jobs=args.jobs, ext_stride=args.ext_stride, force=args.force)
    if args.witness_dir:
        os.makedirs(args.witness_dir, exist_ok=True)
        for i, table in enumerate(record.witnesses):
            Dfa(table).save(os.path.join(args.witness_dir, f"witness_n{args.n}_k{args.k}_{i:03d}.json"))
    if args.out == "csv":
        buf = io.StringIO()
        row = record.summary_row()
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        payload = buf.getvalue().rstrip("\n")
    else:
        payload = record.to_dict()
    code = EXIT_BOUND if record.bound_holds is False else EXIT_OK
    return payload, None, code


def build_parser():
    p = argparse.ArgumentParser(prog="synchrokit", description="Synchronizing automata toolkit")
    p.add_argument("--report", action="store_true",
                   help="wrap JSON output in a report with command name, input digest and timing")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rt", help="exact reset threshold")
    s.add_argument("dfa")
    s.add_argument("--verify", action="store_true", help="cross-check with the backward search")
    s.set_defaults(func=cmd_rt)

    s = sub.add_parser("verify-word", help="reset/straight/greedy/factor report for a word")
    s.add_argument("dfa")
    s.add_argument("word", help="whitespace-separated letter names")
    s.add_argument("--compact", action="store_true", help="word of single-character letters without spaces")
    s.set_defaults(func=cmd_verify_word)

    s = sub.add_parser("series", help="emit A_m or a Cerny automaton")
    fam = s.add_subparsers(dest="family", required=True)
    am = fam.add_parser("am")
    am.add_argument("--m", type=int, required=True)
    am.add_argument("--emit", choices=("dfa", "word", "resetword"), default="dfa")
    ce = fam.add_parser("cerny")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--emit", choices=("dfa",), default="dfa")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("extend", help="shortest extending word of a subset")
    s.add_argument("dfa")
    s.add_argument("--subset", required=True, help="comma-separated states, e.g. 0,1")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("trace", help="preimage chain of a singleton along a word")
    s.add_argument("dfa")
    s.add_argument("word")
    s.add_argument("--q0", type=int, default=None)
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("levels", help="backward BFS layer widths from a singleton")
    s.add_argument("dfa")
    s.add_argument("--q0", type=int, default=0)
    s.add_argument("--max-depth", type=int, default=10_000)
    s.set_defaults(func=cmd_levels)

    s = sub.add_parser("check", help="Eulerian test, synchronizability and letter classes")
    s.add_argument("dfa")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("census", help="exhaustive reset-threshold census")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--eulerian", action="store_true")
    s.add_argument("--iso", action="store_true", help="one automaton per isomorphism class")
    s.add_argument("--bound", default=None, help="'auto' or an integer")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", choices=("csv", "json"), default="json")
    s.add_argument("--witness-dir", default=None)
    s.add_argument("--ext-stride", type=int, default=None,
                   help="check extending words on every k-th synchronizing automaton")
    s.add_argument("--force", action="store_true", help="ignore the table budget")
    s.set_defaults(func=cmd_census)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        payload, raw, code = args.func(args)
    except (InputError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, SizeError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SynchroError as exc:  # pragma: no cover - every subclass is mapped above
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.report and not isinstance(payload, str):
        payload = {
            "command": args.command,
            "input_digest": hashlib.sha256(raw).hexdigest() if raw is not None else None,
            "result": payload,
            "elapsed_ms": round((time.perf_counter() - start) * 1000, 3),
        }
    print(payload if isinstance(payload, str) else json.dumps(payload))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
