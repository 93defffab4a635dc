"""Command-line front end: ``bifix <command> ...``, one JSON report on stdout.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error, 3 resource guard.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from . import automata, conflicts, phimap, semigroups
from .errors import DimensionError, PreconditionError, ResourceGuardError
from .transmap import read_transformations, write_transformations

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

PRUNE_B0_N7 = 3653
PRUNE_B1_N7 = 1176


class UsageError(Exception):
    pass


class CheckFailure(Exception):
    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    seed: int | None = None
    timing: float = 0.0
    ok: bool = True

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "ok": self.ok,
                "results": self.results, "seed": self.seed, "timing": round(self.timing, 3)}

    def results_json(self) -> str:
        """The deterministic part of the report, for byte-level comparisons."""
        return json.dumps(self.results, sort_keys=True)


# -- helpers --------------------------------------------------------------


def parse_n_range(text: str) -> list:
    """``"7"``, ``"6..8"`` or ``"5,6"`` to a sorted list of ints."""
    out = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
    except ValueError:
        raise UsageError(f"cannot parse n-range {text!r}; use e.g. 7, 6..8 or 5,6") from None
    if not out:
        raise UsageError("empty n-range")
    return sorted(out)


def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _load_dfa(path) -> automata.Dfa:
    try:
        return automata.dfa_from_json(_load_json(path))
    except (ValueError, DimensionError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{path}: {exc}") from None


def _load_set(path):
    try:
        return read_transformations(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _images(ts):
    return [list(t.images) for t in ts]


def _census(T) -> dict:
    statuses = semigroups.pair_statuses(T)
    return {
        "pairs": len(statuses),
        "colliding": [list(s.pair) for s in statuses if s.colliding],
        "focused": [list(s.pair) for s in statuses if s.focused],
        "both": [list(s.pair) for s in statuses if s.colliding and s.focused],
    }


def _max_size(n: int, cache_dir) -> int:
    """Largest syntactic complexity for ``n`` quotients, as a count."""
    if n >= 6:
        return semigroups.wge6_size(n)
    return max(len(semigroups.enumerate_wle5(n, cache_dir=cache_dir)), semigroups.wge6_size(n))


# -- commands -------------------------------------------------------------


def cmd_gen(args, report):
    n = args.n
    if args.set == "bbf":
        elements = semigroups.enumerate_bbf(n, allow_large=args.allow_large, cache_dir=args.cache_dir)
    elif args.set == "wge6":
        elements = semigroups.enumerate_wge6(n)
    elif args.set == "wle5":
        elements = semigroups.enumerate_wle5(n, allow_large=args.allow_large, cache_dir=args.cache_dir)
    else:
        elements = semigroups.witness_letters(n)
    elements = list(elements)
    if args.out:
        write_transformations(args.out, elements, n)
    report.results = {"set": args.set, "n": n, "count": len(elements)}


def cmd_closure(args, report):
    if args.dfa:
        gens = list(_load_dfa(args.dfa).delta)
        n = gens[0].n if gens else 0
    else:
        n, gens = _load_set(args.set)
    T = semigroups.close(gens, n=n)
    if args.out:
        write_transformations(args.out, T.elements, n)
    report.results = {"n": n, "generators": len(T.generators), "size": len(T)}


def cmd_witness(args, report):
    d = semigroups.witness_dfa(args.n)
    if args.out:
        automata.save_dfa(args.out, d)
    res = {"n": args.n, "alphabet": d.alphabet_size,
           "formula": semigroups.witness_alphabet_size(args.n)}
    if args.check:
        T = automata.transition_semigroup(d)
        res["size"] = len(T)
        res["equals_wge6"] = T == semigroups.enumerate_wge6(args.n)
        report.ok = res["equals_wge6"]
    report.results = res


def cmd_analyze(args, report):
    d = _load_dfa(args.dfa)
    res = {"n": d.n, "alphabet": d.alphabet_size, "minimal": automata.is_minimal(d)}
    report.results = res
    if not res["minimal"]:
        return
    rep = automata.is_bifix_free(d)
    res.update(prefix_free=rep.is_prefix_free, suffix_free=rep.is_suffix_free,
               bifix_free=rep.is_bifix, lemma1_witnesses=rep.lemma1_witnesses)
    T = automata.transition_semigroup(d)
    res["syntactic_complexity"] = len(T)
    if rep.is_bifix and d.n >= 3:
        norm = automata.normalize(d)
        NT = automata.transition_semigroup(norm)
        if d.n >= 4:
            res["census"] = _census(NT)
        if d.n <= semigroups.MAX_N:
            bound = _max_size(d.n, args.cache_dir)
            res["bound"] = bound
            res["meets_bound"] = len(T) == bound
            res["within_bound"] = len(T) <= bound


def cmd_phi(args, report):
    if args.dfa:
        d = _load_dfa(args.dfa)
        if d.n != args.n:
            raise UsageError(f"--n {args.n} but the DFA has {d.n} states")
        try:
            d = automata.normalize(d)
        except PreconditionError as exc:
            raise UsageError(f"{args.dfa}: {exc}") from None
        T = list(automata.transition_semigroup(d))
    else:
        n, T = _load_set(args.set)
        if n != args.n:
            raise UsageError(f"--n {args.n} but the set declares n={n}")
    records = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", phimap.SmallNWarning)
        for t in sorted(T, key=lambda t: t.key):
            try:
                s, label, _ = phimap.phi(t, with_case=True)
            except PreconditionError as exc:
                raise UsageError(str(exc)) from None
            records.append({"t": list(t.images), "label": label.label,
                            "subsubcase": label.subsubcase, "s": list(s.images)})
    summary = {"n": args.n, "size": len(records), "theorem_scope": args.n >= phimap.THEOREM_N}
    if args.audit:
        audit = phimap.audit_injectivity(T)
        summary["audit"] = audit.as_dict()
        # below the theorem range collisions are possible and only reported
        report.ok = audit.ok or args.n < phimap.THEOREM_N
    report.results = {"records": records, "summary": summary}


def cmd_uniqueness(args, report):
    trace = conflicts.prune(args.n, per_pair=args.per_pair, cache_dir=args.cache_dir)
    report.results = trace.as_dict()
    report.results["reasons"] = trace.reasons
    report.ok = not trace.failed and trace.sizes[-1] == 0
    if args.trace:
        Path(args.trace).write_text(trace.to_json(with_iterations=args.iterations) + "\n")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["round", "size"])
            for i, size in enumerate(trace.sizes):
                w.writerow([i, size])


# -- reproduction targets -------------------------------------------------


def _repro_prop_witness(n, args):
    if n == 8 and not args.slow:
        return {"skipped": "n=8 needs --slow"}, True
    W = semigroups.enumerate_wge6(n)
    T = semigroups.close(semigroups.witness_letters(n))
    return {"size": len(T), "expected": len(W)}, T == W


def _repro_prop_alphabet(n, args):
    letters = semigroups.witness_letters(n)
    res = {"alphabet": len(letters), "formula": semigroups.witness_alphabet_size(n)}
    ok = len(letters) == res["formula"]
    if n <= 7 or args.slow:
        W = semigroups.enumerate_wge6(n)
        ok &= semigroups.close(letters) == W
        res["irreducible_wge6"] = len(semigroups.irreducible_elements(W))
        res["redundant_letters"] = len(semigroups.redundant_generators(letters))
        ok &= res["redundant_letters"] == 0
    if n <= 6:
        V = semigroups.enumerate_wle5(n, cache_dir=args.cache_dir)
        res["irreducible_wle5"] = len(semigroups.irreducible_elements(V))
        res["factorial"] = math.factorial(n - 2)
        ok &= res["irreducible_wle5"] == res["factorial"]
    return res, ok


def _repro_theorem_bound(n, args):
    types = semigroups.wge6_types(n)
    by_type = sum(len(v) for v in types.values())
    count = len(semigroups.enumerate_wge6(n))
    res = {"count": count, "formula": semigroups.wge6_size(n), "by_type": by_type}
    ok = count == by_type == res["formula"]
    if n >= phimap.THEOREM_N:
        rng = random.Random(args.seed)
        bad = 0
        for _ in range(args.samples):
            d = automata.random_bifix_dfa(n, rng.randint(2, 4), rng)
            audit = phimap.audit_injectivity(automata.transition_semigroup(d))
            bad += not (audit.ok and audit.size <= res["formula"])
        res["audited_dfas"] = args.samples
        res["audit_failures"] = bad
        ok &= bad == 0
    return res, ok


def _repro_theorem_unique(n, args):
    trace = conflicts.prune(n, cache_dir=args.cache_dir)
    res = {"sizes": list(trace.sizes), "threshold": trace.threshold, "failed": trace.failed}
    ok = not trace.failed and trace.sizes[-1] == 0
    if n == 7:
        ok &= trace.sizes[0] == PRUNE_B0_N7
        res["b1_matches_1176"] = len(trace.sizes) > 1 and trace.sizes[1] == PRUNE_B1_N7
    return res, ok


def _repro_small_n(n, args):
    B = semigroups.enumerate_bbf(n, allow_large=args.slow, cache_dir=args.cache_dir)
    W = semigroups.enumerate_wge6(n)
    V = semigroups.enumerate_wle5(n, allow_large=args.slow, cache_dir=args.cache_dir)
    res = {"bbf": len(B), "wge6": len(W), "wle5": len(V)}
    if n in (3, 4):
        ok = V == W
    elif n == 5:
        ok = len(V) > len(W)
    else:
        ok = len(W) > len(V)
    if n >= 4:
        cw, cv = semigroups.pair_statuses(W), semigroups.pair_statuses(V)
        res["wge6_all_focused_none_colliding"] = all(s.focused and not s.colliding for s in cw)
        res["wle5_all_colliding"] = all(s.colliding for s in cv)
        ok &= res["wge6_all_focused_none_colliding"] and res["wle5_all_colliding"]
    if n == 7:
        ok &= len(B) == PRUNE_B0_N7
    return res, ok


TARGETS = {
    "prop-witness": (_repro_prop_witness, "4..7"),
    "prop-alphabet": (_repro_prop_alphabet, "5..7"),
    "theorem-bound": (_repro_theorem_bound, "6..8"),
    "theorem-unique": (_repro_theorem_unique, "3..7"),
    "small-n": (_repro_small_n, "3..7"),
}


def cmd_reproduce(args, report):
    fn, default = TARGETS[args.target]
    ns = parse_n_range(args.n or default)
    rows = []
    for n in ns:
        res, ok = fn(n, args)
        rows.append({"n": n, "pass": bool(ok), **res})
    report.results = {"target": args.target, "checks": rows,
                      "failures": [r["n"] for r in rows if not r["pass"]]}
    report.ok = not report.results["failures"]


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help="persist enumerations here (BIFIX_CACHE_DIR overrides)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for compiled kernels; results do not depend on it")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed for random sampling")
    common.add_argument("--indent", type=int, default=None, help="pretty-print the JSON report")

    p = argparse.ArgumentParser(prog="bifix", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="enumerate a canonical set")
    g.add_argument("set", choices=["bbf", "wge6", "wle5", "witness-letters"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out", help="write the set in line format")
    g.add_argument("--allow-large", action="store_true", help="permit the n=8 scan")

    c = sub.add_parser("closure", parents=[common], help="close a set or a DFA's letters")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--set")
    src.add_argument("--dfa")
    c.add_argument("--out")

    w = sub.add_parser("witness", parents=[common], help="write the witness DFA W(n)")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--out")
    w.add_argument("--check", action="store_true", help="verify its semigroup is W>=6_bf(n)")

    a = sub.add_parser("analyze", parents=[common], help="minimality, bifix-freeness, census")
    a.add_argument("--dfa", required=True)

    f = sub.add_parser("phi", parents=[common], help="evaluate the injective map")
    f.add_argument("--n", type=int, required=True)
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--dfa")
    src.add_argument("--set")
    f.add_argument("--audit", action="store_true")

    u = sub.add_parser("uniqueness", parents=[common], help="run the pruning rounds")
    u.add_argument("--n", type=int, required=True)
    u.add_argument("--trace", help="write the trace as JSON")
    u.add_argument("--iterations", action="store_true", help="include per-element bounds in --trace")
    u.add_argument("--csv", help="write the size table as CSV")
    u.add_argument("--per-pair", action="store_true",
                   help="use the weaker 'each pair colliding or focused' test")

    r = sub.add_parser("reproduce", parents=[common], help="run a reproduction target")
    r.add_argument("target", choices=sorted(TARGETS))
    r.add_argument("--n", help="n-range such as 7, 6..8 or 5,6")
    r.add_argument("--slow", action="store_true", help="include the expensive n=8 checks")
    r.add_argument("--samples", type=int, default=20, help="random DFAs audited per n >= 8")
    return p


COMMANDS = {
    "gen": cmd_gen,
    "closure": cmd_closure,
    "witness": cmd_witness,
    "analyze": cmd_analyze,
    "phi": cmd_phi,
    "uniqueness": cmd_uniqueness,
    "reproduce": cmd_reproduce,
}


def run(argv=None) -> tuple:
    """Parse and execute; returns ``(exit_code, RunReport or None)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_USAGE), None
    args.cache_dir = os.environ.get("BIFIX_CACHE_DIR") or args.cache_dir
    if args.threads:
        import numba

        numba.set_num_threads(max(1, min(args.threads, numba.config.NUMBA_NUM_THREADS)))
    inputs = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "threads", "indent", "cache_dir")}
    report = RunReport(command=args.command, inputs=inputs, seed=args.seed)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, report)
    except UsageError as exc:
        print(f"bifix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except ResourceGuardError as exc:
        print(f"bifix: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD, None
    except (DimensionError, PreconditionError) as exc:
        print(f"bifix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    report.timing = time.perf_counter() - start
    print(json.dumps(report.as_dict(), indent=args.indent))
    return (EXIT_OK if report.ok else EXIT_CHECK), report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
