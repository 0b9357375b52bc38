"""Command-line front end: single-case checks, identity fuzzing, and case
sweeps with parallel execution.

Output is JSON Lines, one record per check, on stdout (or --output); a
human summary goes to stderr.  Records are byte-stable for a fixed seed:
timings are reported on stderr only and the elapsed_ms field is always
null, so reruns and different --jobs settings produce identical bytes.

Exit codes: 0 success, 1 mathematical FAIL, 2 usage or hypothesis error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactalg import InfiniteValuation, ValuationReport
from .hypergeom import (
    InvalidCase,
    TheoremCase,
    Truncation,
    Variant,
    andrews_lhs,
    andrews_rhs,
    draw_andrews_params,
    draw_km_params,
    draw_watson_exponents,
    gasper_terminating_sum,
    multi_km_sum,
    sample_until_valid,
    theorem_sum,
    watson_pair,
)
from .congruence import (
    CheckReport,
    CheckStatus,
    Conjecture,
    Lemma3Truncation,
    Modulus,
    check_congruence,
    check_conjecture,
    check_lemma3,
    check_lemma4,
    check_mod_square,
    check_theorem,
    enumerate_cases,
    q_integer_modulus,
    van_hamme_check,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

SWEEP_D_MAX = 9
SWEEP_N_MAX = 40


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: everything needed to reproduce a report.

    The seed and sweep bounds are echoed into the report header; the
    parallelism degree and output path deliberately are not, since output
    bytes must not depend on them.
    """

    command: str
    parameters: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    seed: int | None = None
    jobs: int = 1
    output: str | None = None

    def header_record(self) -> dict:
        rec = {"command": self.command}
        rec.update(self.parameters)
        rec.update(self.bounds)
        rec["seed"] = self.seed
        return rec


def _json_valuation(v) -> object:
    return "infinite" if isinstance(v, InfiniteValuation) else v


def _report_record(command: str, case_fields: dict, report: CheckReport,
                   seed: int | None) -> dict:
    rec = {
        "command": command,
        "case": case_fields,
        "modulus": {str(m): k for m, k in sorted(report.modulus.parts.items())},
        "achieved": {
            str(m): _json_valuation(v)
            for m, v in sorted(report.valuations.achieved.items())
        } if report.valuations else {},
        "status": report.status.value,
        "term_count": report.term_count,
        "elapsed_ms": None,
        "seed": seed,
    }
    if report.detail:
        rec["detail"] = report.detail
    if report.oracle_status is not None:
        rec["oracle"] = report.oracle_status.value
    return rec


def _case_fields(case: TheoremCase) -> dict:
    return {
        "d": case.d,
        "r": case.r,
        "n": case.n,
        "variant": case.variant.value,
        "trunc": case.truncation.value,
    }


def _emit(lines: Iterable[str], output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            for line in lines:
                fh.write(line + "\n")
    else:
        for line in lines:
            print(line)


def _status_exit(status: CheckStatus) -> int:
    if status is CheckStatus.PASS:
        return EXIT_PASS
    if status is CheckStatus.FAIL:
        return EXIT_FAIL
    return EXIT_ERROR


# ---------------------------------------------------------------------------
# verify


def _verify_report(args) -> tuple[CheckReport, dict]:
    kind = args.kind
    trunc = Truncation.FULL if args.trunc == "full" else Truncation.UPPER
    if kind in ("thm1", "thm2"):
        variant = Variant.THM1 if kind == "thm1" else Variant.THM2
        case = TheoremCase(args.d, args.r, args.n, variant, trunc)
        report = check_theorem(case, oracle=args.oracle)
        if args.power is not None:
            mod = q_integer_modulus(case.n, args.power)
            report = check_congruence(theorem_sum(case), mod, case.describe(),
                                      term_count=case.upper_bound + 1)
        return report, _case_fields(case)
    if kind in ("conj1", "conj2", "conj3"):
        which = Conjecture(kind)
        r = args.r if args.r is not None else (1 if kind == "conj1" else -1)
        if kind in ("conj1", "conj2"):
            variant = (Variant.THM1 if args.n % args.d == (-r) % args.d
                       else Variant.THM2)
        else:
            variant = Variant.THM2
        case = TheoremCase(args.d, r, args.n, variant, trunc)
        return check_conjecture(case, which, oracle=args.oracle), _case_fields(case)
    if kind == "lemma3":
        lt = Lemma3Truncation.FULL if args.trunc == "full" else Lemma3Truncation.M_SOLVED
        report = check_lemma3(args.d, args.r, args.n, lt, oracle=args.oracle)
        return report, {"d": args.d, "r": args.r, "n": args.n, "trunc": args.trunc}
    if kind == "lemma4":
        ok = check_lemma4(args.d, args.r, args.n)
        report = CheckReport(
            description=f"lemma4(d={args.d}, r={args.r}, n={args.n})",
            modulus=Modulus({}),
            valuations=ValuationReport({}, {}, ok),
            status=CheckStatus.PASS if ok else CheckStatus.FAIL,
            term_count=(args.d * args.n - 2 * args.n - args.r) // args.d,
        )
        return report, {"d": args.d, "r": args.r, "n": args.n}
    if kind == "modsquare":
        report = check_mod_square(args.alpha, args.r, args.n, args.d, args.k_max)
        return report, {"alpha": args.alpha, "r": args.r, "n": args.n,
                        "d": args.d, "k_max": args.k_max}
    if kind == "vanhamme":
        report = van_hamme_check(args.p)
        return report, {"p": args.p}
    raise InvalidCase([f"unknown verify kind {kind!r}"])


def cmd_verify(args) -> int:
    try:
        report, fields = _verify_report(args)
    except InvalidCase as exc:
        for msg in exc.violations:
            print(f"hypothesis violated: {msg}", file=sys.stderr)
        return EXIT_ERROR
    rec = _report_record(f"verify {args.kind}", fields, report, args.seed)
    _emit([json.dumps(rec)], args.output)
    print(f"{report.description or args.kind}: {report.status.value} "
          f"({report.elapsed_ms:.0f} ms)", file=sys.stderr)
    if report.oracle_status is not None and report.oracle_status != report.status:
        print("oracle verdict disagrees with valuation verdict", file=sys.stderr)
        return EXIT_ERROR
    return _status_exit(report.status)


# ---------------------------------------------------------------------------
# identity


def _identity_trial(kind: str, rng: random.Random, m: int, order: int | None):
    if kind == "andrews":
        return sample_until_valid(
            rng,
            lambda rg: draw_andrews_params(rg, m, N=order),
            lambda p: andrews_lhs(p) == andrews_rhs(p),
        )
    if kind == "watson":
        return sample_until_valid(
            rng,
            lambda rg: draw_watson_exponents(rg, N=order),
            lambda t: watson_pair(*t)[0] == watson_pair(*t)[1],
        )
    if kind == "gasper-km":
        return sample_until_valid(
            rng,
            lambda rg: draw_km_params(rg, m, N=order),
            lambda p: gasper_terminating_sum(p).is_zero,
        )
    if kind == "multi-km":
        return sample_until_valid(
            rng,
            lambda rg: draw_km_params(rg, max(m, 2), N=order),
            lambda p: multi_km_sum(p).is_zero,
        )
    raise ValueError(f"unknown identity kind {kind!r}")


def _params_fields(kind: str, params) -> dict:
    if kind == "andrews":
        return {"a": params.a, "pairs": [list(p) for p in params.pairs], "N": params.N}
    if kind == "watson":
        a, b, c, d, e, n = params
        return {"a": a, "b": b, "c": c, "d": d, "e": e, "N": n}
    return {"a": params.a, "e": list(params.e), "nondeg": list(params.nondeg),
            "N": params.N}


def cmd_identity(args) -> int:
    rng = random.Random(args.seed)
    lines = []
    failures = 0
    start = time.perf_counter()
    for trial in range(args.trials):
        params, ok, resamples = _identity_trial(args.kind, rng, args.m, args.N)
        failures += not ok
        lines.append(json.dumps({
            "command": f"identity {args.kind}",
            "trial": trial,
            "params": _params_fields(args.kind, params),
            "status": "PASS" if ok else "FAIL",
            "resamples": resamples,
            "elapsed_ms": None,
            "seed": args.seed,
        }))
    _emit(lines, args.output)
    elapsed = time.perf_counter() - start
    print(f"identity {args.kind}: {args.trials - failures}/{args.trials} exact "
          f"({elapsed:.1f} s, seed {args.seed})", file=sys.stderr)
    return EXIT_PASS if failures == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# sweep


def _sweep_worker(job) -> dict:
    kind, case, oracle, seed = job
    if kind in ("thm1", "thm2"):
        report = check_theorem(case, oracle=oracle)
        command = f"sweep {kind}"
    else:
        report = check_conjecture(case, Conjecture(kind), oracle=oracle)
        command = f"sweep {kind}"
    return _report_record(command, _case_fields(case), report, seed)


def _sweep_cases(kind: str, d_max: int, n_max: int,
                 r_range: tuple[int, int]) -> list[TheoremCase]:
    if kind == "thm1":
        return enumerate_cases(Variant.THM1, d_max, n_max, r_range)
    if kind == "thm2":
        return enumerate_cases(Variant.THM2, d_max, n_max, r_range)
    if kind == "conj1":
        pool = enumerate_cases(Variant.THM1, d_max, n_max, (1, 1)) + \
            enumerate_cases(Variant.THM2, d_max, n_max, (1, 1))
        pool = [c for c in pool if c.truncation is Truncation.FULL]
    elif kind == "conj2":
        pool = enumerate_cases(Variant.THM1, d_max, n_max, (-1, -1)) + \
            enumerate_cases(Variant.THM2, d_max, n_max, (-1, -1))
        pool = [c for c in pool if c.truncation is Truncation.FULL]
    elif kind == "conj3":
        pool = enumerate_cases(Variant.THM2, d_max, n_max, r_range)
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    return sorted(pool, key=lambda c: (c.d, c.r, c.n, c.variant.value,
                                       c.truncation.value))


def cmd_sweep(args) -> int:
    kind = args.theorem or args.conjecture
    if args.d_max > SWEEP_D_MAX or args.n_max > SWEEP_N_MAX:
        print(f"sweep bounds capped at d <= {SWEEP_D_MAX}, n <= {SWEEP_N_MAX}",
              file=sys.stderr)
        return EXIT_ERROR
    r_range = (args.r_min, args.r_max)
    cases = _sweep_cases(kind, args.d_max, args.n_max, r_range)
    config = RunConfig(
        command=f"sweep {kind}",
        parameters={},
        bounds={"d_max": args.d_max, "n_max": args.n_max,
                "r_min": r_range[0], "r_max": r_range[1],
                "cases": len(cases)},
        seed=args.seed,
        jobs=args.jobs,
        output=args.output,
    )
    header = json.dumps(config.header_record())
    jobs = [(kind, case, args.oracle, args.seed) for case in cases]
    start = time.perf_counter()
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_sweep_worker, jobs))
    else:
        records = [_sweep_worker(job) for job in jobs]
    elapsed = time.perf_counter() - start
    _emit([header] + [json.dumps(rec) for rec in records], args.output)
    counts = {"PASS": 0, "FAIL": 0, "ERROR": 0}
    mismatches = 0
    for rec in records:
        counts[rec["status"]] += 1
        if args.oracle and rec.get("oracle") != rec["status"]:
            mismatches += 1
    print(f"sweep {kind}: {len(records)} cases, "
          f"{counts['PASS']} pass, {counts['FAIL']} fail, "
          f"{counts['ERROR']} error ({elapsed:.1f} s)", file=sys.stderr)
    if mismatches:
        print(f"oracle disagreements: {mismatches}", file=sys.stderr)
        return EXIT_ERROR
    if kind.startswith("conj"):
        return EXIT_PASS
    if counts["ERROR"]:
        return EXIT_ERROR
    return EXIT_PASS if counts["FAIL"] == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcongruence",
        description="Exact verification of q-congruences for truncated "
                    "basic hypergeometric sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="check a single case")
    ver.add_argument("kind", choices=["thm1", "thm2", "conj1", "conj2",
                                      "conj3", "lemma3", "lemma4",
                                      "modsquare", "vanhamme"])
    ver.add_argument("--d", type=int, default=5)
    ver.add_argument("--r", type=int, default=None)
    ver.add_argument("--n", type=int, default=None)
    ver.add_argument("--p", type=int, default=5)
    ver.add_argument("--alpha", type=int, default=1)
    ver.add_argument("--k-max", type=int, default=3)
    ver.add_argument("--trunc", choices=["upper", "full"], default="upper")
    ver.add_argument("--power", type=int, default=None,
                     help="override the cyclotomic power of the modulus")
    ver.add_argument("--oracle", action="store_true",
                     help="cross-check with the brute-force divisibility oracle")
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--output", default=None)
    ver.set_defaults(func=cmd_verify)

    ident = sub.add_parser("identity", help="randomized exact identity checks")
    ident.add_argument("kind", choices=["andrews", "watson", "gasper-km",
                                        "multi-km"])
    ident.add_argument("--m", type=int, default=2, help="number of parameter pairs")
    ident.add_argument("--N", type=int, default=None, help="termination order")
    ident.add_argument("--trials", type=int, default=20)
    ident.add_argument("--seed", type=int, default=0)
    ident.add_argument("--output", default=None)
    ident.set_defaults(func=cmd_identity)

    sweep = sub.add_parser("sweep", help="grid of cases, optionally parallel")
    group = sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--theorem", choices=["thm1", "thm2"])
    group.add_argument("--conjecture", choices=["conj1", "conj2", "conj3"])
    sweep.add_argument("--d-max", type=int, default=7)
    sweep.add_argument("--n-max", type=int, default=20)
    sweep.add_argument("--r-min", type=int, default=-7)
    sweep.add_argument("--r-max", type=int, default=7)
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--oracle", action="store_true")
    sweep.add_argument("--output", default=None)
    sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    required = {
        "thm1": ("r", "n"), "thm2": ("r", "n"),
        "conj1": ("n",), "conj2": ("n",), "conj3": ("r", "n"),
        "lemma3": ("r", "n"), "lemma4": ("r", "n"), "modsquare": ("r", "n"),
    }
    if args.command == "verify":
        for name in required.get(args.kind, ()):
            if getattr(args, name) is None:
                parser.error(f"verify {args.kind} requires --{name}")
    try:
        return args.func(args)
    except InvalidCase as exc:
        for msg in exc.violations:
            print(f"hypothesis violated: {msg}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
