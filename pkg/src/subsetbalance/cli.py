"""Command-line surface: solve, verify, count, generate, analyze, bench.

All randomness flows from --seed through per-task derived generators, so
every subcommand's output is byte-identical across runs with the same seed.
Wall-clock fields are therefore left blank unless --timing is passed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from . import analysis, ess, mitm, oracle, rep_with0, rep_without0
from .core import (
    ALL,
    CoefficientSet,
    GuardExceeded,
    Instance,
    Outcome,
    Planted,
    SetKind,
    Solution,
    SolutionProfile,
    SolverReport,
    UniformRange,
    enumerate_profiles,
    gen_instance,
    is_solution,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_RETRYABLE = 4

ALGOS = ("auto", "mitm", "unbalanced", "rep0", "repnz", "ess", "oracle")


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a tuple of printable parts."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def _read_instance(path: str) -> Instance:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return Instance.from_json(text)


def _auto_algo(inst: Instance) -> str:
    if inst.coeff_set.kind is SetKind.FULL_RANGE:
        return "ess" if inst.coeff_set.d == 1 else "rep0"
    return "repnz"


def _sweep_unbalanced(inst: Instance, rng: random.Random,
                      repeats: Optional[int]) -> SolverReport:
    for profile in enumerate_profiles(inst.n, inst.coeff_set, ALL):
        if all(cnt == 0 for z, cnt in profile.as_dict().items() if z != 0):
            continue
        report = mitm.unbalanced_sb(inst, profile, rng, repeats)
        if report.outcome is Outcome.SOLVED:
            return report
    return SolverReport.not_found()


def run_solver(algo: str, inst: Instance, seed: int,
               repeats: Optional[int] = None) -> SolverReport:
    rng = random.Random(derive_seed("solve", algo, seed))
    if algo == "auto":
        algo = _auto_algo(inst)
    if algo == "oracle":
        return oracle.brute_force_solve(inst)
    if algo == "mitm":
        return mitm.classic_mitm(inst)
    if algo == "unbalanced":
        return _sweep_unbalanced(inst, rng, repeats)
    if algo == "rep0":
        kwargs = {} if repeats is None else {
            "repeats_unbalanced": repeats, "repeats_balanced": repeats}
        return rep_with0.solve_with0(inst, rng, **kwargs)
    if algo == "repnz":
        kwargs = {} if repeats is None else {
            "repeats_unbalanced": repeats, "repeats_balanced": repeats}
        return rep_without0.solve_without0(inst, rng, **kwargs)
    if algo == "ess":
        kwargs = {} if repeats is None else {
            "repeats_unbalanced": repeats, "repeats_profile": repeats}
        return ess.solve_ess(inst, rng, **kwargs)
    raise ValueError(f"unknown algorithm {algo!r}")


def _print_report(report: SolverReport, as_json: bool, timing: bool) -> None:
    if as_json:
        print(json.dumps(report.to_json_dict(include_timing=timing),
                         sort_keys=True))
        return
    print(f"outcome: {report.outcome.value}")
    if report.solution is not None:
        print(f"solution: {list(report.solution.c)}")
    stats = {k: v for k, v in sorted(report.stats.items())
             if timing or not k.endswith("_ms")}
    if stats:
        print("stats: " + " ".join(f"{k}={v}" for k, v in stats.items()))


def _exit_code(report: SolverReport) -> int:
    if report.outcome is Outcome.SOLVED:
        return EXIT_OK
    if report.outcome is Outcome.NO_SOLUTION_FOUND:
        return EXIT_NOT_FOUND
    return EXIT_RETRYABLE


def cmd_solve(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.monotonic()
    try:
        report = run_solver(args.algo, inst, args.seed, args.repeats)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.stats.setdefault("seed", args.seed)
    if args.timing:
        report.stats["elapsed_ms"] = round(1000 * (time.monotonic() - t0), 3)
    _print_report(report, args.json, args.timing)
    return _exit_code(report)


def cmd_verify(args) -> int:
    try:
        inst = _read_instance(args.instance)
        sol = Solution.from_json_dict(json.loads(open(args.solution).read()))
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ok = is_solution(inst, sol.c)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_count(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        count = oracle.count_solutions(inst)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({"count": count}))
    else:
        print(count)
    return EXIT_OK


def _parse_coeff_set(text: str) -> CoefficientSet:
    """Accepts forms like [-2:2], [+-3], +-3, pm3, range:2, no_zero:3."""
    t = text.strip().replace(" ", "")
    if t.startswith("[") and t.endswith("]"):
        t = t[1:-1]
    for prefix in ("+-", "±", "pm"):
        if t.startswith(prefix):
            return CoefficientSet.no_zero(int(t[len(prefix):]))
    if t.startswith("no_zero:"):
        return CoefficientSet.no_zero(int(t.split(":")[1]))
    if t.startswith("range:"):
        return CoefficientSet.full_range(int(t.split(":")[1]))
    if ":" in t:
        lo, hi = t.split(":")
        d = int(hi)
        if int(lo) != -d:
            raise ValueError(f"expected symmetric range, got {text}")
        return CoefficientSet.full_range(d)
    raise ValueError(f"cannot parse coefficient set {text!r}")


def _default_profile(n: int, coeff_set: CoefficientSet) -> SolutionProfile:
    vals = coeff_set.values()
    base, extra = divmod(n, len(vals))
    counts = {z: base for z in vals}
    order = sorted(vals, key=lambda z: (abs(z), z))  # pad small coefficients
    for z in order[:extra]:
        counts[z] += 1
    return SolutionProfile.from_dict(coeff_set, counts)


def cmd_generate(args) -> int:
    try:
        coeff_set = _parse_coeff_set(args.coeff_set)
        rng = random.Random(derive_seed("generate", args.seed))
        if args.mode == "uniform":
            mode = UniformRange(args.w)
        else:
            if args.profile:
                counts = {int(k): int(v)
                          for k, v in json.loads(args.profile).items()}
                profile = SolutionProfile.from_dict(coeff_set, counts)
            else:
                profile = _default_profile(args.n, coeff_set)
            mode = Planted(profile, args.w)
        inst, planted = gen_instance(args.n, coeff_set, mode, rng)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(inst.to_json_dict())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if planted is not None and args.solution_out:
        with open(args.solution_out, "w") as fh:
            fh.write(json.dumps(planted.to_json_dict()) + "\n")
    return EXIT_OK


def cmd_analyze(args) -> int:
    target = args.target
    if target == "pm2":
        data = analysis.optimize_pm2()
    elif target == "pm3":
        data = analysis.optimize_pm3()
    elif target == "ess":
        data = analysis.optimize_ess()
    elif target == "appendix-b":
        data = [analysis.appendix_b_check(d) for d in range(1, args.d_max + 1)]
    elif target == "table1":
        data = analysis.table1_rows()
    else:
        print(f"error: unknown target {target}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(data, sort_keys=True, indent=None,
                      default=float)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.plot:
        from . import plots

        base = args.out or f"analyze_{target}"
        path = plots.analyze_figure(target, data, f"{base}.png")
        if path:
            print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


def _bench_row(algo: str, inst: Instance, cset: str, seed: int,
               timing: bool) -> dict:
    t0 = time.monotonic()
    report = run_solver(algo, inst, seed)
    millis = round(1000 * (time.monotonic() - t0), 3) if timing else ""
    stats = report.stats
    predicted = ""
    try:
        if algo in ("mitm", "unbalanced"):
            predicted = round(
                analysis.runtime_exponent(
                    "unbalanced",
                    _default_profile(inst.n, inst.coeff_set)), 6)
        elif algo == "rep0":
            predicted = round(
                analysis.runtime_exponent(
                    "balanced_with0",
                    _default_profile(inst.n, inst.coeff_set)), 6)
        elif algo == "ess":
            predicted = round(
                analysis.runtime_exponent(
                    "ess", _default_profile(inst.n, inst.coeff_set),
                    eps=ess.EPS_DEFAULT), 6)
    except ValueError:
        predicted = ""
    return {
        "algo": algo,
        "n": inst.n,
        "C": cset,
        "seed": seed,
        "outcome": report.outcome.value,
        "rounds": stats.get("rounds", ""),
        "prime": stats.get("prime", ""),
        "list_size": stats.get("list_size", stats.get("list_size_a", "")),
        "millis": millis,
        "predicted_exponent": predicted,
    }


BENCH_COLUMNS = ["algo", "n", "C", "seed", "outcome", "rounds", "prime",
                 "|S|", "millis", "predicted_exponent"]


def cmd_bench(args) -> int:
    try:
        csets = [s.strip() for s in args.coeff_sets.split(",") if s.strip()]
        parsed = [(s, _parse_coeff_set(s)) for s in csets]
        algos = [a.strip() for a in args.algos.split(",") if a.strip()]
        for a in algos:
            if a not in ALGOS:
                raise ValueError(f"unknown algorithm {a!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    def applies(algo: str, coeff_set: CoefficientSet) -> bool:
        if algo == "ess":
            return (coeff_set.kind is SetKind.FULL_RANGE
                    and coeff_set.d == 1)
        if algo == "rep0":
            return coeff_set.kind is SetKind.FULL_RANGE
        if algo == "repnz":
            return coeff_set.kind is SetKind.NO_ZERO
        return True

    tasks = []
    for name, coeff_set in parsed:
        for n in range(args.n_min, args.n_max + 1):
            for i in range(args.count):
                inst_seed = derive_seed("bench", args.seed, name, n, i)
                inst, _ = gen_instance(
                    n, coeff_set, UniformRange(args.w),
                    random.Random(inst_seed))
                for algo in algos:
                    if not applies(algo, coeff_set):
                        continue
                    tasks.append((algo, inst, name,
                                  derive_seed(args.seed, name, n, i, algo)))

    def run(task):
        algo, inst, name, seed = task
        return _bench_row(algo, inst, name, seed, args.timing)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(t) for t in tasks]

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow([row["algo"], row["n"], row["C"], row["seed"],
                         row["outcome"], row["rounds"], row["prime"],
                         row["list_size"], row["millis"],
                         row["predicted_exponent"]])
    if args.out:
        out.close()
    if args.plot:
        from . import plots

        base = (args.out or "bench").removesuffix(".csv")
        for path in plots.bench_figures(rows, base):
            print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subsetbalance",
        description="Exact solvers for the Subset Balancing problem "
                    "(find nonzero c in C^n with c.x = 0).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file ('-' = stdin)")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGOS, default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=None,
                   help="per-profile round budget override")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock stats (breaks byte-for-byte "
                        "reproducibility)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="exact solution count (brute force)")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("generate", help="draw a random or planted instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coeff-set", required=True,
                   help="e.g. '[-2:2]' or '+-3'")
    p.add_argument("--mode", choices=("uniform", "planted"),
                   default="uniform")
    p.add_argument("--w", type=int, default=100)
    p.add_argument("--profile", default=None,
                   help="planted profile as JSON counts, e.g. "
                        "'{\"1\": 2, \"-1\": 2}'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--solution-out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="reproduce the optimized exponents")
    p.add_argument("--target", required=True,
                   choices=("pm2", "pm3", "ess", "appendix-b", "table1"))
    p.add_argument("--d-max", type=int, default=8,
                   help="rows for appendix-b")
    p.add_argument("--out", default=None)
    p.add_argument("--plot", action="store_true",
                   help="render a figure next to the output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="run a solver corpus, emit CSV")
    p.add_argument("--n-min", type=int, default=6)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--coeff-sets", default="[-1:1]",
                   help="comma-separated, e.g. '[-1:1],+-2'")
    p.add_argument("--algos", default="mitm",
                   help=f"comma-separated from {','.join(ALGOS)}")
    p.add_argument("--count", type=int, default=3,
                   help="instances per (C, n) cell")
    p.add_argument("--w", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--plot", action="store_true",
                   help="render figures next to the CSV")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true",
                   help="fill the millis column (breaks reproducibility)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
