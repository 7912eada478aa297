"""Command-line interface: exact values, verification, figure data, simulation.

Exit codes: 0 on success, 1 when a verification or consistency check fails,
2 on usage errors (argparse's own convention).  Set GW_LOG=debug|info|...
to enable logging.  All CSV output is byte-stable for fixed arguments:
fractions print as num/den plus a 12-significant-digit decimal, and float
grids are generated from exact binary steps.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
from fractions import Fraction

from . import __version__
from ._kernel import active_backend, available_backends
from .continuous import (
    correction_identity,
    equal_pool_advantage,
    fair_factor,
    p_infinity,
    p_infinity_exact,
)
from .game import (
    RegionKind,
    classify,
    closed_form_value,
    optimal_bid,
    solve_dp,
    verify_closed_form,
)
from .simulate import estimate_escape, estimate_win_prob, evaluate_policy, simulate_continuous
from .strategies import STRATEGIES

log = logging.getLogger("guesswho")


def _setup_logging() -> None:
    level_name = os.environ.get("GW_LOG", "")
    if level_name:
        level = getattr(logging, level_name.upper(), logging.INFO)
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _fmt_fraction(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator} = {float(p):.12g}"


def _fraction_dict(p: Fraction) -> dict:
    return {"num": p.numerator, "den": p.denominator, "approx": round(float(p), 10)}


def _open_out(path: str | None):
    # nullcontext keeps the with-block from closing interpreter-owned stdout
    return open(path, "w", newline="") if path else contextlib.nullcontext(sys.stdout)


def _emit(doc: dict, args: argparse.Namespace, text: str) -> None:
    """Write `text` or JSON depending on --format, to --out or stdout."""
    payload = json.dumps(doc, indent=2) + "\n" if args.format == "json" else text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def cmd_value(args: argparse.Namespace) -> int:
    n, m = args.n, args.m
    region = classify(n, m)
    p_star = closed_form_value(n, m)
    doc: dict = {
        "n": n,
        "m": m,
        "region": region.kind.value,
        "level": region.level,
        "p_star": _fraction_dict(p_star),
    }
    lines = [
        f"state: n={n} m={m} (mover's view)",
        f"region: {region.kind.value}" + (f", level {region.level}" if region.level is not None else ""),
        f"p*: {_fmt_fraction(p_star)}",
    ]
    if region.kind in (RegionKind.WEEDS, RegionKind.UPPER_HAND):
        bid = optimal_bid(n, m)
        p_inf = p_infinity_exact(n, m)
        corr = correction_identity(n, m)
        doc.update({
            "optimal_bid": bid,
            "p_infinity": _fraction_dict(p_inf),
            "correction": _fraction_dict(corr),
        })
        lines += [
            f"optimal bid: {bid}",
            f"p_infinity: {_fmt_fraction(p_inf)}",
            f"correction (p* - p_infinity): {_fmt_fraction(corr)}",
        ]
    else:
        doc.update({"optimal_bid": None, "p_infinity": None, "correction": None})
        lines.append("terminal state: no bid to make")
    _emit(doc, args, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    log.info("solving all states with n + m <= %d", args.max_sum)
    table = solve_dp(args.max_sum)
    report = verify_closed_form(args.max_sum, table)
    correction_failures: list[tuple[int, int]] = []
    for n, m in table.states():
        if n >= 2 and m >= 2:
            try:
                correction_identity(n, m)
            except AssertionError:
                correction_failures.append((n, m))
    ok = report.ok and not correction_failures
    doc = {
        "max_sum": report.max_sum,
        "states_checked": report.states_checked,
        "value_mismatches": len(report.value_mismatches),
        "bid_misses": len(report.bid_misses),
        "deficit_violations": len(report.deficit_violations),
        "correction_failures": len(correction_failures),
        "ok": ok,
    }
    text = report.summary() + (
        f"\ncorrection identity failures: {len(correction_failures)}"
        f"\nresult: {'PASS' if ok else 'FAIL'}\n"
    )
    _emit(doc, args, text)
    return 0 if ok else 1


def cmd_solve(args: argparse.Namespace) -> int:
    table = solve_dp(args.max_sum)
    if not args.out:
        raise SystemExit("--out is required for solve")
    if args.format == "json":
        table.to_json(args.out)
    else:
        table.to_csv(args.out)
    print(f"wrote {args.format} table for n + m <= {args.max_sum} to {args.out}")
    return 0


def cmd_heatmap(args: argparse.Namespace) -> int:
    size = args.grid
    with _open_out(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "m", "p_num", "p_den", "p"])
        for n in range(1, size + 1):
            for m in range(1, size + 1):
                if n == 1 and m == 1:
                    continue  # undefined: the game is over before it starts
                p = closed_form_value(n, m)
                writer.writerow([n, m, p.numerator, p.denominator, f"{float(p):.12g}"])
    return 0


def cmd_heatmap_continuous(args: argparse.Namespace) -> int:
    steps = args.grid
    top = args.max
    with _open_out(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "p_infinity"])
        count = (top - 1) * steps
        for i in range(1, count + 1):
            x = 1.0 + i / steps
            for j in range(1, count + 1):
                y = 1.0 + j / steps
                if x > 2.0 and y > 2.0:
                    continue  # outside the L-shaped fundamental domain
                writer.writerow([f"{x:.12g}", f"{y:.12g}", f"{p_infinity(x, y):.12g}"])
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    report = estimate_win_prob(args.n, args.m, args.p1, args.p2,
                               trials=args.trials, seed=args.seed, workers=args.workers)
    exact_note = ""
    doc = report.to_dict()
    if args.exact:
        exact = evaluate_policy(args.n, args.m, args.p1)
        doc["exact_policy_value"] = _fraction_dict(exact)
        exact_note = f"exact {args.p1} vs optimal: {_fmt_fraction(exact)}\n"
    text = (
        f"estimate P(first mover wins) from ({report.n}, {report.m})\n"
        f"strategies: {report.p1} vs {report.p2}\n"
        f"trials: {report.trials}  wins: {report.wins}  seed: {report.seed}\n"
        f"p_hat: {report.p_hat:.6f}  std_err: {report.std_err:.6f}\n"
        f"backend: {report.backend}\n" + exact_note
    )
    _emit(doc, args, text)
    return 0


def cmd_simulate_continuous(args: argparse.Namespace) -> int:
    report = simulate_continuous(args.x, args.y, trials=args.trials, seed=args.seed,
                                 epsilon=args.epsilon, horizon=args.horizon,
                                 workers=args.workers)
    text = (
        f"continuous game from ({report.x:g}, {report.y:g})\n"
        f"trials: {report.trials}  seed: {report.seed}  epsilon: {report.epsilon:g}\n"
        f"p1 wins: {report.wins}  losses: {report.losses}  undecided: {report.undecided}\n"
        f"p_hat: {report.p_hat:.6f}  std_err: {report.std_err:.6f}\n"
        f"p_infinity: {p_infinity(args.x, args.y) if min(args.x, args.y) > 1 else float('nan'):.6f}\n"
        f"backend: {report.backend}\n"
    )
    _emit(report.to_dict(), args, text)
    return 0


def cmd_escape(args: argparse.Namespace) -> int:
    report = estimate_escape(args.alpha, trials=args.trials, seed=args.seed,
                             epsilon=args.epsilon, workers=args.workers)
    text = (
        f"escape from the weeds at alpha={report.alpha:g}\n"
        f"trials: {report.trials}  escapes: {report.escapes}  undecided: {report.undecided}\n"
        f"p_hat: {report.p_hat:.6f}  std_err: {report.std_err:.6f}  exact: {2.0 / report.alpha:.6f}\n"
        f"backend: {report.backend}\n"
    )
    _emit(report.to_dict(), args, text)
    return 0


def cmd_fairness(args: argparse.Namespace) -> int:
    steps = args.grid
    advantage_rows = []
    factor_rows = []
    for i in range(1, steps + 1):
        # alpha, beta sweep (1, 2]: exact dyadic steps keep output byte-stable
        t = 1.0 + i / steps
        advantage_rows.append((t, equal_pool_advantage(t)))
        factor_rows.append((t, fair_factor(t).factor))
    adv_lo = min(v for _, v in advantage_rows)
    adv_hi = max(v for _, v in advantage_rows)
    fac_lo = min(v for _, v in factor_rows)
    fac_hi = max(v for _, v in factor_rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["curve", "arg", "value"])
            for t, v in advantage_rows:
                writer.writerow(["equal-pool-advantage", f"{t:.12g}", f"{v:.12g}"])
            for t, v in factor_rows:
                writer.writerow(["fair-factor", f"{t:.12g}", f"{v:.12g}"])
    doc = {
        "grid": steps,
        "advantage": {"min": adv_lo, "max": adv_hi},
        "fair_factor": {"min": fac_lo, "max": fac_hi},
    }
    text = (
        f"equal-pool advantage over {steps} alphas in (1, 2]:"
        f" min {adv_lo:.12g} max {adv_hi:.12g} (band [5/8, 2/3])\n"
        f"fair handicap factor: min {fac_lo:.12g} max {fac_hi:.12g} (band [4/3, 3/2])\n"
    )
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import SessionStore, SnapshotError, create_app

    store = SessionStore()
    if args.snapshot and os.path.exists(args.snapshot):
        try:
            count = store.restore(args.snapshot)
        except SnapshotError as exc:
            print(f"cannot restore snapshot: {exc}", file=sys.stderr)
            return 1
        print(f"restored {count} session(s) from {args.snapshot}")
    app = create_app(store, snapshot_path=args.snapshot or None,
                     ui_origin=os.environ.get("GW_UI_ORIGIN", "*"))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guesswho",
        description="Exact solver, simulator, and advisor for the Guess Who? bidding game.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="exact value, region, and bid for one state")
    p.add_argument("--n", type=int, required=True, help="mover's pool size")
    p.add_argument("--m", type=int, required=True, help="opponent's pool size")
    _output_flags(p)
    p.set_defaults(fn=cmd_value)

    p = sub.add_parser("verify", help="check closed form against the DP ground truth")
    p.add_argument("--max-sum", type=int, default=64, help="verify all n + m <= MAX_SUM")
    _output_flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("solve", help="export the exact solve table")
    p.add_argument("--max-sum", type=int, default=64)
    p.add_argument("--out", required=True, help="output path")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("heatmap", help="value grid for the discrete game (CSV)")
    p.add_argument("--grid", type=int, default=32, help="grid covers 1..GRID on both axes")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_heatmap)

    p = sub.add_parser("heatmap-continuous", help="p_infinity over the L-shaped domain (CSV)")
    p.add_argument("--grid", type=int, default=16, help="samples per unit length")
    p.add_argument("--max", type=int, default=8, help="upper end of both axes")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_heatmap_continuous)

    p = sub.add_parser("simulate", help="Monte Carlo the discrete game")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p1", default="optimal", choices=sorted(STRATEGIES))
    p.add_argument("--p2", default="optimal", choices=sorted(STRATEGIES))
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exact", action="store_true",
                   help="also evaluate the p1 policy exactly against optimal play")
    _output_flags(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("simulate-continuous", help="Monte Carlo the continuous game")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    _output_flags(p)
    p.set_defaults(fn=cmd_simulate_continuous)

    p = sub.add_parser("escape", help="Monte Carlo the weeds escape probability")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--workers", type=int, default=1)
    _output_flags(p)
    p.set_defaults(fn=cmd_escape)

    p = sub.add_parser("fairness", help="equal-pool advantage band and fair handicap curve")
    p.add_argument("--grid", type=int, default=1024, help="sample count over (1, 2]")
    _output_flags(p)
    p.set_defaults(fn=cmd_fairness)

    p = sub.add_parser("serve", help="run the live advisor REST service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--snapshot", default=None, help="JSON file mirrored after every change")
    p.set_defaults(fn=cmd_serve)

    return parser


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    log.debug("backend: %s (available: %s)", active_backend(), ", ".join(available_backends()))
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
