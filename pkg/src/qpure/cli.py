"""Command line interface.

Exit codes: 0 success, 1 negative verdict (invalid channel, violated bound,
infeasible USD), 2 usage or dimension errors, 3 malformed input files.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import channels as chn
from . import fileformat as ff
from .errors import DimensionMismatch, InvalidRank, POutOfRange, QpureError
from .geometry import jordan_states, p_med, p_wcd, wcd
from .purify import optimal_purifier, product_bound
from .setanalysis import counter_example, two_state_criterion, usd_feasible
from .states import random_density, trace_distance

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_MALFORMED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _write_or_print(obj, path) -> None:
    if path:
        ff.write(path, obj)
    else:
        sys.stdout.write(ff.dumps(obj))


def _same_dim(*states) -> None:
    if len({s.dim for s in states}) != 1:
        raise DimensionMismatch("input states have different dimensions")


def analyze_report(rho1, rho2) -> dict:
    _same_dim(rho1, rho2)
    return {
        "trace_distance": trace_distance(rho1, rho2),
        "wcd": wcd(rho1, rho2),
        "jordan_angles": [float(x) for x in jordan_states(rho1, rho2).angles],
        "p_med": p_med(rho1, rho2),
        "p_wcd": p_wcd(rho1, rho2),
        "two_state_criterion": two_state_criterion(rho1, rho2).value,
    }


def cmd_gen(args) -> int:
    if args.dim < 1 or not 1 <= args.rank <= args.dim or args.seed < 0:
        raise UsageError(f"need 1 <= rank <= dim and seed >= 0 (got dim={args.dim}, rank={args.rank})")
    _write_or_print(random_density(args.dim, args.rank, args.seed), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    rho1, rho2 = ff.read_state(args.state1), ff.read_state(args.state2)
    _emit(analyze_report(rho1, rho2))
    return EXIT_OK


def cmd_purify(args) -> int:
    rho1, rho2 = ff.read_state(args.state1), ff.read_state(args.state2)
    _same_dim(rho1, rho2)
    bundle = optimal_purifier(rho1, rho2)
    ff.write(args.out, bundle.full)
    _emit(
        {
            "achieved_distance": bundle.achieved_distance,
            "wcd": wcd(rho1, rho2),
            "channel": str(args.out),
            "kraus_count": bundle.full.n_kraus,
        }
    )
    return EXIT_OK


def cmd_check(args) -> int:
    ch = ff.read_channel(args.channel)
    report = chn.validate(ch)
    _emit(
        {
            "ok": report.ok,
            "deviation": report.deviation,
            "dim_in": ch.dim_in,
            "dim_out": ch.dim_out,
            "trace_preserving": ch.trace_preserving,
        }
    )
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_apply(args) -> int:
    ch = ff.read_channel(args.channel)
    rho = ff.read_state(args.state)
    if rho.dim != ch.dim_in:
        raise DimensionMismatch(f"state dim {rho.dim}, channel input dim {ch.dim_in}")
    report = chn.validate(ch)
    if not report.ok:
        _emit({"ok": False, "deviation": report.deviation})
        return EXIT_NEGATIVE
    out = chn.apply(ch, rho)
    out = (out + out.conj().T) / 2
    _write_or_print(out, args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    rho1, rho2, s1, s2 = (ff.read_state(p) for p in (args.rho1, args.rho2, args.sigma1, args.sigma2))
    _same_dim(rho1, rho2)
    _same_dim(s1, s2)
    lhs, rhs = product_bound(rho1, rho2, s1, s2)
    holds = lhs >= rhs - 1e-9
    _emit(
        {
            "lhs": lhs,
            "rhs": rhs,
            "holds": holds,
            "wcd": wcd(rho1, rho2),
            "sigma_trace_distance": trace_distance(s1, s2),
        }
    )
    return EXIT_OK if holds else EXIT_NEGATIVE


def cmd_usd(args) -> int:
    states = [ff.read_state(p) for p in args.states]
    if len(states) < 2:
        raise UsageError("usd needs at least two states")
    _same_dim(*states)
    feasible = usd_feasible(states)
    _emit({"feasible": feasible, "n_states": len(states)})
    return EXIT_OK if feasible else EXIT_NEGATIVE


def cmd_counterexample(args) -> int:
    rho1, rho2 = counter_example(args.p)
    if args.out1:
        ff.write(args.out1, rho1)
    if args.out2:
        ff.write(args.out2, rho2)
    report = analyze_report(rho1, rho2)
    report["p"] = args.p
    report["spectra"] = [list(map(float, rho1.eigenvalues)), list(map(float, rho2.eigenvalues))]
    _emit(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpure", description="Purifying and reversible quantum channels."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="random Ginibre density operator")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="distances, Jordan angles and two-state criterion")
    p.add_argument("state1")
    p.add_argument("state2")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("purify", help="write the optimal purifying channel")
    p.add_argument("state1")
    p.add_argument("state2")
    p.add_argument("--out", required=True, help="channel file to write")
    p.set_defaults(func=cmd_purify)

    p = sub.add_parser("check", help="validate a channel file")
    p.add_argument("channel")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("apply", help="apply a channel to a state")
    p.add_argument("channel")
    p.add_argument("state")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("bound", help="product-state trace distance bound")
    for name in ("rho1", "rho2", "sigma1", "sigma2"):
        p.add_argument(name)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("usd", help="unambiguous discrimination feasibility")
    p.add_argument("states", nargs="+")
    p.set_defaults(func=cmd_usd)

    p = sub.add_parser("counterexample", help="equal-spectrum pair that is not essentially pure")
    p.add_argument("--p", type=float, default=0.25)
    p.add_argument("--out1")
    p.add_argument("--out2")
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ff.MalformedFile as exc:
        print(f"qpure: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (UsageError, DimensionMismatch, InvalidRank, POutOfRange) as exc:
        print(f"qpure: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QpureError as exc:
        print(f"qpure: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
