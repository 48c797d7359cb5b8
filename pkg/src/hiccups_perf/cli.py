"""Command-line interface.

One executable, seven subcommands: ``chain`` (stationary distribution of
the backoff chain), ``throughput`` (one operating point), ``cost``,
``efficiency``, ``table`` (cost/efficiency grids), ``simulate`` (Monte
Carlo) and ``sweep`` (parameter sweeps for plotting).

Data goes to stdout (or ``--output``) as CSV, Markdown or JSON;
diagnostics go to stderr. Numeric output is fixed-format: probabilities
with 6 decimals, normalized throughput with 4, Mbps with 2, so identical
inputs always produce byte-identical output. Exit codes: 0 success, 2
argument errors, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .backoff_chain import ChainParams, closed_form_solution, stationary_oracle
from .errors import NumericalError
from .mc_sim import SimConfig, replicate
from .phy_profiles import resolve_profile
from .saturation_model import NetworkParams, solve_baseline, solve_hiccups
from .stego_metrics import (DEFAULT_DELTA_FERS, DEFAULT_FER_PRIMES,
                            efficiency, table_cost, table_efficiency)

# column kinds drive the fixed output formats
_FORMATS = {
    "prob": "{:.6f}",
    "norm": "{:.4f}",
    "mbps": "{:.2f}",
    "sci": "{:.6e}",
}
_JSON_DIGITS = {"prob": 6, "norm": 4, "mbps": 2}


def _fmt(value, kind: str) -> str:
    if kind in ("int", "text"):
        return str(value)
    return _FORMATS[kind].format(value)


def _json_value(value, kind: str):
    if kind in ("int", "text"):
        return value
    if kind == "sci":
        return float(_FORMATS["sci"].format(value))
    return round(value, _JSON_DIGITS[kind])


class Report:
    """Tabular result: named, typed columns plus value rows."""

    def __init__(self, columns: list[tuple[str, str]]):
        self.columns = columns
        self.rows: list[tuple] = []

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(values)

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow([name for name, _ in self.columns])
            for row in self.rows:
                writer.writerow([_fmt(v, k) for v, (_, k) in zip(row, self.columns)])
            return buf.getvalue()
        if fmt == "md":
            lines = ["| " + " | ".join(name for name, _ in self.columns) + " |",
                     "|" + "|".join(" --- " for _ in self.columns) + "|"]
            for row in self.rows:
                cells = [_fmt(v, k) for v, (_, k) in zip(row, self.columns)]
                lines.append("| " + " | ".join(cells) + " |")
            return "\n".join(lines) + "\n"
        if fmt == "json":
            records = [
                {name: _json_value(v, kind)
                 for v, (name, kind) in zip(row, self.columns)}
                for row in self.rows
            ]
            return json.dumps(records, indent=2) + "\n"
        raise ValueError(f"unknown format {fmt!r}")


def _common_flags(parser: argparse.ArgumentParser, profile: bool = True):
    if profile:
        parser.add_argument("--profile", default="erp-ofdm-54",
                            help="built-in profile name or path to a 'key = value' "
                                 "profile file (durations in us, rate in Mbps)")
    parser.add_argument("--format", choices=("csv", "md", "json"), default="csv",
                        help="output format for the data stream (default csv)")
    parser.add_argument("--output", default="-",
                        help="output path for the data stream, '-' for stdout")


def _net_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--n", type=int, default=10,
                        help="number of saturated stations (default 10)")
    parser.add_argument("--frame-bytes", type=int, default=1000,
                        help="frame length L in bytes (default 1000)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiccups-perf",
        description="Saturation throughput, cost and efficiency of the "
                    "corrupted-frame covert channel in 802.11 DCF WLANs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chain", help="backoff-chain stationary distribution")
    p.add_argument("--w0", type=int, default=16,
                   help="initial contention window in slots (default 16)")
    p.add_argument("--m", type=int, default=5,
                   help="maximum backoff stage (default 5)")
    p.add_argument("--m-prime", type=int, default=5,
                   help="maximum window-doubling exponent (default 5)")
    p.add_argument("--p-coll", type=float, default=0.0,
                   help="freeze/collision probability in [0,1) (default 0)")
    p.add_argument("--p-f", type=float, default=1.0,
                   help="per-attempt failure probability in [0,1] (default 1: "
                        "corrupted-frame mode)")
    p.add_argument("--solver", choices=("closed", "oracle"), default=None,
                   help="closed form (p-f=1 only) or brute-force oracle "
                        "(default: closed when p-f=1, else oracle)")
    _common_flags(p, profile=False)

    p = sub.add_parser("throughput", help="saturation throughput at one operating point")
    p.add_argument("--mode", choices=("hiccups", "baseline"), default="hiccups",
                   help="covert corrupted-frame channel or plain 802.11 (default hiccups)")
    _net_flags(p)
    p.add_argument("--fer", type=float, default=0.0,
                   help="data-frame error probability in [0,1] (default 0)")
    p.add_argument("--error-feedback", action="store_true",
                   help="baseline only: errored frames escalate backoff like collisions")
    p.add_argument("--quantized", action="store_true",
                   help="round frame airtime up to whole OFDM symbols")
    _common_flags(p)

    p = sub.add_parser("cost", help="WLAN throughput decline caused by the covert channel")
    _net_flags(p)
    p.add_argument("--fer-prime", type=float, default=0.0,
                   help="frame error rate without the covert channel (default 0)")
    p.add_argument("--delta-fer", type=float, default=0.05,
                   help="frame error rate injected by the covert channel (default 0.05)")
    _common_flags(p)

    p = sub.add_parser("efficiency", help="covert-channel throughput")
    _net_flags(p)
    p.add_argument("--delta-fer", type=float, default=0.05,
                   help="frame error rate injected by the covert channel (default 0.05)")
    _common_flags(p)

    p = sub.add_parser("table", help="cost or efficiency grid over the default "
                                     "FER'/dFER values")
    p.add_argument("--which", choices=("cost", "efficiency"), required=True,
                   help="which grid to produce")
    p.add_argument("--n", type=int, default=10,
                   help="station count for the cost grid (default 10)")
    p.add_argument("--n-list", type=int, nargs="+", default=[5, 10],
                   help="station counts for the efficiency grid (default 5 10)")
    p.add_argument("--frame-bytes", type=int, default=1000,
                   help="frame length L in bytes (default 1000)")
    p.add_argument("--fer-prime-list", type=float, nargs="+",
                   default=list(DEFAULT_FER_PRIMES),
                   help="cost-grid rows (default 0 0.0769 0.5507)")
    p.add_argument("--delta-fer-list", type=float, nargs="+",
                   default=list(DEFAULT_DELTA_FERS),
                   help="grid columns (default 0.01 .. 0.05)")
    _common_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of one operating point")
    p.add_argument("--mode", choices=("hiccups", "baseline"), default="hiccups",
                   help="protocol mode (default hiccups)")
    _net_flags(p)
    p.add_argument("--fer", type=float, default=0.95,
                   help="data-frame error probability in [0,1] (default 0.95)")
    p.add_argument("--slots", type=int, default=1_000_000,
                   help="channel-state epochs per replication (default 1000000)")
    p.add_argument("--warmup-slots", type=int, default=None,
                   help="epochs discarded before measuring (default: 1%% of "
                        "slots, at least 10000)")
    p.add_argument("--seed", type=int, default=1,
                   help="64-bit RNG seed (default 1)")
    p.add_argument("--replications", type=int, default=1,
                   help="independent replications pooled into the estimate (default 1)")
    p.add_argument("--error-feedback", action="store_true",
                   help="baseline only: errored frames escalate backoff")
    _common_flags(p)

    p = sub.add_parser("sweep", help="sweep fer or n and emit one row per point")
    p.add_argument("--var", choices=("fer", "n"), required=True,
                   help="swept variable")
    p.add_argument("--from", dest="start", type=float, required=True,
                   help="first value of the sweep")
    p.add_argument("--to", dest="stop", type=float, required=True,
                   help="last value of the sweep (inclusive)")
    p.add_argument("--steps", type=int, default=None,
                   help="number of points (default: 101 for fer, the integer "
                        "range for n)")
    p.add_argument("--mode", choices=("hiccups", "baseline"), default="hiccups",
                   help="protocol mode (default hiccups)")
    _net_flags(p)
    p.add_argument("--fer", type=float, default=0.0,
                   help="fixed fer when sweeping n (default 0)")
    p.add_argument("--error-feedback", action="store_true",
                   help="baseline only: errored frames escalate backoff")
    p.add_argument("--quantized", action="store_true",
                   help="round frame airtime up to whole OFDM symbols")
    _common_flags(p)

    return parser


def _cmd_chain(args) -> Report:
    params = ChainParams(args.w0, args.m, args.m_prime, args.p_coll, args.p_f)
    solver = args.solver or ("closed" if args.p_f == 1.0 else "oracle")
    if solver == "closed":
        solution = closed_form_solution(params)
    else:
        solution = stationary_oracle(params)
    report = Report([("i", "int"), ("k", "int"), ("b", "sci"), ("tau", "prob")])
    for (i, k), b in sorted(solution.b.items()):
        report.add(i, k, b, solution.tau)
    return report


_POINT_COLUMNS = [
    ("mode", "text"), ("n", "int"), ("frame_bytes", "int"), ("fer", "prob"),
    ("tau", "prob"), ("p_coll", "prob"),
    ("p_idle", "prob"), ("p_success", "prob"),
    ("p_collision", "prob"), ("p_err_data", "prob"),
    ("s_mbps", "mbps"), ("s_norm", "norm"),
]


def _point_row(mode, net, point):
    return (mode, net.n, net.frame_bytes, net.fer, point.tau, point.p_coll,
            *point.probs.as_tuple(), point.s_mbps, point.s_norm)


def _solve_point(mode, net, error_feedback=False, quantized=False):
    if mode == "hiccups":
        return solve_hiccups(net, quantized=quantized)
    return solve_baseline(net, error_feedback=error_feedback, quantized=quantized)


def _cmd_throughput(args) -> Report:
    profile = resolve_profile(args.profile)
    net = NetworkParams(profile, args.n, args.frame_bytes, args.fer)
    point = _solve_point(args.mode, net, args.error_feedback, args.quantized)
    report = Report(_POINT_COLUMNS)
    report.add(*_point_row(args.mode, net, point))
    return report


_COST_COLUMNS = [
    ("n", "int"), ("frame_bytes", "int"),
    ("fer_prime", "prob"), ("delta_fer", "prob"),
    ("kappa_norm", "norm"), ("kappa_mbps", "mbps"),
    ("kappa_approx_norm", "norm"), ("kappa_approx_mbps", "mbps"),
]


def _cost_row(n, frame_bytes, rate, c):
    return (n, frame_bytes, c.fer_prime, c.delta_fer,
            c.kappa_norm, c.kappa_mbps,
            c.kappa_approx_mbps / rate, c.kappa_approx_mbps)


def _cmd_cost(args) -> Report:
    profile = resolve_profile(args.profile)
    grid = table_cost(profile, args.n, args.frame_bytes,
                      fer_primes=[args.fer_prime], delta_fers=[args.delta_fer])
    report = Report(_COST_COLUMNS)
    report.add(*_cost_row(args.n, args.frame_bytes, profile.rate_mbps, grid[0][0]))
    return report


_EFF_COLUMNS = [
    ("n", "int"), ("frame_bytes", "int"),
    ("delta_fer", "prob"), ("fer_h", "prob"),
    ("epsilon_norm", "norm"), ("epsilon_mbps", "mbps"),
]


def _cmd_efficiency(args) -> Report:
    profile = resolve_profile(args.profile)
    result = efficiency(profile, args.n, args.frame_bytes, args.delta_fer)
    report = Report(_EFF_COLUMNS)
    report.add(args.n, args.frame_bytes, result.delta_fer, result.fer_h,
               result.epsilon_norm, result.epsilon_mbps)
    return report


def _grid_report(first_label, first_values, delta_fers, cells) -> Report:
    """Markdown grid in the reference-table cell style 'norm (mbps)'."""
    columns = [(first_label, "text")]
    columns += [(f"dFER={df:g}", "text") for df in delta_fers]
    report = Report(columns)
    for label, row in zip(first_values, cells):
        report.add(str(label), *(f"{n:.4f} ({m:.2f})" for n, m in row))
    return report


def _cmd_table(args) -> Report:
    profile = resolve_profile(args.profile)
    if args.which == "cost":
        grid = table_cost(profile, args.n, args.frame_bytes,
                          fer_primes=args.fer_prime_list,
                          delta_fers=args.delta_fer_list)
        if args.format == "md":
            # grid cells carry the linearized cost, like the published tables
            cells = [[(c.kappa_approx_mbps / profile.rate_mbps, c.kappa_approx_mbps)
                      for c in row] for row in grid]
            return _grid_report("FER'", [f"{fp:g}" for fp in args.fer_prime_list],
                                args.delta_fer_list, cells)
        report = Report(_COST_COLUMNS)
        for row in grid:
            for c in row:
                report.add(*_cost_row(args.n, args.frame_bytes, profile.rate_mbps, c))
        return report

    grid = table_efficiency(profile, args.n_list, args.frame_bytes,
                            delta_fers=args.delta_fer_list)
    if args.format == "md":
        cells = [[(e.epsilon_norm, e.epsilon_mbps) for e in row] for row in grid]
        return _grid_report("n", args.n_list, args.delta_fer_list, cells)
    report = Report(_EFF_COLUMNS)
    for n, row in zip(args.n_list, grid):
        for e in row:
            report.add(n, args.frame_bytes, e.delta_fer, e.fer_h,
                       e.epsilon_norm, e.epsilon_mbps)
    return report


_SIM_COLUMNS = [
    ("mode", "text"), ("n", "int"), ("frame_bytes", "int"), ("fer", "prob"),
    ("slots", "int"), ("warmup_slots", "int"), ("seed", "int"),
    ("replications", "int"),
    ("tau_hat", "prob"), ("tau_hat_stderr", "sci"),
    ("p_coll_hat", "prob"), ("p_coll_hat_stderr", "sci"),
    ("p_idle", "prob"), ("p_success", "prob"),
    ("p_collision", "prob"), ("p_err_data", "prob"),
    ("s_hat_mbps", "mbps"), ("s_hat_stderr", "sci"),
]


def _cmd_simulate(args) -> Report:
    profile = resolve_profile(args.profile)
    net = NetworkParams(profile, args.n, args.frame_bytes, args.fer)
    config = SimConfig(net=net, mode=args.mode, slots=args.slots,
                       seed=args.seed, warmup_slots=args.warmup_slots,
                       error_feedback=args.error_feedback)
    result = replicate(config, args.replications)
    report = Report(_SIM_COLUMNS)
    report.add(args.mode, args.n, args.frame_bytes, args.fer,
               args.slots, config.warmup(), args.seed, result.replications,
               result.tau_hat, result.tau_hat_stderr,
               result.p_coll_hat, result.p_coll_hat_stderr,
               *result.state_freqs.as_tuple(),
               result.s_hat_mbps, result.s_hat_stderr)
    return report


def _cmd_sweep(args) -> Report:
    profile = resolve_profile(args.profile)
    if args.var == "fer":
        steps = args.steps if args.steps is not None else 101
        if steps < 2:
            raise ValueError("sweep needs at least 2 steps")
        values = [args.start + (args.stop - args.start) * i / (steps - 1)
                  for i in range(steps)]
        points = [(v, NetworkParams(profile, args.n, args.frame_bytes, v))
                  for v in values]
    else:
        lo, hi = int(args.start), int(args.stop)
        if hi < lo:
            raise ValueError("--to must be >= --from when sweeping n")
        points = [(n, NetworkParams(profile, n, args.frame_bytes, args.fer))
                  for n in range(lo, hi + 1)]

    var_kind = "prob" if args.var == "fer" else "int"
    report = Report([(args.var, var_kind), ("tau", "prob"), ("p_coll", "prob"),
                     ("s_mbps", "mbps"), ("s_norm", "norm")])
    for value, net in points:
        point = _solve_point(args.mode, net, args.error_feedback, args.quantized)
        report.add(value, point.tau, point.p_coll, point.s_mbps, point.s_norm)
    return report


_COMMANDS = {
    "chain": _cmd_chain,
    "throughput": _cmd_throughput,
    "cost": _cmd_cost,
    "efficiency": _cmd_efficiency,
    "table": _cmd_table,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _COMMANDS[args.command](args)
        text = report.render(args.format)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
