"""Command-line front end: ``cqpolar capacity|construct|simulate|compare``.

Exit codes: 0 success, 1 parameter or I/O error, 2 size-guard violation,
3 numeric anomaly.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

import numpy as np

from . import capacity as cap
from .channel import BpskChannel
from .classical import Receiver, construct_classical, induce_dmc, simulate_dmc
from .construction import (N_EXACT, ConstructionMode, exact_profile, proposition1_bound,
                           read_code, select_information_set, surrogate_profile, write_code,
                           format_code, check_exact_size)
from .decoder import exact_block_error, simulate_quantum
from .exceptions import GuardError, NumericAnomaly, ParameterError
from .report import RunReport, error_rate, write_trial_log

ARMS = ("QUANTUM_EXACT", "QUANTUM_MC", "CLASSICAL_MC")
Z0_NOTE = ("Bhattacharyya parameter of the Dolinar BSC equals sqrt(F) = exp(-2E), so the classical "
           "and quantum surrogate profiles coincide; the operative difference is the capacity gap C_1 < C_inf")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ParameterError(f"cannot write {path}: {exc.strerror}") from exc
    with fh:
        yield fh


def _energy_grid(args):
    if args.points < 1:
        raise ParameterError("--points must be >= 1")
    if not 0 < args.e_min <= args.e_max:
        raise ParameterError("need 0 < --e-min <= --e-max")
    if args.log:
        return np.geomspace(args.e_min, args.e_max, args.points)
    return np.linspace(args.e_min, args.e_max, args.points)


def cmd_capacity(args) -> int:
    try:
        schemes = [cap.Scheme(s.strip().upper()) for s in args.schemes.split(",")] if args.schemes else list(cap.Scheme)
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc
    points = cap.efficiency_table(_energy_grid(args), schemes, ppm_order=args.ppm_order)
    with _open_out(args.out) as fh:
        cap.write_capacity_csv(points, fh)
    return 0


def build_code(N, energy, *, K=None, beta=None, mode="SURROGATE_UPPER", frozen="zero", seed=None, max_n=N_EXACT):
    channel = BpskChannel(energy)
    mode = ConstructionMode(mode)
    if mode is ConstructionMode.EXACT:
        check_exact_size(N, max_n)
        profile = exact_profile(N, channel.embedding(), max_n=max_n)
    else:
        profile = surrogate_profile(N, channel.overlap())
    return select_information_set(profile, K=K, beta=beta, frozen=frozen, seed=seed, energy=energy)


def cmd_construct(args) -> int:
    code = build_code(args.N, args.E, K=args.K, beta=args.beta, mode=_mode(args.mode),
                      frozen=args.frozen, seed=args.seed, max_n=args.max_n)
    if args.out in (None, "-"):
        sys.stdout.write(format_code(code))
    else:
        try:
            write_code(code, args.out)
        except OSError as exc:
            raise ParameterError(f"cannot write {args.out}: {exc.strerror}") from exc
    if code.K == 0:
        print("warning: information set is empty", file=sys.stderr)
    return 0


def _mode(name):
    name = name.upper()
    return {"SURROGATE": "SURROGATE_UPPER"}.get(name, name)


def _write_log(path, records):
    if path:
        with _open_out(path) as fh:
            write_trial_log(records, fh)


def _quantum_exact_rows(report, code, threads):
    check_exact_size(code.N)
    pe_fixed = exact_block_error(code, threads=threads)
    pe_avg = exact_block_error(code, frozen_average="all", threads=threads)
    bound_raw = proposition1_bound(code, clamp=False)
    report.add("quantum_exact_block_error", pe_fixed, "exact finite-N (code frozen bits)")
    report.add("quantum_exact_block_error_frozen_avg", pe_avg, "exact finite-N (frozen-averaged)")
    report.add("proposition1_bound", min(1.0, bound_raw), "bound")
    report.add("proposition1_bound_raw", bound_raw, "bound")
    report.add("bound_check_pass", pe_avg <= min(1.0, bound_raw), "bound check (frozen-averaged)")
    return pe_avg


def _mc_rows(report, prefix, result, label):
    pe, lo, hi = error_rate(result.errors, result.trials)
    report.add(f"{prefix}_block_error", pe, label, (lo, hi))
    report.add(f"{prefix}_trials", result.trials, label)


def cmd_simulate(args) -> int:
    try:
        code = read_code(args.code)
    except OSError as exc:
        raise ParameterError(f"cannot read {args.code}: {exc.strerror}") from exc
    if code.energy is None:
        raise ParameterError("code file has no E= line")
    arm = args.arm.upper()
    report = RunReport("simulate", {"code": args.code, "arm": arm, "trials": args.trials, "N": code.N,
                                    "K": code.K, "E": code.energy, "mode": code.profile.mode.value},
                       seed=args.seed)
    anomalies = 0
    if arm == "QUANTUM_EXACT":
        _quantum_exact_rows(report, code, args.threads)
    elif arm == "QUANTUM_MC":
        check_exact_size(code.N)
        res = simulate_quantum(code, args.trials, args.seed, threads=args.threads)
        anomalies = res.anomalies
        _mc_rows(report, "quantum_mc", res, "Monte Carlo finite-N")
        report.add("numeric_anomalies", res.anomalies, "Monte Carlo finite-N")
        bound = proposition1_bound(code)
        report.add("proposition1_bound", bound, "bound")
        report.add("bound_check_pass", res.block_error <= bound, "bound check (point estimate)")
        _write_log(args.trial_log, res.records)
    elif arm == "CLASSICAL_MC":
        dmc = induce_dmc(BpskChannel(code.energy), args.receiver)
        res = simulate_dmc(dmc, code, args.trials, args.seed, threads=args.threads)
        _mc_rows(report, "classical_mc", res, f"Monte Carlo finite-N ({dmc.source.value} {dmc.kind})")
        report.add("classical_mc_bit_error", res.bit_error, "Monte Carlo finite-N")
        _write_log(args.trial_log, res.records)
    else:
        raise ParameterError(f"unknown arm {args.arm!r}; choose from {', '.join(ARMS)}")
    report.add("profile_mode", "", code.profile.mode.value)
    with _open_out(args.out) as fh:
        report.write(fh)
    return 3 if anomalies else 0


def compare(E, N, K, trials, seed, *, threads=1, trial_log=None) -> RunReport:
    channel = BpskChannel(E)
    report = RunReport("compare", {"E": E, "N": N, "K": K, "trials": trials}, seed=seed)
    c1, cinf = cap.dolinar_capacity(E), cap.holevo_bpsk(E)
    report.add("C_1", c1, "capacity-level (exact)")
    report.add("C_hom", cap.homodyne_capacity(E), "capacity-level (exact)")
    report.add("C_kennedy", cap.kennedy_capacity(E), "capacity-level (exact)")
    report.add("C_inf", cinf, "capacity-level (exact)")
    report.add("capacity_gap", cinf - c1, "capacity-level (exact)")
    report.add("rate", K / N, "code parameter")
    report.notes.append(Z0_NOTE)
    report.notes.append("capacity-level rows are exact facts; finite-N rows are exact or Monte Carlo "
                        "observations at this (N, K) and say nothing about asymptotic rates")

    exact = N <= N_EXACT
    code = build_code(N, E, K=K, mode="EXACT" if exact else "SURROGATE_UPPER")
    report.add("quantum_info_set", "", ",".join(map(str, code.info_set)))
    if exact:
        _quantum_exact_rows(report, code, threads)
        res = simulate_quantum(code, trials, seed, threads=threads)
        _mc_rows(report, "quantum_mc", res, "Monte Carlo finite-N")
        report.add("numeric_anomalies", res.anomalies, "Monte Carlo finite-N")
        if trial_log:
            _write_log(f"{trial_log}.quantum.csv", res.records)
    else:
        report.add("proposition1_bound", proposition1_bound(code), "bound (surrogate profile)")
        report.notes.append(f"N > {N_EXACT}: quantum arm not simulated")

    for rx in Receiver:
        ccode = construct_classical(channel, rx, N, K)
        dmc = induce_dmc(channel, rx)
        res = simulate_dmc(dmc, ccode, trials, seed, threads=threads)
        name = f"classical_{rx.value.lower()}"
        report.add(f"{name}_info_set", "", ",".join(map(str, ccode.info_set)))
        report.add(f"{name}_bhattacharyya", dmc.bhattacharyya, "channel parameter")
        _mc_rows(report, f"{name}_mc", res, f"Monte Carlo finite-N ({dmc.kind})")
        if trial_log:
            _write_log(f"{trial_log}.{rx.value.lower()}.csv", res.records)
    report.add("sqrt_F", channel.overlap(), "channel parameter")
    return report


def cmd_compare(args) -> int:
    report = compare(args.E, args.N, args.K, args.trials, args.seed, threads=args.threads,
                     trial_log=args.trial_log)
    with _open_out(args.out) as fh:
        report.write(fh)
    return 0


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--emit-params", action="store_true", help="echo parsed parameters as JSON on stderr")

    parser = _Parser(prog="cqpolar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("capacity", parents=[common], help="capacity / photon-efficiency table (CSV)")
    p.add_argument("--e-min", type=float, default=1e-4)
    p.add_argument("--e-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=50)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--log", dest="log", action="store_true", default=True)
    grid.add_argument("--linear", dest="log", action="store_false")
    p.add_argument("--schemes", default="", help="comma-separated scheme names (default: all)")
    p.add_argument("--ppm-order", type=int, default=None)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("construct", parents=[common], help="build a code file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--E", type=float, required=True)
    rule = p.add_mutually_exclusive_group(required=True)
    rule.add_argument("--K", type=int)
    rule.add_argument("--beta", type=float)
    p.add_argument("--mode", default="SURROGATE_UPPER", help="EXACT or SURROGATE_UPPER")
    p.add_argument("--frozen", choices=("zero", "random"), default="zero")
    p.add_argument("--max-n", type=int, default=N_EXACT, help="N_exact guard (at most 10)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", parents=[common], help="error rates of one code")
    p.add_argument("--code", required=True)
    p.add_argument("--arm", required=True, help="|".join(ARMS))
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--receiver", default="DOLINAR", choices=[r.value for r in Receiver])
    p.add_argument("--trial-log", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", parents=[common], help="quantum vs classical arms at one (E, N, K)")
    p.add_argument("--E", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--trial-log", default=None, help="prefix; writes <prefix>.<arm>.csv")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.emit_params:
        params = {k: v for k, v in vars(args).items() if k != "func"}
        print(json.dumps(params, sort_keys=True, default=str), file=sys.stderr)
    try:
        if args.threads < 1:
            raise ParameterError("--threads must be >= 1")
        return args.func(args)
    except GuardError as exc:
        print(f"cqpolar: guard violation: {exc}", file=sys.stderr)
        return 2
    except NumericAnomaly as exc:
        print(f"cqpolar: numeric anomaly: {exc}", file=sys.stderr)
        return 3
    except ParameterError as exc:
        print(f"cqpolar: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
