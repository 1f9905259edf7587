"""Command-line entry point: ``sweep``, ``projectors`` and ``div`` subcommands.

Exit codes: 0 success, 1 usage or input error, 2 a mathematical invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .divergence import kl_divergence, measured_divergence, quantum_relative_entropy
from .errors import UnivMeasError
from .experiment import SweepConfig, plot_script, run_sweep, universal_pvm, write_records
from .io import atomic_write, fmt, json_number
from .matkernel import DEFAULT_DIM_CAP
from .measurement import Pvm, measure, standard_pvm
from .quantum_state import parse_state_spec
from .schur_weyl import MAX_N, isotypic_pvm

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shared(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cluster-tol", type=float, default=1e-9)
    p.add_argument("--support-tol", type=float, default=1e-10)
    p.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="univmeas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sw = sub.add_parser("sweep", help="convergence sweep of the universal measurement")
    sw.add_argument("--k", type=int)
    sw.add_argument("--rho")
    sw.add_argument("--sigma")
    sw.add_argument("--n-min", type=int, default=1)
    sw.add_argument("--n-max", type=int)
    sw.add_argument("--out", help="output path; .json selects JSON, anything else CSV")
    sw.add_argument("--plot-script", help="write a gnuplot recipe for the CSV here")
    sw.add_argument("--bits", action="store_true", help="display values in bits")
    _shared(sw)

    pr = sub.add_parser("projectors", help="emit isotypic (or universal) projectors")
    pr.add_argument("--n", type=int)
    pr.add_argument("--k", type=int)
    pr.add_argument("--rho", help="emit the universal PVM for this state instead")
    pr.add_argument("--out", default="projectors.json")
    pr.add_argument("--summary", help="summary CSV path (default: standard output)")
    pr.add_argument("--check", action="store_true")
    _shared(pr)

    dv = sub.add_parser("div", help="one-shot divergences in nats")
    dv.add_argument("--rho")
    dv.add_argument("--sigma")
    dv.add_argument("--measure", help="'standard' or a PVM JSON file")
    dv.add_argument("--bits", action="store_true")
    _shared(dv)
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name.lstrip("-").replace("-", "_")) is None:
            raise UsageError(f"missing required flag: {name}")


def _display(x, bits):
    if bits and isinstance(x, float):
        x = x / math.log(2)
    return json_number(x)


def cmd_sweep(args) -> int:
    _require(args, "--rho", "--sigma")
    cfg = SweepConfig(
        args.rho,
        args.sigma,
        n_min=args.n_min,
        n_max=args.n_max,
        cluster_tol=args.cluster_tol,
        support_tol=args.support_tol,
        seed=args.seed,
        dim_cap=args.dim_cap,
        output=args.out,
    )
    rho, _ = cfg.resolve()
    if args.k is not None and args.k != rho.dim:
        raise UsageError(f"--k {args.k} does not match state dimension {rho.dim}")
    records = run_sweep(cfg)
    if args.out:
        write_records(records, args.out)
        if args.plot_script:
            atomic_write(args.plot_script, plot_script(args.out))
    else:
        sys.stdout.write(_records_table(records, args.bits))
    if not records[0].finite:
        print("warning: supp(sigma) is not contained in supp(rho); target is +inf", file=sys.stderr)
    problems = [v for r in records for v in r.violations()]
    for p in problems:
        print(f"invariant violated: {p}", file=sys.stderr)
    return EXIT_INVARIANT if problems else EXIT_OK


def _records_table(records, bits) -> str:
    scale = 1 / math.log(2) if bits else 1.0
    unit = "bits" if bits else "nats"
    lines = [f"{'n':>3} {'target':>12} {'measured':>12} {'pinched':>12} {'gap':>12} {'bound':>12} outcomes ({unit})"]
    for r in records:
        vals = [r.target, r.measured_rate, r.pinched_rate, r.gap, r.bound]
        lines.append(f"{r.n:>3} " + " ".join(f"{v * scale:12.6g}" for v in vals) + f" {r.outcome_count}")
    return "\n".join(lines) + "\n"


def cmd_projectors(args) -> int:
    _require(args, "--n", "--k")
    if not 1 <= args.n <= MAX_N:
        raise UsageError(f"--n must lie in [1, {MAX_N}], got {args.n}")
    if args.k < 1 or args.k**args.n > args.dim_cap:
        raise UsageError(f"--k {args.k} out of range (k^n must not exceed {args.dim_cap})")
    iso = isotypic_pvm(args.n, args.k, args.dim_cap)
    if args.rho:
        rho = parse_state_spec(args.rho, args.seed)
        if rho.dim != args.k:
            raise UsageError(f"--rho has dimension {rho.dim}, expected --k {args.k}")
        pvm = universal_pvm(rho, args.n, args.cluster_tol, args.dim_cap)
    else:
        pvm = iso
    atomic_write(args.out, json.dumps(pvm.to_list()))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if pvm is iso:
        writer.writerow(["lambda", "d_lambda", "m_lambda", "rank"])
        for lam, d, m, r in iso.summary():
            writer.writerow([str(lam), d, m, r])
    else:
        writer.writerow(["label", "rank"])
        for label, r in zip(pvm.labels, pvm.ranks()):
            writer.writerow([label, r])
    if args.summary:
        atomic_write(args.summary, buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())

    if args.check:
        problems = iso.check() + (pvm.check() if pvm is not iso else [])
        for p in problems:
            print(f"check failed: {p}", file=sys.stderr)
        print(f"checks: {'FAIL' if problems else 'PASS'}", file=sys.stderr)
        return EXIT_INVARIANT if problems else EXIT_OK
    return EXIT_OK


def _load_pvm(spec, dim) -> Pvm:
    if spec == "standard":
        return standard_pvm(dim)
    try:
        with open(spec, encoding="utf-8") as fh:
            return Pvm.from_list(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise UnivMeasError(f"cannot read measurement {spec!r}: {exc}") from exc


def cmd_divergence(args) -> int:
    _require(args, "--rho", "--sigma")
    rho = parse_state_spec(args.rho, args.seed)
    sigma = parse_state_spec(args.sigma, args.seed + 1)
    if rho.dim != sigma.dim:
        raise UsageError(f"--rho has dimension {rho.dim} but --sigma has {sigma.dim}")
    out = {"quantum": quantum_relative_entropy(sigma, rho, args.support_tol)}
    if args.measure:
        m = _load_pvm(args.measure, rho.dim)
        out["measured"] = measured_divergence(m, sigma, rho)
        out["classical"] = kl_divergence(measure(m, sigma), measure(m, rho))
    if args.bits:
        out["units"] = "bits"
    print(json.dumps({key: _display(v, args.bits) for key, v in out.items()}))
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "projectors": cmd_projectors, "div": cmd_divergence}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: sweep, projectors or div")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnivMeasError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
