"""Command-line interface for the five-qubit code experiments.

Subcommands mirror the experiment set: prepare, syndrome-grid,
logical-qpt, decode, compile and report.  Every run writes a
self-describing JSON record into ``--out``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments, report


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None,
                        help="YAML config file (default: bundled profile)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed recorded in and used by the run")
    parser.add_argument("--shots", type=int, default=None,
                        help="shots for sampled estimates (0 disables them)")
    parser.add_argument("--noise", choices=experiments.NOISE_MODES,
                        default=None, help="noise mode")
    parser.add_argument("--tphi-mode", choices=("pure-dephasing", "t2star"),
                        default=None, help="how T_phi is derived from T2*")
    parser.add_argument("--out", default="results",
                        help="output directory for result records")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiveqec",
        description="Simulate the five-qubit perfect code experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="encode a logical state")
    p.add_argument("state", choices=("0", "1", "+", "-", "+i", "-i", "T"))
    _add_common(p)

    p = sub.add_parser("syndrome-grid",
                       help="stabilizer signatures of injected errors")
    p.add_argument("--weight", type=int, choices=(1, 2), default=1)
    _add_common(p)

    p = sub.add_parser("logical-qpt",
                       help="process tomography of a transversal logical gate")
    p.add_argument("gate", choices=("X", "Y", "Z"))
    _add_common(p)

    p = sub.add_parser("decode", help="encode-decode round trip")
    _add_common(p)

    p = sub.add_parser("compile",
                       help="re-derive the eight-CZ encoder numerically")
    _add_common(p)

    p = sub.add_parser("report",
                       help="tables and figures from recorded results")
    p.add_argument("records", help="directory holding result records")
    p.add_argument("--out", default=None,
                   help="report directory (default: <records>/report)")
    return parser


def _config_from_args(args) -> experiments.ExperimentConfig:
    return experiments.ExperimentConfig.from_yaml(
        args.config, seed=args.seed, shots=args.shots,
        noise_mode=args.noise, tphi_mode=getattr(args, "tphi_mode", None))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "report":
        manifest = report.generate_report(args.records, args.out)
        print(f"report: {manifest['status']}, {manifest['records']} record(s),"
              f" {len(manifest['figures'])} figure(s)")
        return 0

    try:
        cfg = _config_from_args(args)
    except (OSError, ValueError, KeyError) as err:
        print(f"error: cannot load config: {err}", file=sys.stderr)
        return 1
    out = Path(args.out)
    try:
        if args.command == "prepare":
            record = experiments.run_prepare(args.state, cfg)
        elif args.command == "syndrome-grid":
            record = experiments.run_syndrome_grid(args.weight, cfg)
        elif args.command == "logical-qpt":
            record = experiments.run_logical_qpt(args.gate, cfg)
        elif args.command == "decode":
            record = experiments.run_decode(cfg)
        elif args.command == "compile":
            out.mkdir(parents=True, exist_ok=True)
            record = experiments.run_compile(cfg, out)
        else:  # pragma: no cover
            raise AssertionError(args.command)
    except (ValueError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    path = record.save(out)
    headline = {k: v for k, v in record.metrics.items()
                if isinstance(v, (int, float)) and not isinstance(v, bool)}
    summary = ", ".join(
        f"{k}={v:.4f}" if isinstance(v, float) else f"{k}={v}"
        for k, v in sorted(headline.items()))
    print(f"{record.experiment}: {summary}")
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
