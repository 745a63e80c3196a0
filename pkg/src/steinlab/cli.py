"""``stein-lab`` command line entry point.

Exit codes: 0 all verdicts pass, 1 usage or input error, 2 budget exceeded,
3 support violation, 4 no admissible block length, 5 a verdict failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .experiments import (
    EXIT_BUDGET,
    EXIT_NO_BLOCK_LENGTH,
    EXIT_OK,
    EXIT_SUPPORT,
    EXIT_USAGE,
    EXIT_VERDICT,
    RUNNERS,
    BlockLengthNotFound,
    ExperimentConfig,
    SupportViolation,
    in_units,
)
from .operators import BudgetExceededError

log = logging.getLogger("steinlab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=2, help="Hilbert-space dimension of generated states")
    p.add_argument("--n-max", type=int, default=10, help="largest tensor power or sequence length")
    p.add_argument("--epsilon", type=float, default=0.1, help="type-I error budget, in (0, 1)")
    p.add_argument("--delta", type=float, default=0.05, help="typicality window")
    p.add_argument("--eta", type=float, default=0.1, help="block-length target gap D_M(l)/l >= S - eta")
    p.add_argument("--l-max", type=int, default=3, help="largest block length tried")
    p.add_argument("--seed", type=int, default=7, help="root seed")
    p.add_argument("--trials", type=int, default=1000, help="random triples for monotonicity")
    p.add_argument("--max-kraus", type=int, default=4, help="largest Kraus rank for random channels")
    p.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")
    p.add_argument("--output", help="write results here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--units", choices=("nats", "bits"), default="nats", help="display units for entropy columns")
    p.add_argument("--psi", help="JSON state file for psi")
    p.add_argument("--phi", help="JSON state file for phi")
    p.add_argument("--channel", help="JSON Kraus channel file")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stein-lab", description="Quantum Stein's lemma numerical experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "stein": "Stein exponent sandwich over n = 1..n_max",
        "hiai-petz": "restriction identity, gap and rate over n = 1..n_max",
        "typical": "typical-set masses on the reduced alphabet",
        "monotonicity": "random channel fuzzing of relative-entropy monotonicity",
        "selftest": "quick run of every check",
    }
    for name, text in helps.items():
        _add_common(sub.add_parser(name, help=text, description=text))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(
        command=args.command,
        dim=args.dim,
        n_max=args.n_max,
        epsilon=args.epsilon,
        delta=args.delta,
        eta=args.eta,
        l_max=args.l_max,
        seed=args.seed,
        trials=args.trials,
        max_kraus=args.max_kraus,
        output=args.output,
        format=args.format,
        psi=args.psi,
        phi=args.phi,
        channel=args.channel,
        workers=args.workers,
        units=args.units,
    )
    cfg.validate()
    return cfg


def _emit(report, cfg: ExperimentConfig) -> None:
    if cfg.format == "json":
        text = json.dumps(report.to_json(), indent=2) + "\n"
    else:
        text = report.to_csv()
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        report = RUNNERS[cfg.command](cfg)
    except BudgetExceededError as exc:
        print(f"stein-lab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SupportViolation as exc:
        print(f"stein-lab: {exc}", file=sys.stderr)
        return EXIT_SUPPORT
    except BlockLengthNotFound as exc:
        print(f"stein-lab: {exc}", file=sys.stderr)
        return EXIT_NO_BLOCK_LENGTH
    except (ValueError, OSError) as exc:
        print(f"stein-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(in_units(report, cfg.units), cfg)
    log.info("%s finished in %.3f s", cfg.command, report.wall_time)
    for v in report.verdicts:
        if not v.passed:
            print(f"stein-lab: verdict failed: {v.name} ({v.detail})", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
