"""Command-line front end: ``sqpulse {tangle-sweep,error-sweep,avg-error-sweep,validate}``."""

import argparse
import sys

from . import sweeps, validation
from .config import SweepConfig, load_config, parse_angle
from .errors import ConfigError, NumericFailure
from .model import QubitSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SWEEPS = {
    "tangle-sweep": sweeps.TANGLE,
    "error-sweep": sweeps.ERROR,
    "avg-error-sweep": sweeps.AVG_ERROR,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _angle(text):
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _state(text):
    try:
        return QubitSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_sweep_flags(sp):
    sp.add_argument("--config", metavar="PATH")
    sp.add_argument("--r-min", type=float)
    sp.add_argument("--r-max", type=float)
    sp.add_argument("--r-steps", type=int)
    sp.add_argument("--gamma-tau", type=float)
    sp.add_argument("--gamma-tau-min", type=float)
    sp.add_argument("--gamma-tau-max", type=float)
    sp.add_argument("--gamma-tau-steps", type=int)
    sp.add_argument("--kappa-over-gamma", type=float)
    sp.add_argument("--phi", type=_angle, action="append", help="repeatable; 0, pi/2 or radians")
    sp.add_argument("--theta", type=_angle)
    sp.add_argument("--state", type=_state, action="append",
                    help="repeatable; g, e, eq:THETA_A or bloch:POLAR:AZIMUTH")
    sp.add_argument("--engine", choices=("unitary", "lindblad", "perturbative"))
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", dest="fmt", choices=("csv", "jsonl"))
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--unsafe-lambda", action="store_true", default=None)
    sp.add_argument("--jobs", type=int)


def build_parser():
    parser = _Parser(prog="sqpulse", description="Squeezed-light pi-pulse simulator and checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SWEEPS:
        _add_sweep_flags(sub.add_parser(name))
    v = sub.add_parser("validate", help="run the invariant and acceptance suite")
    v.add_argument("--fast", action="store_true", help="skip Monte-Carlo checks")
    return parser


_DIRECT = (
    "r_min", "r_max", "r_steps", "gamma_tau_min", "gamma_tau_max", "gamma_tau_steps",
    "kappa_over_gamma", "theta", "engine", "n_max", "steps", "seed", "fmt",
    "unsafe_lambda", "jobs",
)


def resolve_config(args):
    """Config file values overlaid with explicit flags."""
    cfg = load_config(args.config) if args.config else SweepConfig()
    for name in _DIRECT:
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.phi:
        cfg.phis = args.phi
    if args.state:
        cfg.states = args.state
    if any(getattr(args, k) is not None for k in ("r_min", "r_max", "r_steps")):
        cfg.axis = "r"
    if any(getattr(args, k) is not None for k in ("gamma_tau_min", "gamma_tau_max", "gamma_tau_steps")):
        cfg.axis = "gamma_tau"
    if args.gamma_tau is not None:
        if cfg.axis == "gamma_tau":
            raise ConfigError("--gamma-tau sets a single value but the sweep axis is gamma_tau")
        cfg.gamma_tau = args.gamma_tau
    if args.r_min is not None and args.r_max is None and cfg.r_max < cfg.r_min:
        cfg.r_max = cfg.r_min
    if cfg.steps < 100:
        raise ConfigError(f"steps must be >= 100, got {cfg.steps}")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    return cfg


def _run_sweep(args):
    cfg = resolve_config(args)
    results = sweeps.run_sweep(SWEEPS[args.command], cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            sweeps.write_rows(results, fh, cfg.fmt)
    else:
        sweeps.write_rows(results, sys.stdout, cfg.fmt)


def _run_validate(args):
    results = validation.run_all(fast=args.fast)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        _run_sweep(args)
    except ConfigError as exc:
        print(f"sqpulse: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print(f"sqpulse: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
