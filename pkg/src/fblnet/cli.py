"""Command-line front end.

Subcommands:
  analytic   evaluate one scenario with the analytic pipeline
  simulate   Monte Carlo estimate for one scenario
  sweep      cartesian parameter sweep (CSV rows, optional figure)
  validate   run the built-in invariant suite

Scenario parameters come from built-in defaults, then an optional YAML config
file, then CLI flags, each layer overriding the previous one.  All data output
is CSV on stdout or --out.
"""

from __future__ import annotations

import argparse
import sys

from .config import (
    Regime,
    SystemConfig,
    load_config,
    parse_regime,
    parse_variant,
    with_overrides,
)
from .mc import estimate_per, estimate_row
from .per import evaluate, result_row
from .report import render_sweep_figure, write_rows
from .sweep import AXES, SweepSpec, parse_values, run_sweep
from .validate import run_invariants


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="YAML scenario file")
    parser.add_argument("--regime", choices=("fbl", "ibl", "both"), default=None)
    parser.add_argument("--variant", type=parse_variant, default=None)
    parser.add_argument("--j", type=int, default=None, help="antennas / relay candidates")
    parser.add_argument("--eps-star", type=float, default=None)
    parser.add_argument("--snr-db", type=float, default=None)
    parser.add_argument("--terminals", type=int, default=None)
    parser.add_argument("--payload-bits", type=float, default=None)
    parser.add_argument("--alpha-symbols", type=float, default=None)
    parser.add_argument("--beta-bits", type=float, default=None)
    parser.add_argument("--bandwidth-hz", type=float, default=None)
    parser.add_argument("--cycle-s", type=float, default=None)
    parser.add_argument("--exact-two-hop", action="store_true",
                        help="use 1-(1-eps)^2 for relayed packets instead of 2*eps")
    parser.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")


def _resolve_config(args) -> tuple[SystemConfig, Regime | None]:
    if args.config:
        config, file_regime = load_config(args.config)
    else:
        config, file_regime = SystemConfig(), None
    config = with_overrides(
        config,
        variant=args.variant,
        j=args.j,
        eps_star=args.eps_star,
        snr_db=args.snr_db,
        terminals=args.terminals,
        base_payload_bits=args.payload_bits,
        alpha_symbols=args.alpha_symbols,
        beta_bits=args.beta_bits,
        bandwidth_hz=args.bandwidth_hz,
        cycle_s=args.cycle_s,
    )
    return config, file_regime


def _resolve_regimes(args, file_regime) -> list[Regime]:
    choice = args.regime if args.regime is not None else (
        file_regime.value if file_regime is not None else "both"
    )
    if choice == "both":
        return [Regime.FBL, Regime.IBL]
    return [parse_regime(choice)]


def _emit(rows, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fp:
            write_rows(rows, fp)
    else:
        write_rows(rows, sys.stdout)


def _cmd_analytic(args) -> int:
    config, file_regime = _resolve_config(args)
    rows = [
        result_row(config, regime, evaluate(config, regime, args.exact_two_hop))
        for regime in _resolve_regimes(args, file_regime)
    ]
    _emit(rows, args.out)
    return 0


def _cmd_simulate(args) -> int:
    if args.frames < 1:
        raise ValueError("--frames must be >= 1")
    config, file_regime = _resolve_config(args)
    rows = [
        estimate_row(config, regime, estimate_per(config, regime, args.frames, args.seed))
        for regime in _resolve_regimes(args, file_regime)
    ]
    _emit(rows, args.out)
    return 0


def _cmd_sweep(args) -> int:
    config, file_regime = _resolve_config(args)
    spec = SweepSpec(
        axis=args.axis,
        values=parse_values(args.values),
        variants=tuple(parse_variant(v) for v in args.variants.split(",")),
        regimes=tuple(_resolve_regimes(args, file_regime)),
    )
    rows = run_sweep(config, spec, args.check_convexity, args.exact_two_hop)
    _emit(rows, args.out)
    if args.figures:
        path = render_sweep_figure(rows, spec.axis, args.figures)
        print(f"figure written to {path}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    results = run_invariants()
    failed = 0
    for name, passed, detail in results:
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        failed += 0 if passed else 1
    print(f"{len(results) - failed}/{len(results)} invariant checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fblnet",
        description="Packet error rate of a deadline-constrained TDMA network "
        "under finite- and infinite-blocklength coding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="analytic PER for one scenario")
    _add_scenario_flags(p)
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("simulate", help="Monte Carlo PER estimate")
    _add_scenario_flags(p)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="sweep one parameter axis")
    _add_scenario_flags(p)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument(
        "--values",
        required=True,
        help="comma list, or log:start:stop:count / lin:start:stop:count",
    )
    p.add_argument(
        "--variants",
        default="direct",
        help="comma list of variants to evaluate at every axis value",
    )
    p.add_argument("--check-convexity", action="store_true",
                   help="append a convexity verdict row per FBL curve (eps_star axis)")
    p.add_argument("--figures", metavar="DIR",
                   help="also render a PER-vs-axis figure into this directory")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate", help="run the built-in invariant suite")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NotImplementedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
