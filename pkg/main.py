import argparse
import os
import sys
from typing import List, Optional

from routes.commands import cmd_calibrate, cmd_presets, cmd_ri_curve, cmd_run, cmd_sweep
from utils.errors import TreasureHuntError
from utils.helpers import configure_logging

SCENARIO_FLAGS = (
    "locations",
    "agents",
    "turns",
    "runs",
    "seed",
    "p_change",
    "obs_prob",
    "focal_obs_prob",
    "likelihood",
    "workers",
    "calibration_samples",
    "batch_observations",
    "exhaustion",
)


def add_scenario_flags(parser: argparse.ArgumentParser):
    """Flags shared by `run` and `sweep`; unset flags leave the config file and preset defaults alone"""
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--locations", type=int, help="number of locations (default 10)")
    parser.add_argument("--agents", type=int, help="population size (default 10)")
    parser.add_argument("--turns", type=int, help="turns per run (default 1000)")
    parser.add_argument("--runs", type=int, help="runs per batch (default 1000)")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--p-change", type=float, help="treasure relocation probability per turn")
    parser.add_argument("--obs-prob", type=float, help="population observation probability in percent")
    parser.add_argument("--focal-obs-prob", type=float, help="focal agent observation probability in percent")
    parser.add_argument("--likelihood", help="likelihood CSV from `calibrate`; calibrated on the fly if omitted")
    parser.add_argument("--calibration-samples", type=int, help="actions used for on-the-fly calibration")
    parser.add_argument("--workers", type=int, help="worker processes for batch execution")
    parser.add_argument("--batch-observations", action="store_true", default=None,
                        help="apply social updates at the end of each turn")
    parser.add_argument("--exhaustion", choices=["random", "reset"],
                        help="certainty-agent behaviour once every location is ruled out")
    parser.add_argument("--out", help="output CSV (stdout when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treasure-hunt",
        description="Social Bayesian learning treasure-hunt simulator and relevant-information analysis",
    )
    parser.add_argument("--log-level", help="logging level; overrides TREASURE_LOG_LEVEL and the config file (default INFO)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    calibrate = subparsers.add_parser("calibrate", help="estimate the likelihood matrix P(A|T)")
    calibrate.add_argument("--locations", type=int, default=10)
    calibrate.add_argument("--samples", type=int, default=100_000)
    calibrate.add_argument("--seed", type=int, default=0)
    calibrate.add_argument("--out", help="likelihood CSV (stdout when omitted)")
    calibrate.add_argument("--histogram", help="also write the per-location action distribution")

    run = subparsers.add_parser("run", help="run a scenario preset")
    run.add_argument("preset", help="scenario preset, see `presets`")
    add_scenario_flags(run)

    sweep = subparsers.add_parser("sweep", help="sweep an observation probability")
    sweep.add_argument("--parameter", choices=["population", "focal"], default="population")
    sweep.add_argument("--start", type=float, default=0.0, help="first grid point in percent")
    sweep.add_argument("--stop", type=float, default=100.0, help="last grid point in percent")
    sweep.add_argument("--step", type=float, default=5.0, help="grid spacing in percent")
    sweep.add_argument("--preset", default="partial", help="scenario the sweep starts from")
    add_scenario_flags(sweep)

    curve = subparsers.add_parser("ri-curve", help="relevant information trade-off curve")
    curve.add_argument("--locations", type=int, default=10)
    curve.add_argument("--start", type=float, default=0.0)
    curve.add_argument("--stop", type=float, default=1.0)
    curve.add_argument("--step", type=float, default=0.001)
    curve.add_argument("--solver", action="store_true", help="solve numerically instead of the closed form")
    curve.add_argument("--utility", help="utility CSV (rows: actions, columns: world states); implies --solver")
    curve.add_argument("--tol", type=float, default=1e-6)
    curve.add_argument("--out", help="curve CSV (stdout when omitted)")

    presets = subparsers.add_parser("presets", help="list scenario presets")
    presets.add_argument("--out", help="output CSV (stdout when omitted)")
    return parser


def scenario_overrides(args: argparse.Namespace) -> dict:
    """ExperimentSettings overrides for the flags given on the command line"""
    overrides = {flag: getattr(args, flag) for flag in SCENARIO_FLAGS if getattr(args, flag) is not None}
    if args.log_level:
        overrides["log_level"] = args.log_level
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or os.environ.get("TREASURE_LOG_LEVEL", "INFO"))

    try:
        if args.command == "calibrate":
            cmd_calibrate(args.locations, args.samples, args.seed, args.out, args.histogram)
        elif args.command == "run":
            cmd_run(args.preset, args.config, scenario_overrides(args), args.out)
        elif args.command == "sweep":
            cmd_sweep(args.parameter, args.start, args.stop, args.step, args.preset,
                      args.config, scenario_overrides(args), args.out)
        elif args.command == "ri-curve":
            cmd_ri_curve(args.locations, args.start, args.stop, args.step,
                         args.solver, args.utility, args.tol, args.out)
        elif args.command == "presets":
            cmd_presets(args.out)
    except (TreasureHuntError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
