"""Command-line front end.

    weakpt run <scenario.json> [--out DIR] [--tolerance X] [--seed N]
    weakpt sweep <scenario.json> --param {gamma0|epsilon|omega} --values v1,v2,... [--out DIR]
    weakpt classify <series.csv> --t0 X [--tolerance X] [--out DIR]

Exit status: 0 success, 1 input/output or validation failure, 2 numerical
contract violation (e.g. nearly orthogonal pre/post-selection).  Diagnostics
go to stderr; reports go to files only.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .pipeline import classify_csv, run, sweep, write_outputs
from .pps import ContractViolation
from .reports import dumps_json
from .scenario import SWEEP_PARAMS, ScenarioError, parse_scenario

log = logging.getLogger("weakpt")

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2


def _values(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid value list {text!r}") from None
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakpt", description="Time-dependent weak values and PT symmetry")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline for one scenario")
    p.add_argument("scenario", type=Path)
    p.add_argument("--out", type=Path, default=Path("weakpt_out"))
    p.add_argument("--tolerance", type=float, default=None, help="symmetry tolerance override")
    p.add_argument("--seed", type=int, default=None, help="recorded in metadata; physics is deterministic")

    p = sub.add_parser("sweep", help="parameter sweep over gamma0, epsilon or omega")
    p.add_argument("scenario", type=Path)
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--values", type=_values, default=None, help="comma-separated; defaults to run.sweeps")
    p.add_argument("--out", type=Path, default=Path("weakpt_out"))
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("classify", help="certify the time symmetry of a series CSV")
    p.add_argument("series", type=Path)
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out", type=Path, default=Path("weakpt_out"))
    return parser


def _dispatch(args) -> list[Path]:
    if args.command == "run":
        config = parse_scenario(args.scenario)
        if args.tolerance is not None:
            if args.tolerance <= 0:
                raise ScenarioError("--tolerance", "must be positive")
            config = config.with_tolerance(args.tolerance)
        return run(config, args.out, seed=args.seed)
    if args.command == "sweep":
        config = parse_scenario(args.scenario)
        if args.values is not None and not args.values:
            raise ScenarioError("--values", "sweep list must be non-empty")
        text = sweep(config, args.param, args.values, workers=args.workers)
        return write_outputs({f"sweep_{args.param}.csv": text}, args.out)
    doc = classify_csv(args.series, args.t0, args.tolerance)
    return write_outputs({"symmetry.json": dumps_json(doc)}, args.out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        written = _dispatch(args)
    except ContractViolation as exc:
        log.error("numerical contract violation: %s", exc)
        return EXIT_NUMERICAL
    except (ScenarioError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
