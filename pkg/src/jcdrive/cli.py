"""Command line interface: ``sim run`` executes a scenario, ``sim check`` reports convergence.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .scenarios import convergence_probe, emit_csv, run_scenario

__all__ = ["main", "entry"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Driven qubit-cavity simulations: figure sweeps and readout analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario and write its CSV")
    run_p.add_argument("--config", required=True, help="key=value config file")
    run_p.add_argument("--out", help="output CSV path (overrides config)")
    run_p.add_argument("--scenario", help="scenario name (overrides config)")
    run_p.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override a config entry; repeatable",
    )

    check_p = sub.add_parser("check", help="convergence report for the configured scenario")
    check_p.add_argument("--config", required=True, help="key=value config file")
    return parser


def _load_config(args) -> "ScenarioConfig":
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
    extra = list(getattr(args, "set", []))
    if getattr(args, "scenario", None):
        extra.append(f"scenario={args.scenario}")
    if extra:
        text = text + "\n" + "\n".join(extra)
    return parse_config(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    if args.command == "run":
        try:
            result = run_scenario(config)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 1
        except Exception as exc:  # truncation, guard, linear-algebra failures
            print(f"numerical failure: {exc}", file=sys.stderr)
            return 2
        out = args.out or config.out or f"{config.scenario}.csv"
        try:
            emit_csv(result, out)
        except OSError as exc:
            print(f"cannot write {out!r}: {exc}", file=sys.stderr)
            return 2
        flagged = sum(1 for row in result.rows if False in [c for c in row if isinstance(c, bool)])
        print(f"{config.scenario}: {len(result.rows)} rows -> {out}"
              + (f" ({flagged} rows flagged not converged)" if flagged else ""))
        return 0

    # sim check
    try:
        report = convergence_probe(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    print(f"{config.scenario}: {report}")
    return 0 if report.passed else 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
