"""``typicality-lab`` command line.

Exit status: 0 all claims pass, 1 some claim fails, 2 unreadable or invalid
config, 3 a hypothesis gate fails and ``ungated`` is not set.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import EXPERIMENTS, ConfigError, default_config, load_config, render_config
from .errors import HypothesisError

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_CONFIG = 2
EXIT_GATE = 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="typicality-lab", description="Monte Carlo checks of Haar-state typicality.")
    p.add_argument("--version", action="version", version=f"typicality-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("config", help="path to a 'key = value' config file")
    run.add_argument("-q", "--quiet", action="store_true", help="only print the summary line")
    sub.add_parser("list-experiments", help="list experiment names")
    pdc = sub.add_parser("print-default-config", help="print a complete default config")
    pdc.add_argument("experiment", choices=EXPERIMENTS)
    return p


def _run(path: str, quiet: bool) -> int:
    from .experiments import run_experiment

    try:
        cfg = load_config(path)
    except OSError as exc:
        print(f"error: cannot read config {path!r}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: invalid config field {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_experiment(cfg)
    except HypothesisError as exc:
        print(f"error: hypothesis not satisfied ({exc.hypothesis}): {exc}", file=sys.stderr)
        print("hint: set 'ungated = true' to run without the gate", file=sys.stderr)
        return EXIT_GATE
    except ConfigError as exc:
        print(f"error: invalid config field {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not quiet:
        for c in result.claims:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  estimate={c.estimate:.6g}  bound={c.bound}")
    s = result.report["summary"]
    print(f"{s['n_passed']}/{s['n_claims']} claims passed; report: {result.out_dir / 'report.json'}")
    return EXIT_OK if result.all_passed else EXIT_CLAIM_FAILED


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-experiments":
        from .experiments import DESCRIPTIONS

        for name in EXPERIMENTS:
            print(f"{name:20s} {DESCRIPTIONS[name]}")
        return EXIT_OK
    if args.command == "print-default-config":
        sys.stdout.write(render_config(default_config(args.experiment)))
        return EXIT_OK
    return _run(args.config, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
