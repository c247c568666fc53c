"""Command line entry point.

One subcommand per experiment; every experiment key can come from a
config file (--config), a command line flag, or both, with flags
winning.  Exit codes: 0 success, 2 validation error, 3 resource
limit.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import ResourceError, ValidationError
from .harness import EXPERIMENTS, _SCHEMAS, build_config, parse_config_text, run


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="FILE", help="flat key = value config file")
    sub.add_argument("--seed", metavar="INT", help="master seed (default 0)")
    sub.add_argument("--out", metavar="PATH", help="output CSV path")
    sub.add_argument("--trials", metavar="INT", help="trial count override")
    sub.add_argument("--workers", metavar="INT", help="worker processes (default 1)")
    sub.add_argument("--quiet", action="store_true", help="suppress the summary line")
    sub.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmtlab",
        description="numerical experiments on random matrices: singular value "
                    "tails, sign matrix censuses, concentration of weighted "
                    "sums, arithmetic structure of kernels, and sections of "
                    "the octahedron")
    parser.add_argument("--version", action="version", version="rmtlab " + __version__)
    subs = parser.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    for name in EXPERIMENTS:
        sub = subs.add_parser(name, help="run the %s experiment" % name)
        _add_common(sub)
        for key in _SCHEMAS[name]:
            if key == "trials":
                continue  # already global
            sub.add_argument("--" + key.replace("_", "-"), dest="param_" + key,
                             metavar="VALUE")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.experiment is None:
        parser.print_help()
        return 2
    mapping: dict[str, str] = {}
    try:
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                mapping.update(parse_config_text(fh.read()))
        mapping["experiment"] = args.experiment
        if args.seed is not None:
            mapping["master_seed"] = args.seed
        if args.out is not None:
            mapping["out"] = args.out
        if args.trials is not None:
            mapping["trials"] = args.trials
        if args.workers is not None:
            mapping["workers"] = args.workers
        if args.quiet:
            mapping["quiet"] = "true"
        if args.no_plot:
            mapping["plot"] = "false"
        for key, value in vars(args).items():
            if key.startswith("param_") and value is not None:
                mapping[key[len("param_"):]] = value
        cfg = build_config(mapping)
        paths = run(cfg)
    except ValidationError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ResourceError as exc:
        print("resource limit: %s" % exc, file=sys.stderr)
        return 3
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    if not cfg.quiet:
        print("wrote " + ", ".join(paths))
    return 0


if __name__ == "__main__":
    sys.exit(main())
