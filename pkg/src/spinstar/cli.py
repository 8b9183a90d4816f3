"""Command-line entry point: ``spinstar run | list-experiments | validate``."""

from __future__ import annotations

import argparse
import sys
import time

from . import kernels
from .errors import CapExceeded, ConfigParse, PositivityViolation
from .experiments import COLUMNS, Kind, bundled_specs, load_spec, run

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_CAP, EXIT_NUMERIC = 0, 1, 2, 3, 4


def _cmd_run(args) -> int:
    spec = load_spec(args.spec, args.override)
    start = time.perf_counter()
    path = run(spec, args.out, threads=args.threads)
    print(f"wrote {path} ({spec.kind.value}, {time.perf_counter() - start:.1f} s, "
          f"{kernels.BACKEND} kernels)")
    return EXIT_OK


def _cmd_validate(args) -> int:
    spec = load_spec(args.spec, args.override)
    print(f"ok: {spec.kind.value} -> {spec.output_path}")
    return EXIT_OK


def _cmd_list(args) -> int:
    print("kinds:")
    for kind in Kind:
        print(f"  {kind.value:<26} {','.join(COLUMNS[kind])}")
    print("bundled experiments:")
    for path in bundled_specs():
        try:
            spec = load_spec(path)
            print(f"  {path}  [{spec.kind.value}] {spec.description}")
        except ConfigParse as exc:  # pragma: no cover - bundled files are tested
            print(f"  {path}  (invalid: {exc})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinstar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment file and write its CSV")
    p.add_argument("spec")
    p.add_argument("--out", help="output CSV path (overrides the file)")
    p.add_argument("--threads", type=int, default=1, help="workers for sweep points")
    p.add_argument("--override", nargs="*", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("validate", help="parse and check an experiment file")
    p.add_argument("spec")
    p.add_argument("--override", nargs="*", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("list-experiments", help="list kinds and bundled experiment files")
    p.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigParse as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PositivityViolation as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
