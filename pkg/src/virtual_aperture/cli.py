"""Command line: ``virtual-aperture run --scenario FILE --out DIR``.

Exit codes: 0 success, 2 scenario error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import scenario as sc
from .export import ExportError, export
from .pipeline import run

log = logging.getLogger("virtual_aperture")

EXIT_OK, EXIT_SCENARIO, EXIT_RUNTIME = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="virtual-aperture", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="simulate and image one scenario")
    r.add_argument("--scenario", required=True, help="scenario JSON file or canned scenario name")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--seed", type=int)
    r.add_argument("--window", choices=("rect", "hamming", "gaussian"))
    r.add_argument("--mode", choices=sc.MODES)
    r.add_argument("--dump-cube", action="store_true", help="also write the echo cube as CSV")
    r.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("scenarios", help="list canned scenarios")
    return p


def _load(source: str) -> str:
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    if source in sc.canned_names():
        return sc.load_canned(source)
    raise sc.ScenarioError("", f"no such scenario file or canned name: {source}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "scenarios":
        for name in sc.canned_names():
            print(name)
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.window:
        overrides["window"] = {"kind": args.window}
    if args.mode:
        overrides["mode"] = args.mode
    try:
        text = _load(args.scenario)
        scenario = sc.parse_scenario(text, overrides)
    except (sc.ScenarioError, OSError, UnicodeDecodeError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO

    try:
        result = run(scenario)
        files = export(result, args.out, dump_cube=args.dump_cube)
    except ExportError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, RuntimeError, FloatingPointError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for f in files:
        log.info("wrote %s", f)
    print(json.dumps(result.report["measured"], sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
