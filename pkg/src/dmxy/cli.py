"""Command-line interface: ``dmxy {evolve,asymptotic,critical,sweep,figure}``.

Exit codes: 0 success, 1 configuration error, 2 every grid point degenerate,
3 ``--verify`` found a mismatch.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from ._version import __version__
from .errors import ConfigError
from .figures import figure_scenario
from .model import DEFAULT_DEGENERACY_TOL
from .sweep import Axis, build_scenario, load_scenario, run_scenario, to_csv, verify, fmt, header_lines

EXIT_OK, EXIT_CONFIG, EXIT_DEGENERATE, EXIT_VERIFY = 0, 1, 2, 3

_PARAM_FLAGS = ("J", "chi", "B", "b", "D", "gamma1", "gamma2", "gamma", "TM", "dT")

log = logging.getLogger("dmxy")


def _common(p):
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--verify", action="store_true", help="spot-check 1%% of rows against the RK4 oracle")
    p.add_argument("--tolerance", type=float, default=None,
                   help=f"degeneracy tolerance on |xi - eta| (default {DEFAULT_DEGENERACY_TOL:g})")


def _physics(p):
    g = p.add_argument_group("model parameters (override scenario values)")
    for name in _PARAM_FLAGS:
        g.add_argument(f"--{name}", type=float, default=None, metavar="X")
    g.add_argument("--initial", default=None, help="initial state name(s), comma separated")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dmxy", allow_abbrev=False,
                                     description="Two-qubit XY model with DM coupling coupled to two thermal baths.")
    parser.add_argument("--version", action="version", version=f"dmxy {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", allow_abbrev=False, help="time series from an initial state")
    _physics(p)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--outputs", default="concurrence,eof,populations,coherences")
    _common(p)

    p = sub.add_parser("asymptotic", allow_abbrev=False, help="long-time state")
    _physics(p)
    p.add_argument("--outputs", default="concurrence,eof,populations,coherences")
    _common(p)

    p = sub.add_parser("critical", allow_abbrev=False, help="critical DM strength D_c")
    _physics(p)
    _common(p)

    p = sub.add_parser("sweep", allow_abbrev=False, help="grid sweep from a scenario file")
    p.add_argument("--config", required=True)
    _physics(p)
    p.add_argument("--outputs", default=None)
    _common(p)

    p = sub.add_parser("figure", allow_abbrev=False, help="one of the seven figure scenarios")
    p.add_argument("n", type=int, choices=range(1, 8), metavar="N")
    _common(p)
    return parser


def _overrides(args) -> dict:
    out = {k: getattr(args, k, None) for k in _PARAM_FLAGS}
    out["initial"] = getattr(args, "initial", None)
    out["outputs"] = getattr(args, "outputs", None)
    out["tolerance"] = args.tolerance
    return out


def _write(text: str, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scenario(args):
    ov = _overrides(args)
    if args.command == "sweep":
        return load_scenario(args.config, ov)
    if args.command == "figure":
        scn = figure_scenario(args.n)
        return replace(scn, tolerance=args.tolerance) if args.tolerance is not None else scn
    scn = build_scenario({"name": (args.command, None)}, ov)
    if args.command == "evolve":
        if args.points < 1 or not args.t_max >= 0:
            raise ConfigError("need --points >= 1 and --t-max >= 0")
        scn = replace(scn, axes=(Axis.uniform("t", 0.0, args.t_max, args.points),))
    return scn


def _critical(scn, out):
    dc = scn.critical_D()
    lines = header_lines(scn) + ["D_c", fmt(dc)]
    _write("\n".join(lines) + "\n", out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        scn = _scenario(args)
    except (ConfigError, OSError) as exc:
        print(f"dmxy: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "critical":
        return _critical(scn, args.out)

    result = run_scenario(scn)
    _write(to_csv(result), args.out)
    if args.verify:
        report = verify(result)
        for msg in report.failures:
            print(f"dmxy: verify: {msg}", file=sys.stderr)
        print(f"dmxy: verify: {report.checked} rows checked, {len(report.failures)} failures", file=sys.stderr)
        if not report.ok:
            return EXIT_VERIFY
    if result.all_degenerate:
        print("dmxy: every grid point is degenerate", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
