"""Command-line driver: ``python -m artifact <suite> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from .bracket import FLAVORS
from .errors import InvalidParameters
from .report import SCHEMA
from .suites import SUITES, SuiteConfig, run_suite

FLAVOR_CHOICES = {"elliptic": "elliptic", "trig": "trigonometric", "rational": "rational"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artifact",
        description="Verify the difference-operator identities numerically or exactly.",
    )
    parser.add_argument("suite", choices=SUITES + ("all",), help="identity suite to run")
    parser.add_argument("--flavor", choices=sorted(FLAVOR_CHOICES),
                        help="bracket flavor (default: all three)")
    parser.add_argument("--n", type=int, default=3, help="number of variables")
    parser.add_argument("--lmax", type=int, default=4, help="largest l for H_l checks")
    parser.add_argument("--rmax", type=int, default=3, help="largest r, s for commutators")
    parser.add_argument("--precision", type=int, default=64, help="working decimal digits")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=20, help="random points per numeric check")
    parser.add_argument("--q", default="3/5", help="exact q as 'p/q'")
    parser.add_argument("--t", default="2/7", help="exact t as 'p/q'")
    parser.add_argument("--tol", type=float, help="relative tolerance override")
    parser.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    parser.add_argument("--quiet", action="store_true", help="skip the plain-text table")
    return parser


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    if args.n < 1 or args.lmax < 1 or args.rmax < 1 or args.samples < 1:
        raise InvalidParameters("--n, --lmax, --rmax and --samples must be positive")
    if args.lmax > 6:
        raise InvalidParameters("--lmax is capped at 6")
    flavors = (FLAVOR_CHOICES[args.flavor],) if args.flavor else FLAVORS
    cfg = SuiteConfig(flavors=flavors, n=args.n, lmax=args.lmax, rmax=args.rmax,
                      precision=args.precision, seed=args.seed, q=args.q, t=args.t,
                      tol=args.tol, samples=args.samples)
    cfg.qt_field()  # fail early on a bad q or t
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (InvalidParameters, ValueError, ZeroDivisionError) as exc:
        parser.error(str(exc))
    report = run_suite(args.suite, cfg)
    payload = report.to_json()
    jsonschema.validate(payload, SCHEMA)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
    if not args.quiet:
        print(report.table())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
