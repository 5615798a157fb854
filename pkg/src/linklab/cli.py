"""Command-line entry point ``linklab``.

Exit codes: 0 success, 1 selftest failure, 2 config error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from . import analytic, harness, link, selftest
from .channel import transmit_snr

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _build_parser():
    parser = argparse.ArgumentParser(prog="linklab",
                                     description="IRS-aided link capacity and outage laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the configured sweep and write a CSV")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--samples", type=int, help="Monte Carlo samples per point")
    run.add_argument("--seed", type=int)
    run.add_argument("--workers", type=int,
                     help=f"worker threads (default: ${link.WORKERS_ENV} or 1)")
    run.add_argument("--plot-stub", metavar="PATH", help="also write a matplotlib script for the CSV")

    ev = sub.add_parser("eval", help="print closed-form results for a single configuration")
    ev.add_argument("--config", required=True)

    sub.add_parser("selftest", help="run the special-function oracle checks")
    return parser


def _run(args):
    geom, fading, radio, spec = harness.load_config(args.config)
    overrides = {}
    if args.samples is not None:
        overrides["n_samples"] = args.samples
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        spec = dataclasses.replace(spec, **overrides)
    except ValueError as exc:
        raise harness.ConfigError(str(exc)) from None
    if args.workers is not None and args.workers < 1:
        raise harness.ConfigError("--workers must be >= 1")
    rows = harness.run_sweep(geom, fading, radio, spec, out_path=args.out, workers=args.workers)
    if args.plot_stub:
        harness.write_plot_stub(args.plot_stub, args.out, spec)
    print(f"wrote {len(rows)} rows to {args.out}")


def _eval(args):
    geom, fading, radio, _ = harness.load_config(args.config)
    mom = analytic.clt_moments(geom, fading)
    law = analytic.near_origin_coefficient(geom, fading, radio)
    for name, value in (
        ("gamma0", transmit_snr(radio)),
        ("mean_snr", analytic.mean_snr(geom, fading, radio)),
        ("cap_bound", analytic.capacity_upper_bound(geom, fading, radio)),
        ("clt_mu", mom.mu),
        ("clt_sigma2", mom.sigma2),
        ("outage_clt", analytic.outage_clt(geom, fading, radio)),
        ("a_coeff", law.a_coeff),
        ("diversity", law.diversity),
        ("outage_high_snr", analytic.outage_high_snr(geom, fading, radio)),
    ):
        print(f"{name} = {value!r}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            _run(args)
        elif args.command == "eval":
            _eval(args)
        else:
            return EXIT_OK if selftest.run() else EXIT_FAIL
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
