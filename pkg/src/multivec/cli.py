"""Command line entry point.

    multivec run [--system DIR] [--transport DIR] [--out DIR] [levers...]
    multivec matrix SPECS.csv --out DIR [--workers N]
    multivec toy-data DIR

``run`` exits 0 when optimal, 2 when infeasible (the certificate is
printed and written next to the outputs), 3 on bad input and 4 when the
solver stops early.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import toy
from .io import InputError
from .scenario import (
    EXIT_INPUT,
    EXIT_OK,
    H2_LEVELS,
    SF_LEVELS,
    STORAGE_LEVELS,
    ScenarioSpec,
    read_specs,
    run_matrix,
    run_scenario,
)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", type=Path, default=None,
                   help="system directory (default: the bundled toy)")
    p.add_argument("--transport", type=Path, default=None,
                   help="transport directory (default: the bundled toy transport when --system is not given)")
    p.add_argument("--rep-days", type=_positive_int, default=3, help="representative days (default 3)")
    p.add_argument("--full-year", action="store_true", help="skip time reduction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=_positive_int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multivec", description="Multi-vector capacity expansion scenarios.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="solve one scenario")
    _common(run)
    run.add_argument("--out", type=Path, default=None, help="output directory")
    run.add_argument("--cap", type=float, default=None, help="emissions cap override, t CO2/y")
    run.add_argument("--storage", choices=STORAGE_LEVELS, default="baseline")
    run.add_argument("--h2-hdv", choices=sorted(H2_LEVELS), default="none")
    run.add_argument("--sf", choices=sorted(SF_LEVELS), default="none")
    run.add_argument("--ng-mult", type=float, default=1.0)
    run.add_argument("--export-mps", type=Path, default=None)
    run.add_argument("--id", default="scenario")

    mat = sub.add_parser("matrix", help="run every scenario of a specs CSV")
    mat.add_argument("specs", type=Path)
    _common(mat)
    mat.add_argument("--out", type=Path, required=True)
    mat.add_argument("--workers", type=_positive_int, default=None,
                     help="parallel scenarios (default: MULTIVEC_THREADS or 1)")

    data = sub.add_parser("toy-data", help="write the toy system and transport inputs")
    data.add_argument("dir", type=Path)
    data.add_argument("--seed", type=int, default=toy.TOY_SEED)
    data.add_argument("--gj-prices", action="store_true",
                      help="also write a variant priced with the EUR/GJ fuel price set")
    return parser


def _inputs(args) -> tuple[Path, Path | None]:
    if args.system is None:
        return toy.data_path("toy"), args.transport or toy.data_path("transport_toy")
    return args.system, args.transport


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "toy-data":
        toy.write_toy_data(args.dir, args.seed, args.gj_prices)
        print(args.dir)
        return EXIT_OK

    system, transport = _inputs(args)
    rep_days = None if args.full_year else args.rep_days

    if args.command == "matrix":
        try:
            specs = read_specs(args.specs, system, transport, rep_days, args.seed, args.max_iters)
            path = run_matrix(specs, args.out, args.workers)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        print(path)
        return EXIT_OK

    spec = ScenarioSpec(
        system=system, transport=transport, h2_hdv=args.h2_hdv, sf=args.sf, storage=args.storage,
        ng_mult=args.ng_mult, cap=args.cap, rep_days=rep_days, seed=args.seed, id=args.id,
        max_iters=args.max_iters,
    )
    res = run_scenario(spec, args.out, args.export_mps)
    if res.exit_code == EXIT_INPUT:
        print(f"error: {res.message}", file=sys.stderr)
        return res.exit_code
    print(f"status {res.status}")
    if res.report is not None:
        r = res.report
        print(f"objective {r.objective:.9g} EUR/y")
        print(f"marginal abatement {r.marginal_abatement:.9g} EUR/t")
        print(f"net emissions {r.net_emissions:.9g} t (cap {r.emissions_cap:.9g})")
    elif res.certificate:
        print(f"certificate: {_group_rows(res.certificate)}")
        if args.out is not None:
            print(f"full list in {args.out / 'infeasibility_certificate.txt'}")
    elif res.message:
        print(res.message, file=sys.stderr)
    return res.exit_code


def _group_rows(names: list[str]) -> str:
    """``co2_balance x144, emissions_cap x1`` from full row names."""
    counts: dict[str, int] = {}
    for n in names:
        kind = n.split("/", 1)[0]
        counts[kind] = counts.get(kind, 0) + 1
    return ", ".join(f"{k} x{v}" for k, v in counts.items())


if __name__ == "__main__":
    sys.exit(main())
