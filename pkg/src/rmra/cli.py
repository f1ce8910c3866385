"""Command-line interface.

Subcommands: ``search`` (aperture sweep), ``validate`` (robustness
report for one array), ``cfe`` (closed-form family, single size or bulk
validation sweep), ``report`` (weight-function CSV, healthy or after a
failure) and ``catalog`` (query/export of stored arrays).

Exit codes: 0 success, 1 validation failed, 2 usage error, 3 budget
abort.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from ._version import __version__
from .catalog import Catalog, CatalogRecord
from .cfe import cfe_array, validate_range
from .coarray import make_array, weight_after_removal, weight_function
from .errors import RmraError
from .robustness import assess
from .search import (
    Fixation,
    SearchConfig,
    SearchOutcome,
    find_near_optimal,
    find_optimal,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_positions(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise RmraError(f"cannot parse positions from {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmra",
        description="Robust minimum redundancy array toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="sweep apertures for maximum-aperture robust arrays")
    p.add_argument("--n", type=int, required=True, help="number of sensors (>= 6)")
    p.add_argument("--fixation", choices=["endpoints", "standard", "custom"],
                   default="endpoints", help="which sensors to pre-place")
    p.add_argument("--first", type=int, help="custom fixation: length of the uniform prefix")
    p.add_argument("--last", type=int, help="custom fixation: length of the uniform suffix")
    p.add_argument("--early-stop", type=int, dest="early_stop",
                   help="truncate each stage after this many valid arrays")
    p.add_argument("--budget", type=int, help="max candidates per stage")
    p.add_argument("--persist-stages", type=int, dest="persist_stages", default=0,
                   help="extra empty stages to scan past the first empty one")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p.add_argument("--resume", help="checkpoint file to resume from / write to")
    p.add_argument("--out", help="catalog file receiving every valid array found")
    p.add_argument("--progress", action="store_true", help="progress lines on stderr")

    p = sub.add_parser("validate", help="full robustness report for one array")
    p.add_argument("--positions", required=True, help="comma-separated sensor positions")

    p = sub.add_parser("cfe", help="closed-form family: generate or validate in bulk")
    p.add_argument("--n", type=int, help="single size to generate")
    p.add_argument("--range", dest="n_range", metavar="LO:HI",
                   help="validate every size in the range")
    p.add_argument("--emit", choices=["positions", "ies", "weights"], default="positions",
                   help="what to print for a single size")
    p.add_argument("--progress", action="store_true", help="progress lines on stderr")

    p = sub.add_parser("report", help="weight function as CSV over [-L, L]")
    p.add_argument("--positions", required=True, help="comma-separated sensor positions")
    p.add_argument("--emit", choices=["weights-csv"], default="weights-csv")
    p.add_argument("--failed-sensor", type=int, dest="failed_sensor",
                   help="emit the weights of the array surviving this sensor's failure")

    p = sub.add_parser("catalog", help="query and export a catalog file")
    p.add_argument("--path", default="catalog.jsonl", help="catalog file (JSON-Lines)")
    p.add_argument("--query", default="", help='filters, e.g. "n=12" or "aperture=20..30 generator=cfe"')
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")

    return parser


def _fixation_from_args(args) -> Fixation:
    if args.fixation == "endpoints":
        return Fixation(1, 1)
    if args.fixation == "standard":
        return Fixation(3, 2)
    if args.first is None or args.last is None:
        raise RmraError("custom fixation needs --first and --last")
    return Fixation(args.first, args.last)


def _cmd_search(args) -> int:
    fixation = _fixation_from_args(args)
    kwargs = dict(
        n=args.n,
        fixation=fixation,
        early_stop=args.early_stop,
        persist_stages=args.persist_stages,
        worker_count=args.workers,
    )
    if args.budget is not None:
        kwargs["budget"] = args.budget
    cfg = SearchConfig(**kwargs)

    progress = None
    if args.progress:
        def progress(u):
            pct = 100.0 * u.candidates_done / max(u.stage_size, 1)
            print(
                f"  L={u.aperture}: {u.candidates_done}/{u.stage_size} "
                f"({pct:.0f}%), {u.valid_count} valid, {u.rate/1e6:.1f}M/s",
                file=sys.stderr,
            )

    near = cfg.early_stop is not None or args.fixation == "custom"
    run = find_near_optimal if near else find_optimal
    outcome = run(cfg, progress=progress, checkpoint=args.resume)
    _print_outcome(outcome)

    if args.out:
        written = _store_outcome(outcome, args.out, near)
        print(f"catalog: {written} new records -> {args.out}")
    return EXIT_BUDGET if outcome.budget_exceeded else EXIT_OK


def _print_outcome(outcome: SearchOutcome) -> None:
    print(f"search n={outcome.n} fixation={outcome.fixation.label()}")
    for st in outcome.stages:
        note = " (truncated)" if st.truncated else ""
        note += " (infeasible)" if st.infeasible else ""
        print(
            f"  stage L={st.aperture}: {st.candidates_evaluated} candidates, "
            f"{len(st.valid_arrays)} valid, {st.elapsed:.2f}s{note}"
        )
    if outcome.budget_exceeded:
        print("stopped: next stage exceeds the candidate budget")
    if outcome.optimal_aperture is None:
        print("no valid array found")
        return
    print(f"best aperture: {outcome.optimal_aperture} ({outcome.optimality})")
    for arr in outcome.optimal_arrays:
        print(f"  {arr}")


def _store_outcome(outcome: SearchOutcome, path: str, near: bool) -> int:
    catalog = Catalog(path)
    generator = "search-near-optimal" if near else "search-optimal"
    written = 0
    for st in outcome.stages:
        for arr in st.valid_arrays:
            opt = outcome.optimality if st.aperture == outcome.optimal_aperture else "n/a"
            rec = CatalogRecord.build(
                arr, generator, optimality=opt, fixation=outcome.fixation.label()
            )
            written += catalog.insert(rec)
    return written


def _cmd_validate(args) -> int:
    arr = make_array(_parse_positions(args.positions))
    report = assess(arr)
    print(f"array: {arr}  (n={arr.n}, L={arr.aperture})")
    print(f"healthy two-fold coverage: {'PASS' if report.healthy_ok else 'FAIL'}")
    print("single-failure checks (interior sensors):")
    for s in arr.interior():
        v = report.per_sensor[s]
        state = "PASS" if v.ok else f"FAIL (first hole at lag {v.first_hole})"
        print(f"  sensor {s}: {state}")
    ess = ", ".join(str(s) for s in sorted(report.essential))
    print(f"essential sensors: {{{ess}}}")
    print(f"fragility: {report.fragility}")
    print(f"TFRSA: {'yes' if report.is_tfrsa else 'no'}")
    return EXIT_OK if report.is_tfrsa else EXIT_INVALID


def _cmd_cfe(args) -> int:
    if (args.n is None) == (args.n_range is None):
        raise RmraError("give exactly one of --n or --range")
    if args.n is not None:
        member = cfe_array(args.n)
        if args.emit == "positions":
            print(f"n: {member.n}")
            print(f"p: {member.p}")
            print(f"positions: {member.array}")
            print(f"aperture: {member.aperture}")
            print(f"dof: {member.dof}")
            print(f"ies: {member.ies}")
        elif args.emit == "ies":
            print(str(member.ies))
        else:
            writer = csv.writer(sys.stdout)
            writer.writerow(["lag", "weight"])
            w = weight_function(member.array)
            for lag in range(member.aperture + 1):
                writer.writerow([lag, w[lag]])
        return EXIT_OK

    try:
        lo, hi = (int(part) for part in args.n_range.split(":"))
    except ValueError:
        raise RmraError(f"cannot parse range {args.n_range!r}, expected LO:HI")
    t0 = time.perf_counter()
    progress = None
    if args.progress:
        def progress(n):
            if n % 50 == 0:
                print(f"  validated up to n={n}", file=sys.stderr)
    summary = validate_range(lo, hi, progress=progress)
    print(f"validated sizes {summary.n_lo}..{summary.n_hi} "
          f"in {time.perf_counter() - t0:.1f}s")
    print(f"mega_count: {summary.mega_count}")
    for f in summary.failures:
        print(f"  n={f.n}: {f.reason}: {f.detail}")
    return EXIT_OK


def _cmd_report(args) -> int:
    arr = make_array(_parse_positions(args.positions))
    w = weight_function(arr)
    if args.failed_sensor is not None:
        w = weight_after_removal(arr, w, args.failed_sensor)
    writer = csv.writer(sys.stdout)
    writer.writerow(["lag", "weight"])
    for lag in range(-arr.aperture, arr.aperture + 1):
        writer.writerow([lag, w[lag]])
    return EXIT_OK


def _parse_query(text: str):
    n = aperture = generator = None
    for clause in text.replace(",", " ").split():
        if "=" not in clause:
            raise RmraError(f"bad query clause {clause!r}, expected key=value")
        key, _, value = clause.partition("=")
        if key == "n":
            n = int(value)
        elif key == "aperture":
            if ".." in value:
                lo, hi = value.split("..")
                aperture = (int(lo), int(hi))
            else:
                aperture = (int(value), int(value))
        elif key == "generator":
            generator = value
        else:
            raise RmraError(f"unknown query key {key!r}")
    return n, aperture, generator


def _cmd_catalog(args) -> int:
    catalog = Catalog(args.path)
    try:
        n, aperture, generator = _parse_query(args.query)
    except ValueError:
        raise RmraError(f"cannot parse query {args.query!r}")
    records = catalog.query(n=n, aperture=aperture, generator=generator)
    Catalog.export(records, args.format, sys.stdout)
    return EXIT_OK


_COMMANDS = {
    "search": _cmd_search,
    "validate": _cmd_validate,
    "cfe": _cmd_cfe,
    "report": _cmd_report,
    "catalog": _cmd_catalog,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except RmraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
