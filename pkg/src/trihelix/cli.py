"""Command-line interface: compute, decompose, panel, synth.

Exit codes: 0 success, 1 validation problem, 2 I/O problem, 3 degenerate
data (zero mass or a single-state space). Diagnostics go to stderr;
reports go to --out or stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._version import __version__
from .decomp import GroupingSpec, decompose, panel_series
from .errors import DegenerateDataError, ValidationError
from .infomeasure import MaxEntropyMode, UnitScale, compute_report
from .ingest import load_config, load_records, write_records
from .synth import GeneratorSpec, generate
from .tableau import build_table
from . import reporting


class _Parser(argparse.ArgumentParser):
    # usage errors are validation problems (exit 1), not I/O (exit 2)
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _add_common(p: argparse.ArgumentParser, formats: list[str]) -> None:
    p.add_argument("--config", required=True, help="path to the JSON config document")
    p.add_argument("--dims", help="comma-separated dimension subset (default: all)")
    p.add_argument("--unit", choices=["bits", "mbits"], help="override the config unit scale")
    p.add_argument(
        "--max-mode", choices=["declared", "observed", "cumulative"],
        help="override the config maximum-entropy mode",
    )
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--stats", help="also write ingest statistics as JSON to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trihelix", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="full synergy report for one table")
    _add_common(p, ["text", "json"])
    p.add_argument("--smoothing", type=float, default=0.0,
                   help="additive smoothing mass per product-space cell (default 0)")

    p = sub.add_parser("decompose", help="within/between group decomposition")
    _add_common(p, ["csv", "json", "text"])
    p.add_argument("--group", required=True, help="grouping dimension name")
    p.add_argument("--min-mass", type=float, default=1.0,
                   help="groups below this mass are flagged unreliable")

    p = sub.add_parser("panel", help="per-period trajectory of H_obs, H_max, R")
    _add_common(p, ["csv", "json", "text", "svg"])

    p = sub.add_parser("synth", help="write a synthetic data file")
    p.add_argument("--kind", required=True,
                   choices=["independent", "copy", "parity", "coupled", "random_joint"])
    p.add_argument("--count", type=int, required=True, help="number of records N")
    p.add_argument("--mode", choices=["sampled", "balanced"], default="sampled")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cards", help="comma-separated cardinalities (independent, random_joint)")
    p.add_argument("--copy-dims", type=int, help="dimension count for kind=copy")
    p.add_argument("--coupling", type=float, help="mixture weight for kind=coupled")
    p.add_argument("--concentration", type=float, help="Dirichlet concentration for random_joint")
    p.add_argument("--out", required=True, help="output data file")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args) -> tuple:
    config, schema = load_config(args.config)
    if args.unit:
        unit = UnitScale(args.unit)
    else:
        unit = config.unit
    if args.max_mode:
        max_mode = MaxEntropyMode(args.max_mode)
    else:
        max_mode = config.max_mode
    records, stats = load_records(config, schema)
    if stats.warnings:
        for line in stats.warnings:
            print(f"warning: {line}", file=sys.stderr)
    if args.stats:
        Path(args.stats).write_text(stats.to_json(), encoding="utf-8")
    return config, schema, records, unit, max_mode


def _subset(args, schema) -> tuple[str, ...]:
    if args.dims:
        return tuple(name.strip() for name in args.dims.split(",") if name.strip())
    return schema.names


def cmd_compute(args) -> int:
    config, schema, records, unit, max_mode = _load(args)
    table = build_table(records, schema)
    report = compute_report(
        table, _subset(args, schema), max_mode=max_mode, unit=unit,
        smoothing_alpha=args.smoothing,
    )
    if args.format == "json":
        manifest = reporting.build_manifest(
            Path(args.config), config.input_path, sys.argv[1:]
        )
        _emit(reporting.dumps_payload(reporting.compute_payload(report, manifest)), args.out)
    else:
        _emit(reporting.render_compute_text(report), args.out)
    return 0


def cmd_decompose(args) -> int:
    config, schema, records, unit, _ = _load(args)
    measure = tuple(n for n in _subset(args, schema) if n != args.group)
    spec = GroupingSpec(group_dim=args.group, measure_dims=measure, min_mass=args.min_mass)
    dec = decompose(records, schema, spec, unit=unit)
    if dec.degenerate:
        print("warning: single group, decomposition is trivial", file=sys.stderr)
    manifest = reporting.build_manifest(Path(args.config), config.input_path, sys.argv[1:])
    payload = reporting.dumps_payload(
        reporting.decompose_payload(dec, manifest, args.group, measure)
    )
    if args.format == "json":
        _emit(payload, args.out)
    elif args.format == "text":
        _emit(reporting.render_decompose_text(dec, args.group, measure), args.out)
    else:  # csv per group, plus the JSON summary next to it when writing files
        _emit(reporting.decompose_csv(dec), args.out)
        if args.out:
            Path(args.out).with_suffix(".json").write_text(payload, encoding="utf-8")
    return 0


def cmd_panel(args) -> int:
    config, schema, records, unit, max_mode = _load(args)
    measure = _subset(args, schema)
    points = panel_series(records, schema, measure, max_mode, unit=unit)
    if args.format == "json":
        manifest = reporting.build_manifest(Path(args.config), config.input_path, sys.argv[1:])
        _emit(
            reporting.dumps_payload(
                reporting.panel_payload(points, manifest, unit, measure, max_mode)
            ),
            args.out,
        )
    elif args.format == "text":
        _emit(reporting.render_panel_text(points, unit), args.out)
    elif args.format == "svg":
        if not args.out:
            raise ValidationError("--format svg needs --out to name the figure file")
        from .figures import render_panel_chart  # import only when drawing

        render_panel_chart(points, args.out, unit=unit)
        # delimited output lands alongside the figure
        Path(args.out).with_suffix(".csv").write_text(
            reporting.panel_csv(points, unit), encoding="utf-8"
        )
    else:
        _emit(reporting.panel_csv(points, unit), args.out)
    return 0


def cmd_synth(args) -> int:
    cards = None
    if args.cards:
        cards = tuple(int(c) for c in args.cards.split(","))
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.count,
        mode=args.mode,
        seed=args.seed,
        cardinalities=cards,
        n_dims=args.copy_dims,
        coupling=args.coupling,
        concentration=args.concentration,
    )
    records = generate(spec)
    write_records(records, spec.schema(), args.out)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


_COMMANDS = {
    "compute": cmd_compute,
    "decompose": cmd_decompose,
    "panel": cmd_panel,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ValidationError as exc:  # includes SchemaError
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateDataError as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
