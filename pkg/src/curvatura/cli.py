"""Command-line entry point: ``curvatura point|curves|grid|verify``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import report
from .classify import grid_classify
from .curves import curve_set
from .errors import ConfigError, CurvaturaError, ExprSyntaxError, GridFailureBudget, PropertyFailure
from .io import dumps_json, load_surface, to_jsonable, write_text
from .jets import local_quadratic_map_at
from .svg import curves_svg, grid_svg
from .verify import DEFAULT_SEED, run_verify

DEFAULTS = {
    "at": (0.0, 0.0),
    "range": (-1.0, 1.0, -1.0, 1.0),
    "res": 21,
    "tol": 1e-9,
    "samples": 128,
    "maps": 1000,
    "surfaces": 6,
    "seed": DEFAULT_SEED,
}
GRID_SUCCESS_FRACTION = 0.9
FORMATS = {"point": ("json", "csv"), "curves": ("csv", "svg", "json"), "grid": ("csv", "svg", "json"),
           "verify": ("json", "csv")}


@dataclass(frozen=True)
class RunConfig:
    command: str
    surface: str | None
    at: tuple[float, float]
    range: tuple[float, float, float, float]
    res: int
    tol: float
    samples: int
    maps: int
    surfaces: int
    seed: int
    fmt: str
    out: str
    paired: bool


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvatura", description="Second-order geometry of surfaces in 3-, 4- and 5-space.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "point": "invariants, classification and paired map at one point",
        "curves": "sampled indicatrix, caustic and related curves at one point",
        "grid": "classify every node of a parameter grid",
        "verify": "seeded property suites and finite-difference oracles",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--surface", required=name != "verify", help="surface TOML file")
        p.add_argument("--at", nargs=2, type=float, metavar=("S", "T"), help="parameter point (default 0 0)")
        p.add_argument("--range", nargs=4, type=float, metavar=("S0", "S1", "T0", "T1"), help="grid box (default -1 1 -1 1)")
        p.add_argument("--res", type=int, help="grid nodes per axis (default 21)")
        p.add_argument("--tol", type=float, help="relative degeneracy tolerance (default 1e-9)")
        p.add_argument("--samples", type=int, help="samples per curve (default 128)")
        p.add_argument("--maps", type=int, help="random maps per codimension for verify (default 1000)")
        p.add_argument("--surfaces", type=int, help="random surfaces for the verify oracles (default 6)")
        p.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", dest="fmt", choices=FORMATS[name], default=FORMATS[name][0])
        if name == "point":
            p.add_argument("--paired", action="store_true", help="fail with exit 4 when the paired map is undefined")
    return parser


def _pick(args, analysis: dict, key: str, cast):
    val = getattr(args, key, None)
    if val is not None:
        return cast(val)
    if key in analysis:
        return cast(analysis[key])
    return cast(DEFAULTS[key])


def make_config(args, analysis: dict) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        surface=args.surface,
        at=_pick(args, analysis, "at", lambda v: tuple(float(x) for x in v)),
        range=_pick(args, analysis, "range", lambda v: tuple(float(x) for x in v)),
        res=_pick(args, analysis, "res", int),
        tol=_pick(args, analysis, "tol", float),
        samples=_pick(args, analysis, "samples", int),
        maps=_pick(args, analysis, "maps", int),
        surfaces=_pick(args, analysis, "surfaces", int),
        seed=_pick(args, analysis, "seed", int),
        fmt=args.fmt,
        out=args.out,
        paired=getattr(args, "paired", False),
    )
    if len(cfg.at) != 2 or len(cfg.range) != 4:
        raise ConfigError("analysis.at needs 2 numbers and analysis.range 4")
    if cfg.tol <= 0 or cfg.samples < 8 or cfg.res < 2 or cfg.maps < 1 or cfg.surfaces < 0:
        raise ConfigError("tol must be positive, samples >= 8, res >= 2, maps >= 1")
    return cfg


def run(cfg: RunConfig, spec) -> int:
    if cfg.command == "point":
        rep = report.point_report(spec, *cfg.at, cfg.tol, cfg.paired)
        text = dumps_json(rep) if cfg.fmt == "json" else report.flat_csv(to_jsonable(rep))
        write_text(cfg.out, text)
        return 0
    if cfg.command == "curves":
        samples = curve_set(local_quadratic_map_at(spec, *cfg.at), cfg.samples)
        if cfg.fmt == "csv":
            text = report.curves_csv(samples, spec.codim)
        elif cfg.fmt == "svg":
            text = curves_svg(samples)
        else:
            text = dumps_json(report.curves_report(spec, cfg.at, samples))
        write_text(cfg.out, text)
        return 0
    if cfg.command == "grid":
        s0, s1, t0, t1 = cfg.range
        result = grid_classify(spec, (s0, s1), (t0, t1), cfg.res, cfg.tol)
        if cfg.fmt == "csv":
            text = report.grid_csv(result)
        elif cfg.fmt == "svg":
            text = grid_svg(report.grid_rows(result), cfg.res, cfg.res)
        else:
            text = dumps_json(report.grid_report(result))
        write_text(cfg.out, text)
        if result.success_fraction < GRID_SUCCESS_FRACTION:
            raise GridFailureBudget(f"only {result.success_fraction:.1%} of grid cells succeeded")
        return 0
    summary = run_verify(cfg.seed, cfg.maps, cfg.surfaces, spec, cfg.at)
    rep = report.verify_report(summary)
    write_text(cfg.out, dumps_json(rep) if cfg.fmt == "json" else report.verify_csv(summary))
    if not summary.passed:
        raise PropertyFailure(f"property failed: {summary.first_failure()}")
    return 0


def _describe(exc: CurvaturaError) -> str:
    if isinstance(exc, ExprSyntaxError) and exc.source:
        return f"{exc}\n  {exc.source}\n  {' ' * exc.offset}^"
    return str(exc)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        surface = load_surface(args.surface) if args.surface else None
        cfg = make_config(args, surface.analysis if surface else {})
        return run(cfg, surface.spec if surface else None)
    except CurvaturaError as exc:
        print(f"curvatura: error: {_describe(exc)}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
