"""Command-line driver: generate | verify | sweep | energy | project | lattice.

Exit codes: 0 success, 2 invalid parameters, 3 arithmetic overflow, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import families
from .applications import (
    energy_sum,
    energy_via_incidence,
    family_line_count,
    lattice_projection_size,
    project_all,
)
from .construction import (
    ConfigError,
    GridParams,
    Line,
    LineSet,
    SlopeParams,
    gen_A,
    gen_lines,
    gen_slopes,
)
from .incidence import (
    RichnessReport,
    SharpnessReport,
    line_richness,
    membership_index,
    richness_report,
    sharpness_from_counts,
)
from .qk import ArithmeticOverflow, QkNum, RingContext, RingError, fraction_str

log = logging.getLogger("st_forge")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VALIDATION, EXIT_OVERFLOW, EXIT_IO = 0, 2, 3, 4
DEFAULT_MAX_CELLS = 2_000_000_000
ORACLE_SAMPLE = 128

SWEEP_COLUMNS = [
    "k", "s", "N_eff", "M", "c", "card_A", "card_S", "pairs_raw", "card_L",
    "r_min", "r_max", "mean_richness_num", "mean_richness_den",
    "st_bound_num", "st_bound_den", "ratio_num", "ratio_den",
]


class WorkCapExceeded(ConfigError):
    pass


def max_cells() -> int:
    raw = os.environ.get("ST_FORGE_MAX_CELLS")
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"ST_FORGE_MAX_CELLS must be an integer, got {raw!r}")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"expected a rational like 1/2, got {text!r}")


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}")


@dataclass
class RunConfig:
    command: str
    k: int = 2
    N: Optional[int] = None
    side: Optional[int] = None
    M: Optional[int] = None
    r: Optional[int] = None
    c: Fraction = Fraction(1, 2)
    gcd_cap: int = 5
    fmt: str = "json"
    out: Optional[str] = None
    oracle: bool = False
    threads: int = 1
    sides: list[int] = field(default_factory=list)
    Ms: list[int] = field(default_factory=list)
    n: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None

    def ring(self) -> RingContext:
        return RingContext(self.k)

    def grid(self, side: Optional[int] = None) -> GridParams:
        ctx = self.ring()
        if side is not None:
            return GridParams.from_side(ctx, side)
        if self.side is not None:
            return GridParams.from_side(ctx, self.side)
        if self.N is not None:
            return GridParams(ctx, self.N)
        raise ConfigError("one of --N or --side is required")

    def slope_M(self, grid: GridParams, M: Optional[int] = None) -> int:
        if M is None:
            M = self.M
        if M is None:
            if self.r is None:
                raise ConfigError("one of --M or --r is required")
            if self.r < 1:
                raise ConfigError(f"r must be >= 1, got {self.r}")
            M = grid.N // self.r
        if M < 1:
            raise ConfigError(f"M must be >= 1, got {M}")
        if M > grid.N:
            raise ConfigError(f"M = {M} exceeds N = {grid.N}; richness r = N/M must be >= 1")
        return M

    def slopes(self, grid: GridParams, M: Optional[int] = None) -> SlopeParams:
        sp = SlopeParams(self.slope_M(grid, M), self.c, self.gcd_cap)
        if sp.narrow_interval():
            log.warning(
                "(1-c)*t < 1 for M=%d, c=%s: the magnitude interval holds a single value",
                sp.M, sp.c,
            )
        return sp


# ---------------------------------------------------------------------------
# serialisation helpers

def zk_row(x) -> dict:
    return {"a": x.a, "b": x.b}


def qk_row(x: QkNum) -> dict:
    return {"a": x.a, "b": x.b, "d": x.d}


def jsonable(v):
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, QkNum):
        return qk_row(v)
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return v


def dump_json(obj: dict) -> str:
    return json.dumps(jsonable(obj), indent=2) + "\n"


def dump_csv(columns: list[str], rows: list[dict], title: str) -> str:
    buf = io.StringIO()
    buf.write(f"# st_forge {title} schema v{SCHEMA_VERSION}\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: jsonable(row[c]) for c in columns})
    return buf.getvalue()


def emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def params_dict(cfg: RunConfig, grid: GridParams, sp: Optional[SlopeParams] = None) -> dict:
    d = {"k": grid.k, "s": grid.s, "N": grid.N, "N_eff": grid.s ** 2}
    if sp is not None:
        d.update({"M": sp.M, "c": sp.c, "gcd_cap": sp.gcd_cap, "t": sp.t, "magnitude_lo": sp.lo})
    return d


# ---------------------------------------------------------------------------
# pipeline

def check_work(grid: GridParams, slopes) -> int:
    """Counting cells the pipeline will touch; raises past ST_FORGE_MAX_CELLS."""
    cap = max_cells()
    total = 0
    x1, x2 = families.box(grid.s)
    for sl in slopes:
        v = sl.value
        w1, w2 = families.mul_u(v.a, v.b, v.k, x1, x2)
        total += families.dense_cells(v.d, grid.s, -w1, -w2)
        if total > cap:
            raise WorkCapExceeded(
                f"counting work exceeds ST_FORGE_MAX_CELLS={cap}; reduce --side/--M "
                "or raise the environment variable"
            )
    return total


@dataclass
class Pipeline:
    grid: GridParams
    sp: SlopeParams
    slopes: list
    lines: LineSet
    report: RichnessReport
    sharp: Optional[SharpnessReport]


def run_pipeline(cfg: RunConfig, grid: GridParams, sp: SlopeParams) -> Pipeline:
    slopes = gen_slopes(sp, grid.ctx)
    check_work(grid, slopes)
    lines = gen_lines(grid, slopes)
    report = richness_report(grid, lines, sp.M, threads=cfg.threads)
    sharp = sharpness_from_counts(grid.card_P, report.n_lines, report.r_min, report.target) \
        if report.n_lines else None
    return Pipeline(grid, sp, slopes, lines, report, sharp)


def sweep_row(pl: Pipeline) -> dict:
    rep, sharp = pl.report, pl.sharp
    mean = rep.mean
    bound = sharp.st_bound_value if sharp else Fraction(0)
    ratio = sharp.ratio if sharp else Fraction(0)
    return {
        "k": pl.grid.k, "s": pl.grid.s, "N_eff": pl.grid.s ** 2, "M": pl.sp.M, "c": pl.sp.c,
        "card_A": pl.grid.card_A, "card_S": len(pl.slopes), "pairs_raw": pl.lines.raw_pairs,
        "card_L": rep.n_lines, "r_min": rep.r_min, "r_max": rep.r_max,
        "mean_richness_num": mean.numerator, "mean_richness_den": mean.denominator,
        "st_bound_num": bound.numerator, "st_bound_den": bound.denominator,
        "ratio_num": ratio.numerator, "ratio_den": ratio.denominator,
    }


def oracle_sample_indices(n: int, size: int = ORACLE_SAMPLE) -> list[int]:
    """First, last and evenly strided indices; deterministic."""
    if n <= size:
        return list(range(n))
    stride = (n - 1) / (size - 1)
    return sorted({round(i * stride) for i in range(size)})


def oracle_spot_check(pl: Pipeline) -> dict:
    """Compare engine counts with the per-line field evaluation on a fixed sample."""
    A = gen_A(pl.grid)
    member = membership_index(A)
    index = [(fam, i) for fam in pl.lines.families for i in range(len(fam))]
    sample = oracle_sample_indices(len(index))
    if len(sample) * len(A) > max_cells():
        raise WorkCapExceeded("oracle spot check exceeds ST_FORGE_MAX_CELLS")
    mismatches = 0
    for j in sample:
        fam, i = index[j]
        line = Line(fam.slope.value, fam.intercept(i))
        if line_richness(line, A, member) != int(pl.report.counts[j]):
            mismatches += 1
    return {"oracle_agreement": mismatches == 0, "oracle_lines_checked": len(sample)}


# ---------------------------------------------------------------------------
# commands

def cmd_generate(cfg: RunConfig) -> int:
    grid = cfg.grid()
    sp = cfg.slopes(grid) if (cfg.M is not None or cfg.r is not None) else None
    A = gen_A(grid)
    slopes = gen_slopes(sp, grid.ctx) if sp else []
    if slopes:
        check_work(grid, slopes)
    lines = gen_lines(grid, slopes) if slopes else None
    a_rows = [zk_row(x) for x in A]
    s_rows = [
        {**qk_row(sl.value), "p1": sl.witness[0], "p2": sl.witness[1],
         "q1": sl.witness[2], "q2": sl.witness[3]}
        for sl in slopes
    ]
    l_rows = []
    if lines is not None:
        for fam in lines.families:
            v = fam.slope.value
            for i in range(len(fam)):
                t = fam.intercept(i)
                l_rows.append({"slope_a": v.a, "slope_b": v.b, "slope_d": v.d,
                               "intercept_a": t.a, "intercept_b": t.b, "intercept_d": t.d})
    if cfg.fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": "generate",
            "params": params_dict(cfg, grid, sp),
            "card_A": len(A),
            "card_S": len(slopes),
            "pairs_raw": lines.raw_pairs if lines is not None else 0,
            "card_L": len(l_rows),
            "A": a_rows,
            "S": s_rows,
            "L": l_rows,
        }
        emit(dump_json(doc), cfg.out)
        return EXIT_OK
    tables = {
        "A": dump_csv(["a", "b"], a_rows, "generate-A"),
        "S": dump_csv(["a", "b", "d", "p1", "p2", "q1", "q2"], s_rows, "generate-S"),
        "L": dump_csv(["slope_a", "slope_b", "slope_d", "intercept_a", "intercept_b",
                       "intercept_d"], l_rows, "generate-L"),
    }
    if cfg.out is None or cfg.out == "-":
        sys.stdout.write("".join(tables.values()))
    else:
        outdir = Path(cfg.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for name, text in tables.items():
            (outdir / f"{name}.csv").write_text(text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    grid = cfg.grid()
    sp = cfg.slopes(grid)
    pl = run_pipeline(cfg, grid, sp)
    if pl.sharp is None:
        raise ConfigError("the line set is empty (anchor side s//2 is 0); increase --side")
    row = sweep_row(pl)
    extra = oracle_spot_check(pl) if cfg.oracle else {}
    if cfg.fmt == "csv":
        cols = SWEEP_COLUMNS + list(extra)
        emit(dump_csv(cols, [{**row, **extra}], "verify"), cfg.out)
        return EXIT_OK
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "params": params_dict(cfg, grid, sp),
        "card_A": grid.card_A,
        "card_P": grid.card_P,
        "card_S": len(pl.slopes),
        "pairs_raw": pl.lines.raw_pairs,
        "card_L": len(pl.lines),
        "richness": pl.report.summary(),
        "sharpness": pl.sharp.as_dict(),
        **extra,
    }
    emit(dump_json(doc), cfg.out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    sides = cfg.sides or ([cfg.side] if cfg.side else [])
    if not sides:
        raise ConfigError("sweep needs --sides (comma-separated) or --side")
    Ms = cfg.Ms or [None]
    rows = []
    for s in sides:
        grid = cfg.grid(side=s)
        for M in Ms:
            sp = cfg.slopes(grid, M)
            rows.append(sweep_row(run_pipeline(cfg, grid, sp)))
    if cfg.fmt == "json":
        emit(dump_json({"schema_version": SCHEMA_VERSION, "command": "sweep",
                        "columns": SWEEP_COLUMNS, "rows": rows}), cfg.out)
    else:
        emit(dump_csv(SWEEP_COLUMNS, rows, "sweep"), cfg.out)
    return EXIT_OK


def cmd_energy(cfg: RunConfig) -> int:
    grid = cfg.grid()
    sp = cfg.slopes(grid)
    slopes = gen_slopes(sp, grid.ctx)
    report = energy_sum(grid, slopes)
    rows = [{**qk_row(v), "energy": e} for v, e in report.per_slope]
    agree = None
    if cfg.oracle:
        agree = all(energy_via_incidence(grid, v) == e for v, e in report.per_slope)
        for row, (v, _) in zip(rows, report.per_slope):
            row["energy_incidence"] = energy_via_incidence(grid, v)
    lo, hi = report.reference_bracket
    if cfg.fmt == "csv":
        cols = ["a", "b", "d", "energy"] + (["energy_incidence"] if cfg.oracle else [])
        emit(dump_csv(cols, rows, "energy"), cfg.out)
        return EXIT_OK
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "energy",
        "params": params_dict(cfg, grid, sp),
        "card_A": report.card_A,
        "card_X": report.card_X,
        "total": report.total,
        "reference_floor": lo,
        "reference_ceil": hi,
        "per_slope": rows,
    }
    if agree is not None:
        doc["oracle_agreement"] = agree
    emit(dump_json(doc), cfg.out)
    return EXIT_OK


def cmd_project(cfg: RunConfig) -> int:
    grid = cfg.grid()
    sp = cfg.slopes(grid)
    slopes = gen_slopes(sp, grid.ctx)
    reports = project_all(grid, slopes)
    rows = [{**qk_row(r.slope), "n_classes": r.n_classes, "expected_floor": r.expected}
            for r in reports]
    agree = None
    if cfg.oracle:
        counts = [family_line_count(grid, r.slope) for r in reports]
        agree = counts == [r.n_classes for r in reports]
    if cfg.fmt == "csv":
        emit(dump_csv(["a", "b", "d", "n_classes", "expected_floor"], rows, "project"), cfg.out)
        return EXIT_OK
    doc = {"schema_version": SCHEMA_VERSION, "command": "project",
           "params": params_dict(cfg, grid, sp), "card_S": len(slopes), "rows": rows}
    if agree is not None:
        doc["oracle_agreement"] = agree
    emit(dump_json(doc), cfg.out)
    return EXIT_OK


def cmd_lattice(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.p is None or cfg.q is None:
        raise ConfigError("lattice needs --n, --p and --q")
    try:
        size = lattice_projection_size(cfg.n, cfg.p, cfg.q)
    except ValueError as e:
        raise ConfigError(str(e))
    row = {"n": cfg.n, "p": cfg.p, "q": cfg.q, "size": size}
    if cfg.fmt == "csv":
        emit(dump_csv(["n", "p", "q", "size"], [row], "lattice"), cfg.out)
    else:
        emit(dump_json({"schema_version": SCHEMA_VERSION, "command": "lattice", **row}), cfg.out)
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "energy": cmd_energy,
    "project": cmd_project,
    "lattice": cmd_lattice,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=2, help="non-square radicand (default 2)")
    size = common.add_mutually_exclusive_group()
    size.add_argument("--N", type=int, help="scale N; side s = isqrt(N)")
    size.add_argument("--side", type=int, help="side s directly (N_eff = s^2)")
    rich = common.add_mutually_exclusive_group()
    rich.add_argument("--M", type=str, help="slope scale M (comma list allowed for sweep)")
    rich.add_argument("--r", type=int, help="richness r; M = N // r")
    common.add_argument("--c", type=str, default="1/2", help="lower magnitude cutoff, rational p/q")
    common.add_argument("--gcd-cap", type=int, default=5)
    common.add_argument("--format", choices=["json", "csv"], default="json", dest="fmt")
    common.add_argument("--out", type=str, default=None, help="output path (csv generate: directory)")
    common.add_argument("--oracle", action="store_true", help="add oracle cross-checks")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="st-forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("generate", "verify", "energy", "project"):
        sub.add_parser(name, parents=[common])
    sw = sub.add_parser("sweep", parents=[common])
    sw.add_argument("--sides", type=str, default=None, help="comma-separated side values")
    lat = sub.add_parser("lattice", parents=[common])
    lat.add_argument("--n", type=int, dest="lat_n")
    lat.add_argument("--p", type=int)
    lat.add_argument("--q", type=int)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    Ms = parse_int_list(ns.M) if ns.M else []
    cfg = RunConfig(
        command=ns.command,
        k=ns.k,
        N=ns.N,
        side=ns.side,
        M=Ms[0] if len(Ms) == 1 else None,
        r=ns.r,
        c=parse_fraction(ns.c),
        gcd_cap=ns.gcd_cap,
        fmt=ns.fmt,
        out=ns.out,
        oracle=ns.oracle,
        threads=max(1, ns.threads),
        sides=parse_int_list(ns.sides) if getattr(ns, "sides", None) else [],
        Ms=Ms,
        n=getattr(ns, "lat_n", None),
        p=getattr(ns, "p", None),
        q=getattr(ns, "q", None),
    )
    if len(Ms) > 1 and cfg.command != "sweep":
        raise ConfigError("a list of M values is only accepted by sweep")
    return cfg


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = config_from_args(ns)
        cfg.ring()  # validate k before any work
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, RingError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ArithmeticOverflow, OverflowError, MemoryError) as e:
        print(f"overflow: {e}", file=sys.stderr)
        return EXIT_OVERFLOW
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
