"""Command-line front end: ``gdop sweep | verify | export-moments``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 bound violation during a sweep.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .analysis import BoundViolation, measure
from .exact import as_exact
from .moments import CapExceededError, monomial_image_closed, monomial_image_recurrence, write_moment_table
from .operator import DiskSpec
from .series import TruncationPolicy, resolve_function
from . import verify as verify_mod

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_BOUND = 3

log = logging.getLogger("gdop")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    functions: list[str]
    n_values: list[int]
    alphas: list[Fraction]
    r: float = 1.0
    r1: float | None = None
    l_values: list[int] = field(default_factory=list)
    trunc_tol: float = 1e-14
    grid_M: int = 720
    output_format: str = "csv"
    output_path: str = "-"

    @classmethod
    def from_dict(cls, doc: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")
        try:
            alphas = [as_exact(a) for a in doc.get("alphas", [])]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad alpha: {exc}") from exc
        funcs = []
        for f in doc.get("functions", []):
            f = str(f)
            if base_dir is not None and not Path(f).is_absolute() and (base_dir / f).is_file():
                f = str(base_dir / f)
            funcs.append(f)
        try:
            cfg = cls(
                functions=funcs,
                n_values=[_as_int(v) for v in doc.get("n_values", [])],
                alphas=alphas,
                r=float(doc.get("r", 1.0)),
                r1=None if doc.get("r1") is None else float(doc["r1"]),
                l_values=[_as_int(v) for v in doc.get("l_values", [])],
                trunc_tol=float(doc.get("trunc_tol", 1e-14)),
                grid_M=_as_int(doc.get("grid_M", 720)),
                output_format=str(doc.get("output_format", "csv")),
                output_path=str(doc.get("output_path", "-")),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not self.functions:
            raise ConfigError("functions must be nonempty")
        if not self.n_values:
            raise ConfigError("n_values must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("every n must be >= 1")
        if not self.alphas:
            raise ConfigError("alphas must be nonempty")
        if not self.r >= 1:
            raise ConfigError("r must be >= 1")
        if self.l_values:
            if any(l < 1 for l in self.l_values):
                raise ConfigError("derivative orders must be >= 1")
            if self.r1 is None or not self.r < self.r1:
                raise ConfigError("derivative runs need r1 > r")
        if self.grid_M < 8:
            raise ConfigError("grid_M must be >= 8")
        if self.output_format not in ("csv", "json"):
            raise ConfigError("output_format must be 'csv' or 'json'")
        if not self.trunc_tol > 0:
            raise ConfigError("trunc_tol must be positive")
        for spec in self.functions:
            try:
                f = resolve_function(spec)
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"unknown function {spec!r}: {exc}") from exc
            if not self.r < f.radius:
                raise ConfigError(f"r={self.r} is not inside the radius of {f.label}")
            if self.l_values and not self.r1 < f.radius:
                raise ConfigError(f"r1={self.r1} is not inside the radius of {f.label}")


def _as_int(v) -> int:
    if isinstance(v, bool) or not float(v).is_integer():
        raise ValueError(f"expected an integer, got {v!r}")
    return int(v)


def _fmt(x: float) -> str:
    return repr(float(x))


def _row_task(args) -> tuple[dict, str | None]:
    spec, n, alpha, cfg = args
    f = resolve_function(spec)
    rec = measure(
        f,
        n,
        alpha,
        DiskSpec(cfg.r, f.radius, cfg.grid_M),
        TruncationPolicy(cfg.trunc_tol),
        l_values=cfg.l_values,
        r1=cfg.r1,
    )
    row = {
        "f_label": rec.f_label,
        "n": rec.n,
        "alpha": str(rec.alpha),
        "r": rec.r,
        "sup_error": rec.sup_error,
        "bound": rec.bound,
        "bound_ratio": rec.bound_ratio,
        "voronovskaja_residual": rec.voronovskaja_residual,
    }
    for l in cfg.l_values:
        row[f"derivative_error_l{l}"] = rec.derivative_errors[l]
        row[f"derivative_bound_l{l}"] = rec.derivative_bounds[l]
    try:
        rec.check()
        violation = None
    except BoundViolation as exc:
        violation = str(exc)
    return row, violation


def sweep_rows(cfg: ExperimentConfig, jobs: int = 1) -> list[tuple[dict, str | None]]:
    tasks = [(spec, n, a, cfg) for spec in cfg.functions for n in cfg.n_values for a in cfg.alphas]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            return list(pool.map(_row_task, tasks))
    return [_row_task(t) for t in tasks]


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0]) if rows else []
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row.values()])
    return buf.getvalue()


def run_sweep(cfg: ExperimentConfig, jobs: int = 1, stdout=None) -> int:
    stdout = stdout or sys.stdout
    results = sweep_rows(cfg, jobs)
    text = render([row for row, _ in results], cfg.output_format)
    if cfg.output_path == "-":
        stdout.write(text)
    else:
        Path(cfg.output_path).write_text(text)
    for row, violation in results:
        if violation:
            print(f"bound violation: {violation}", file=sys.stderr)
            print(f"offending row: {row}", file=sys.stderr)
            return EXIT_BOUND
    return EXIT_OK


def default_jobs() -> int:
    env = os.environ.get("GDOP_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# --------------------------------------------------------------------------

def _cmd_sweep(args) -> int:
    try:
        path = Path(args.config)
        doc = json.loads(path.read_text())
        cfg = ExperimentConfig.from_dict(doc, base_dir=path.parent)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    jobs = args.jobs or 0
    if os.environ.get("GDOP_JOBS"):
        jobs = default_jobs()
    elif jobs <= 0:
        jobs = default_jobs()
    try:
        return run_sweep(cfg, jobs)
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _cmd_verify(args) -> int:
    level = "full" if args.full else "fast"
    try:
        report = verify_mod.run_verify(level)
    except verify_mod.VerificationFailure as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    for name in report.checks:
        print(f"ok  {name}")
    print(f"verify ({level}): {len(report.checks)} checks passed")
    return EXIT_OK


def _cmd_export(args) -> int:
    try:
        alpha = as_exact(args.alpha)
        build = monomial_image_recurrence if args.method == "recurrence" else monomial_image_closed
        table = build(args.n, alpha, args.max_p)
        write_moment_table(table, args.out)
    except (CapExceededError, ValueError, TypeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gdop", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a convergence sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--full", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export-moments", help="write an exact moment table as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, help="exact ratio such as 1/3")
    p.add_argument("--max-p", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=("closed_form", "recurrence"), default="closed_form")
    p.set_defaults(func=_cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
