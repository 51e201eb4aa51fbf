"""Sweep harness: optimize the scheme across a mean-photon-number grid and
emit machine-readable rows alongside the reference bounds."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .discrimination import (
    DiscriminationProblem,
    fields_baseline,
    helstrom_bound,
)
from .fock import default_dim
from .optimize import (
    OptimizerOptions,
    TWO_PI,
    default_search_box,
    optimize_success,
)

CSV_COLUMNS = [
    "mean_n",
    "alpha",
    "p_opt",
    "helstrom",
    "fields_baseline",
    "phi1",
    "theta1",
    "xi1",
    "phi2",
    "theta2",
    "xi2",
    "evaluations",
    "converged",
]

WORKERS_ENV = "SEQDISC_WORKERS"


@dataclass(frozen=True)
class SweepConfig:
    n_min: float
    n_max: float
    steps: int
    q1: float = 0.5
    receivers: int = 2
    dim: int | None = None
    restarts: int = 40
    seed: int = 0
    baseline: bool = True
    phi_box_max: float = TWO_PI
    out_path: str | None = None
    out_format: str = "csv"

    def __post_init__(self):
        if not 0.0 <= self.n_min < self.n_max:
            raise ValueError("need 0 <= n_min < n_max")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if not 0.0 <= self.q1 <= 1.0:
            raise ValueError("prior q1 must lie in [0, 1]")
        if self.receivers < 1:
            raise ValueError("receivers must be >= 1")
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.out_format!r}")


@dataclass(frozen=True)
class SweepRow:
    mean_n: float
    alpha: float
    p_opt: float
    helstrom: float
    fields_baseline: float
    params: tuple[float, ...]
    evaluations: int
    converged: bool


def _point_seed(base_seed: int, index: int, stream: int = 0) -> int:
    # stable per-point seeds, independent of execution order
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(index, stream))
    return int(ss.generate_state(1)[0])


def sweep_point(config: SweepConfig, index: int) -> SweepRow:
    """Optimize one grid point and attach the reference bounds."""
    mean_n = np.linspace(config.n_min, config.n_max, config.steps)[index]
    alpha = math.sqrt(mean_n)
    dim = config.dim if config.dim is not None else default_dim(alpha)
    problem = DiscriminationProblem.symmetric(alpha, config.q1, dim)
    opts = OptimizerOptions(
        restarts=config.restarts,
        rng_seed=_point_seed(config.seed, index),
        search_box=default_search_box(config.receivers, config.phi_box_max),
    )
    result = optimize_success(problem, opts, receivers=config.receivers)
    s = math.exp(-2.0 * alpha * alpha)
    hel = helstrom_bound(config.q1, 1.0 - config.q1, s)
    if config.baseline:
        base = fields_baseline(
            s, config.q1, 1.0 - config.q1, seed=_point_seed(config.seed, index, 1)
        ).value
    else:
        base = math.nan
    flat = tuple(
        x for p in result.best_params for x in (p.phi, p.theta, p.xi)
    )
    return SweepRow(
        mean_n=float(mean_n),
        alpha=alpha,
        p_opt=result.best_value,
        helstrom=hel,
        fields_baseline=base,
        params=flat,
        evaluations=result.evaluations,
        converged=result.converged,
    )


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Evaluate every grid point; honors the worker-count environment
    variable, with deterministic ordered output either way."""
    workers = int(os.environ.get(WORKERS_ENV, "0") or "0")
    indices = list(range(config.steps))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point_task, [(config, i) for i in indices]))
    else:
        rows = [sweep_point(config, i) for i in indices]
    if config.out_path is not None:
        write_rows(rows, config.out_path, config.out_format, config.receivers)
    return rows


def _sweep_point_task(args: tuple[SweepConfig, int]) -> SweepRow:
    return sweep_point(*args)


def _param_columns(receivers: int) -> list[str]:
    return [
        f"{name}{l + 1}" for l in range(receivers) for name in ("phi", "theta", "xi")
    ]


def _row_record(row: SweepRow, receivers: int) -> dict:
    rec = {
        "mean_n": row.mean_n,
        "alpha": row.alpha,
        "p_opt": row.p_opt,
        "helstrom": row.helstrom,
        "fields_baseline": row.fields_baseline,
    }
    rec.update(dict(zip(_param_columns(receivers), row.params)))
    rec["evaluations"] = row.evaluations
    rec["converged"] = row.converged
    return rec


def format_rows(rows: list[SweepRow], fmt: str, receivers: int = 2) -> str:
    columns = CSV_COLUMNS[:5] + _param_columns(receivers) + CSV_COLUMNS[-2:]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            rec = _row_record(row, receivers)
            writer.writerow(
                [
                    f"{rec[c]:.12g}"
                    if isinstance(rec[c], float)
                    else str(rec[c]).lower()
                    if isinstance(rec[c], bool)
                    else str(rec[c])
                    for c in columns
                ]
            )
        return buf.getvalue()
    if fmt == "json":
        records = [
            {
                c: (
                    float(f"{rec[c]:.12g}")
                    if isinstance(rec[c], float)
                    else rec[c]
                )
                for c in columns
            }
            for rec in (_row_record(r, receivers) for r in rows)
        ]
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_rows(
    rows: list[SweepRow], path: str, fmt: str, receivers: int = 2
) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_rows(rows, fmt, receivers))


def read_rows(path: str) -> list[SweepRow]:
    """Parse a sweep file (CSV or JSON) back into rows."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        records = json.loads(text)
    else:
        records = []
        for rec in csv.DictReader(io.StringIO(text)):
            parsed = {}
            for k, v in rec.items():
                if k == "converged":
                    parsed[k] = v in ("true", "True")
                elif k == "evaluations":
                    parsed[k] = int(v)
                else:
                    parsed[k] = float(v)
            records.append(parsed)
    rows = []
    for rec in records:
        param_keys = [
            k
            for k in rec
            if k not in CSV_COLUMNS[:5] + ["evaluations", "converged"]
        ]
        rows.append(
            SweepRow(
                mean_n=rec["mean_n"],
                alpha=rec["alpha"],
                p_opt=rec["p_opt"],
                helstrom=rec["helstrom"],
                fields_baseline=rec["fields_baseline"],
                params=tuple(rec[k] for k in param_keys),
                evaluations=rec["evaluations"],
                converged=rec["converged"],
            )
        )
    return rows


def report_crossover(rows: list[SweepRow]) -> float | None:
    """Mean photon number where the scheme stops beating the baseline.

    Linear interpolation of p_opt - fields_baseline between the adjacent
    grid points of the (first) sign change; None if the gap never changes
    sign.
    """
    for a, b in zip(rows, rows[1:]):
        ga = a.p_opt - a.fields_baseline
        gb = b.p_opt - b.fields_baseline
        if math.isnan(ga) or math.isnan(gb):
            continue
        if ga == 0.0:
            return a.mean_n
        if ga * gb < 0.0:
            return a.mean_n + (b.mean_n - a.mean_n) * ga / (ga - gb)
    return None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqdisc",
        description=(
            "Sweep the optimal sequential-discrimination success probability "
            "over a mean-photon-number grid and compare it against the "
            "single-measurement optimum and the qubit-confined baseline."
        ),
    )
    parser.add_argument("--n-min", type=float, default=0.05)
    parser.add_argument("--n-max", type=float, default=3.0)
    parser.add_argument("--steps", type=int, default=60)
    parser.add_argument("--prior-q1", type=float, default=0.5)
    parser.add_argument("--receivers", type=int, default=2)
    parser.add_argument("--dim", type=int, default=None,
                        help="truncation dimension override")
    parser.add_argument("--restarts", type=int, default=40)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", metavar="PATH", default=None)
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--baseline", choices=["on", "off"], default="on")
    parser.add_argument("--phi-box-max", type=float, default=TWO_PI)
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="key=value defaults file; flags win on conflict")
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, path: str) -> None:
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            defaults[key.replace("-", "_")] = value
    known = {a.dest for a in parser._actions}
    unknown = set(defaults) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    parser.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args, _ = parser.parse_known_args(argv)
    if args.config:
        try:
            _apply_config_file(parser, args.config)
        except (OSError, ValueError) as exc:
            parser.exit(2, f"seqdisc: config error: {exc}\n")
    args = parser.parse_args(argv)
    try:
        config = SweepConfig(
            n_min=float(args.n_min),
            n_max=float(args.n_max),
            steps=int(args.steps),
            q1=float(args.prior_q1),
            receivers=int(args.receivers),
            dim=None if args.dim in (None, "") else int(args.dim),
            restarts=int(args.restarts),
            seed=int(args.seed),
            baseline=str(args.baseline) == "on",
            phi_box_max=float(args.phi_box_max),
            out_path=args.out,
            out_format=str(args.format),
        )
    except ValueError as exc:
        parser.exit(2, f"seqdisc: invalid configuration: {exc}\n")
    try:
        rows = run_sweep(config)
    except OSError as exc:
        print(f"seqdisc: {exc}", file=sys.stderr)
        return 1
    if config.out_path is None:
        sys.stdout.write(format_rows(rows, config.out_format, config.receivers))
    else:
        print(f"wrote {len(rows)} rows to {config.out_path}")
    if config.baseline:
        cross = report_crossover(rows)
        if cross is None:
            print("crossover: none within grid")
        else:
            print(f"crossover: mean photon number {cross:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
