"""Seeded batch experiments with JSON and CSV reports.

An :class:`ExperimentSpec` names a generator (n, d, sampler mode, seed range)
and the analyses to run on each sample.  Records are computed per seed,
possibly in worker processes, and always assembled in seed order, so a report
can be regenerated bit-for-bit (timings aside) from the spec embedded in it.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .cycles import bicycle_free_radius, cycle_counts, enumerate_short_cycles, girth, short_cycle_bound_check
from .fixer import FixParams, fix, verify_fix
from .graph import graph_hash
from .io import jsonable
from .lifts import LiftPipelineConfig, lift_pipeline
from .sampler import SamplerConfig, sample
from .spectral import spectrum_summary

log = logging.getLogger(__name__)

THREADS_ENV = "GIRTHFORGE_THREADS"
QUANTILES = (0.1, 0.5, 0.9)


@dataclass
class ExperimentSpec:
    name: str
    n: int
    d: int = 3
    seed_start: int = 0
    n_seeds: int = 10
    mode: str = "uniform-simple"
    girth: bool = True
    bicycle_free: bool = True
    cycles_limit: int | None = None
    short_cycle_bound: bool = False
    spectra: bool = False
    fix_r: int | None = None
    fix_force: bool = False
    fix_mark_radius: int | None = None
    fix_spectra: bool = False
    pipeline: dict | None = None
    # Boolean record field -> minimum fraction of seeds where it must hold.
    thresholds: dict[str, float] = field(default_factory=dict)
    out_dir: str = "."

    def __post_init__(self):
        if self.n_seeds < 1:
            raise ValueError("seed range must be nonempty")
        if self.seed_start < 0:
            raise ValueError("seed_start must be nonnegative")
        SamplerConfig(self.n, self.d, self.seed_start, self.mode)
        for key, frac in self.thresholds.items():
            if not 0 <= frac <= 1:
                raise ValueError(f"threshold for {key!r} must lie in [0, 1]")

    @property
    def seeds(self) -> range:
        return range(self.seed_start, self.seed_start + self.n_seeds)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown experiment spec fields: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentSpec":
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(f"experiment spec not found: {path}")
        return cls.from_dict(json.loads(path.read_text()))


def worker_count(default: int = 1) -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None


def run_seed(spec: ExperimentSpec, seed: int) -> dict:
    """One record; analysis failures are captured in ``error`` rather than raised."""
    with warnings.catch_warnings():
        # Forced-fix warnings are kept in the record instead.
        warnings.simplefilter("ignore", UserWarning)
        return _run_seed(spec, seed)


def _run_seed(spec: ExperimentSpec, seed: int) -> dict:
    rec: dict = {"seed": seed}
    timings: dict[str, float] = {}

    def timed(key, fn, *args, **kw):
        t0 = time.perf_counter()
        out = fn(*args, **kw)
        timings[key] = time.perf_counter() - t0
        return out

    try:
        g = timed("sample", sample, SamplerConfig(spec.n, spec.d, seed, spec.mode))
        rec.update(graph_hash=graph_hash(g), n=g.n, m=g.m, simple=g.is_simple())
        if spec.girth:
            rec["girth"] = timed("girth", girth, g)
        if spec.bicycle_free:
            rec["bicycle_free_radius"] = timed("bicycle_free", bicycle_free_radius, g)
        if spec.cycles_limit:
            cyc = timed("cycles", enumerate_short_cycles, g, spec.cycles_limit)
            rec["cycle_counts"] = cycle_counts(cyc, spec.cycles_limit)
        if spec.short_cycle_bound:
            ok, detail = timed("short_cycle_bound", short_cycle_bound_check, g, spec.d)
            rec["short_cycle_bound"] = ok
            rec["short_cycle_detail"] = {i: {"count": x, "bound": R} for i, (x, R) in detail.items()}
        if spec.spectra:
            rec["lambda"] = timed("spectrum", spectrum_summary, g).lam
        if spec.fix_r is not None:
            params = FixParams(spec.fix_r, force=spec.fix_force, mark_radius=spec.fix_mark_radius)
            out, plan = timed("fix", fix, g, params)
            audit = verify_fix(g, out, plan)
            fx = {"tau": plan.tau, "h": plan.h, "forced": plan.forced, "warnings": plan.warnings, **audit}
            fx["ok"] = bool(audit["regular"] and audit["girth_ok"])
            if spec.fix_spectra:
                fx["lambda"] = timed("fix_spectrum", spectrum_summary, out).lam
            rec["fix"] = fx
        if spec.pipeline is not None:
            cfg = LiftPipelineConfig(**{**spec.pipeline, "seed": seed})
            out, prov = timed("pipeline", lift_pipeline, cfg)
            rec["pipeline"] = prov["result"]
    except Exception as exc:  # recorded, judged at the aggregate level
        log.warning("seed %d failed: %s", seed, exc)
        rec["error"] = f"{type(exc).__name__}: {exc}"
    rec["timings"] = timings
    return rec


def _flatten(rec: dict, prefix: str = "") -> dict:
    flat = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten(val, name + "."))
        elif not isinstance(val, (list, tuple)):
            flat[name] = val
    return flat


def aggregate(records: list[dict]) -> dict:
    """Means and quantiles of numeric fields, pass fractions of boolean ones."""
    flat = [_flatten({k: v for k, v in r.items() if k not in ("timings", "seed")}) for r in records]
    keys = sorted({k for f in flat for k in f})
    agg: dict = {"n_records": len(records), "n_failed": sum("error" in r for r in records)}
    stats = {}
    for key in keys:
        vals = [f[key] for f in flat if key in f]
        if all(isinstance(v, (bool, np.bool_)) for v in vals):
            stats[key] = {"pass_fraction": sum(map(bool, vals)) / len(records), "count": len(vals)}
        elif all(isinstance(v, (int, float, np.integer, np.floating)) for v in vals):
            arr = np.asarray(vals, dtype=float)
            finite = arr[np.isfinite(arr)]
            entry = {"count": len(vals), "n_inf": int(np.sum(np.isinf(arr)))}
            if finite.size:
                entry["mean"] = float(finite.mean())
                entry["std"] = float(finite.std(ddof=1)) if finite.size > 1 else 0.0
                entry["quantiles"] = {str(q): float(np.quantile(finite, q)) for q in QUANTILES}
            stats[key] = entry
    agg["fields"] = stats
    return agg


def evaluate_thresholds(spec: ExperimentSpec, agg: dict) -> dict:
    results = {}
    for key, need in sorted(spec.thresholds.items()):
        got = agg["fields"].get(key, {}).get("pass_fraction", 0.0)
        results[key] = {"required": need, "observed": got, "passed": got >= need}
    return results


def run_experiment(spec: ExperimentSpec, workers: int | None = None, write: bool = True) -> dict:
    """Run every seed and return the report; with ``write`` also save report.json and summary.csv."""
    workers = worker_count() if workers is None else workers
    seeds = list(spec.seeds)
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(seeds))) as pool:
            records = list(pool.map(run_seed, [spec] * len(seeds), seeds))
    else:
        records = [run_seed(spec, s) for s in seeds]
    records.sort(key=lambda r: r["seed"])
    agg = aggregate(records)
    checks = evaluate_thresholds(spec, agg)
    report = {
        "tool": "girthforge",
        "version": __version__,
        "spec": spec.to_dict(),
        "master_seed": spec.seed_start,
        "records": records,
        "aggregate": agg,
        "thresholds": checks,
        "all_failed": agg["n_failed"] == len(records),
        "passed": all(c["passed"] for c in checks.values()) and agg["n_failed"] < len(records),
    }
    if write:
        write_report(report, spec.out_dir)
    return report


def write_report(report: dict, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jpath, cpath = out / "report.json", out / "summary.csv"
    jpath.write_text(json.dumps(jsonable(report), indent=2, sort_keys=True))
    rows = [_flatten(jsonable({k: v for k, v in r.items() if k != "timings"})) for r in report["records"]]
    cols = sorted({k for row in rows for k in row}, key=lambda c: (c != "seed", c))
    with cpath.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        writer.writerows(rows)
    return jpath, cpath


def rerun_report(report: dict, workers: int | None = None) -> dict:
    """Recompute a report from its embedded spec without writing files."""
    return run_experiment(ExperimentSpec.from_dict(report["spec"]), workers=workers, write=False)
