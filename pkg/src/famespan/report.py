"""Report artifacts: CSV/JSON writers, interval formatting, manifest.

All writers emit byte-stable output: fixed row order, fixed float
formatting, LF newlines, no wall-clock anywhere.  Numbers render as
integers when integral; fractional durations carry three decimals;
exponents carry two.  Intervals render as "27 (25 .. 29)".
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .dates import US_PER_DAY, epoch_us, iso, parse_timestamp
from .errors import StatsError
from .peaks import FamePeriod
from .stats import (
    BootstrapInterval,
    Cohort,
    PowerLawAlphaStatistic,
    PowerLawFit,
    QuantileStatistic,
    bootstrap_many,
    derive_seed,
    fit_power_law,
    quantile,
)

NA = "n/a"

QUANTILE_LEVELS = (0.5, 0.9, 0.99)


def format_duration(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return f"{x:.3f}"


def format_alpha(a: float) -> str:
    return f"{a:.2f}"


def format_interval(iv: BootstrapInterval, fmt=format_duration) -> str:
    return f"{fmt(iv.point)} ({fmt(iv.lo)} .. {fmt(iv.hi)})"


def write_periods_csv(periods: Sequence[FamePeriod], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["name", "method", "start", "end", "peak_date", "duration_days"])
        for p in periods:
            writer.writerow(
                [p.name, p.method, iso(p.start), iso(p.end), iso(p.peak_date),
                 format_duration(p.duration_days)]
            )


def read_periods_csv(path: str | Path) -> list[FamePeriod]:
    """Re-read persisted periods; durations are recomputed from the full-
    precision start/end timestamps so rounding in the CSV cannot drift."""
    out: list[FamePeriod] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:2] != ["name", "method"]:
            raise ValueError(f"{path}: not a periods CSV")
        for row in reader:
            name, method, start_raw, end_raw, peak_raw, _dur = row
            start = parse_timestamp(start_raw)
            end = parse_timestamp(end_raw)
            duration = (epoch_us(end) - epoch_us(start)) / US_PER_DAY
            out.append(
                FamePeriod(name, method, start, end, parse_timestamp(peak_raw), duration)
            )
    return out


def point_quantiles(cohort: Cohort) -> dict[str, float]:
    return {f"p{q * 100:g}": quantile(cohort.durations, q) for q in QUANTILE_LEVELS}


def write_quantile_series_csv(
    cohorts: Sequence[Cohort],
    path: str | Path,
    intervals: dict[str, dict[str, BootstrapInterval]] | None = None,
) -> None:
    """One row per cohort: bucket_start, width, n, p50, p90, p99.

    When bootstrap intervals are supplied (keyed by cohort label), lo/hi
    columns are appended for each quantile.
    """
    cols = [f"p{q * 100:g}" for q in QUANTILE_LEVELS]
    header = ["bucket_start", "width", "n"] + cols
    if intervals is not None:
        for c in cols:
            header += [f"{c}_lo", f"{c}_hi"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for cohort in cohorts:
            points = point_quantiles(cohort)
            row = [cohort.bucket_start.isoformat(), cohort.width_months, cohort.durations.size]
            row += [format_duration(points[c]) for c in cols]
            if intervals is not None:
                ivs = intervals[cohort.label]
                for c in cols:
                    row += [format_duration(ivs[c].lo), format_duration(ivs[c].hi)]
            writer.writerow(row)


def write_cumulative_curve_csv(
    cohort: Cohort, curve: list[tuple[float, int]], path: str | Path,
    fit: PowerLawFit | None,
) -> None:
    """Plot-ready survival curve; the header comment carries the log-log
    reference slope (one plus the fitted exponent, because the curve is
    cumulative)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        slope = format_alpha(fit.alpha + 1.0) if fit is not None else NA
        fh.write(f"# cohort={cohort.label} n={cohort.durations.size} reference_slope={slope}\n")
        fh.write("x,y\n")
        for x, y in curve:
            fh.write(f"{format_duration(x)},{y}\n")


@dataclass
class CohortStats:
    """Everything the summary table needs for one (method, filter, cohort)."""

    method: str
    filter_name: str
    cohort: Cohort
    n: int
    quantiles: dict[str, BootstrapInterval]
    alpha: BootstrapInterval | None
    fit: PowerLawFit | None
    alpha_error: str | None
    seed: int
    reps: int
    level: float


def compute_cohort_stats(
    method: str,
    filter_name: str,
    cohort: Cohort,
    master_seed: int,
    reps: int,
    level: float,
    tail_quantile: float = 0.8,
) -> CohortStats:
    """Bootstrap the three quantiles and the tail exponent for one cohort.

    The stage seed is derived from (master, method, filter, cohort), so
    any table cell can be recomputed in isolation from the periods CSV.
    """
    seed = derive_seed(master_seed, "bootstrap", method, filter_name, cohort.label)
    durations = cohort.durations
    qstats = [QuantileStatistic(q) for q in QUANTILE_LEVELS]
    quantile_ivs = bootstrap_many(durations, qstats, reps=reps, level=level, seed=seed)
    alpha_iv = fit = None
    alpha_error = None
    try:
        fit = fit_power_law(durations, tail_quantile)
        alpha_iv = bootstrap_many(
            durations, [PowerLawAlphaStatistic(tail_quantile)], reps=reps, level=level, seed=seed
        )["alpha"]
    except StatsError as exc:
        alpha_error = f"{type(exc).__name__}: {exc}"
    return CohortStats(
        method=method,
        filter_name=filter_name,
        cohort=cohort,
        n=int(durations.size),
        quantiles=quantile_ivs,
        alpha=alpha_iv,
        fit=fit,
        alpha_error=alpha_error,
        seed=seed,
        reps=reps,
        level=level,
    )


SUMMARY_COLUMNS = [
    "method",
    "filtering",
    "period",
    "p50 (lo..hi)",
    "p90 (lo..hi)",
    "p99 (lo..hi)",
    "alpha (lo..hi)",
]


def summary_row(cs: CohortStats) -> list[str]:
    cells = [cs.method, cs.filter_name, cs.cohort.label]
    for q in QUANTILE_LEVELS:
        cells.append(format_interval(cs.quantiles[f"p{q * 100:g}"]))
    cells.append(format_interval(cs.alpha, format_alpha) if cs.alpha else NA)
    return cells


def write_summary_csv(rows: Sequence[list[str]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerows(rows)


def write_summary_text(rows: Sequence[list[str]], path: str | Path) -> None:
    """Aligned plain-text rendering of the summary table."""
    table = [SUMMARY_COLUMNS] + [list(r) for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(SUMMARY_COLUMNS))]
    with open(path, "w", encoding="utf-8") as fh:
        for idx, row in enumerate(table):
            fh.write("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
            fh.write("\n")
            if idx == 0:
                fh.write("  ".join("-" * w for w in widths).rstrip() + "\n")


def fit_record(cs: CohortStats) -> dict:
    if cs.fit is None or cs.alpha is None:
        return {"error": cs.alpha_error or "unavailable"}
    return {
        "alpha": cs.fit.alpha,
        "d_min": cs.fit.d_min,
        "n_tail": cs.fit.n_tail,
        "lo": cs.alpha.lo,
        "hi": cs.alpha.hi,
        "reps": cs.reps,
        "seed": cs.seed,
    }


def write_fits_json(stats_by_label: dict[str, CohortStats], path: str | Path) -> None:
    payload = {label: fit_record(cs) for label, cs in stats_by_label.items()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(config: dict, input_paths: Iterable[str | Path], path: str | Path) -> None:
    """Record configuration, seed, and input digests; no timestamps, so
    identical runs produce identical manifests."""
    manifest = {
        "config": config,
        "inputs": {str(p): sha256_file(p) for p in sorted(map(str, input_paths))},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
