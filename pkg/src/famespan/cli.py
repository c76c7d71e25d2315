"""Pipeline orchestration and the command-line interface.

Subcommands mirror the pipeline stages so every stage can be re-run and
inspected through its intermediate files:

  synth    generate a pre-tagged corpus from a generator spec (JSON)
  extract  run the heuristic recognizer: raw JSONL -> pre-tagged JSONL
  sample   volume-normalize a corpus to n_min documents per month
  periods  compute fame periods per (method, name filter) -> CSVs
  stats    quantile series, cumulative curves, tail fits for one periods CSV
  report   summary table (+ manifest) from periods CSVs
  run      all of the above end to end, in memory

All randomness flows from one --seed; stage seeds are derived, so equal
(config, seed, inputs) produce byte-identical artifacts.

Exit codes: 0 ok, 2 config error, 3 data error, 4 statistics error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field, replace
from datetime import date
from fractions import Fraction
from functools import partial
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable, Sequence

from . import report as rep
from .corpus_io import (
    AnalysisWindow,
    Document,
    read_documents,
    window_filter,
    write_documents,
)
from .dates import parse_month
from .errors import ConfigError, DataError, EmptyCohort, FamespanError
from .fixtures import FIXTURE_KINDS, fixture_timeline
from .name_extract import (
    DEFAULT_HONORIFICS,
    DEFAULT_STOP_CAPITALIZED,
    RecognizerConfig,
    load_wordlist,
    mentions_of,
)
from .peaks import (
    METHOD_SPIKE,
    METHODS,
    FamePeriod,
    WeekGrid,
    continuity_period,
    period_filter,
    spike_period,
)
from .sampler import SamplerConfig, month_volumes, sample_uniform, write_sampling_report
from .stats import WIDTH_3_MONTHS, WIDTH_5_YEARS, assign_cohorts, cumulative_curve
from .synth import generate_corpus, load_synth_spec
from .timeline import (
    Timeline,
    basic_name_filter,
    build_timelines,
    top_frac_by_year,
    top_k_by_year,
    yearly_counts,
)

FILTERS = ("all", "top-1000", "top-0.1%")
_FILTER_FILE_TOKEN = {"all": "all", "top-1000": "top-1000", "top-0.1%": "top-0.1pct"}
_FILTER_FROM_TOKEN = {v: k for k, v in _FILTER_FILE_TOKEN.items()}


@dataclass
class RunConfig:
    """End-to-end pipeline configuration; defaults follow the standard
    weekly grid, 5-year cohorts, 25000-rep 99% bootstrap, 80th-percentile
    tail setup."""

    window: AnalysisWindow
    n_min: int
    seed: int
    methods: tuple[str, ...] = METHODS
    filters: tuple[str, ...] = FILTERS
    schema: str = "pretagged"
    cohort_widths: tuple[int, ...] = (WIDTH_3_MONTHS, WIDTH_5_YEARS)
    reps: int = 25000
    level: float = 0.99
    tail_quantile: float = 0.8
    min_mentions: int = 10
    min_duration: float = 2.0
    top_k: int = 1000
    top_fraction: Fraction = Fraction(1, 1000)
    underfull_policy: str = "drop-month"
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    gazetteer: Path | None = None
    honorifics: Path | None = None
    stoplist: Path | None = None

    def __post_init__(self):
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise ConfigError(f"methods must be a non-empty subset of {METHODS}")
        if not self.filters or any(f not in FILTERS for f in self.filters):
            raise ConfigError(f"filters must be a non-empty subset of {FILTERS}")
        if self.schema == "raw" and self.gazetteer is None:
            raise ConfigError("raw schema needs --gazetteer for the recognizer")
        widths = tuple(sorted(set(self.cohort_widths)))
        if not widths or widths[0] < 1:
            raise ConfigError("cohort widths must be positive month counts")
        self.cohort_widths = widths

    def recognizer(self) -> RecognizerConfig | None:
        if self.gazetteer is None:
            return None
        return RecognizerConfig(
            given_name_gazetteer=load_wordlist(self.gazetteer),
            honorifics=load_wordlist(self.honorifics) if self.honorifics else DEFAULT_HONORIFICS,
            stop_capitalized=load_wordlist(self.stoplist) if self.stoplist else DEFAULT_STOP_CAPITALIZED,
        )

    def as_manifest_dict(self) -> dict:
        return {
            "window": [self.window.start.isoformat(), self.window.end.isoformat()],
            "n_min": self.n_min,
            "seed": self.seed,
            "methods": list(self.methods),
            "filters": list(self.filters),
            "schema": self.schema,
            "reps": self.reps,
            "level": self.level,
            "tail_quantile": self.tail_quantile,
            "min_mentions": self.min_mentions,
            "min_duration": self.min_duration,
            "top_k": self.top_k,
            "top_fraction": str(self.top_fraction),
            "underfull_policy": self.underfull_policy,
            "cohort_widths": list(self.cohort_widths),
        }


def _read_windowed(inputs: Sequence[Path], schema: str, window: AnalysisWindow):
    for path in inputs:
        yield from window_filter(read_documents(path, schema), window)


def _detect(timeline: Timeline, method: str, grid: WeekGrid) -> FamePeriod:
    if method == METHOD_SPIKE:
        return spike_period(timeline, grid)
    return continuity_period(timeline)


def detect_periods(
    timelines: dict[str, Timeline], method: str, grid: WeekGrid, workers: int = 1
) -> list[FamePeriod]:
    """Detector map over name-sorted timelines; result is independent of
    the worker count because each detection is a pure function."""
    ordered = [timelines[name] for name in sorted(timelines)]
    if workers > 1 and len(ordered) > 1:
        with Pool(processes=workers) as pool:
            chunk = max(1, len(ordered) // (workers * 4))
            return pool.map(partial(_detect, method=method, grid=grid), ordered, chunksize=chunk)
    return [_detect(t, method, grid) for t in ordered]


def build_pipeline_timelines(
    cfg: RunConfig, inputs: Sequence[Path], report_path: Path | None = None
) -> dict[str, Timeline]:
    """Two passes over the inputs: month volumes, then sample + aggregate."""
    volumes = month_volumes(_read_windowed(inputs, cfg.schema, cfg.window))
    sampler_cfg = SamplerConfig(cfg.n_min, cfg.seed, cfg.underfull_policy)
    kept_counts: dict[tuple[int, int], int] = {}
    recognizer = cfg.recognizer()
    sampled = sample_uniform(
        _read_windowed(inputs, cfg.schema, cfg.window), volumes, sampler_cfg, kept_counts
    )
    timelines = build_timelines(
        m for doc in sampled for m in mentions_of(doc, recognizer)
    )
    if report_path is not None:
        write_sampling_report(volumes, kept_counts, report_path)
    return timelines


def select_name_sets(cfg: RunConfig, timelines: dict[str, Timeline]) -> dict[str, set[str]]:
    """The three name filters, each intersected with the basic filter."""
    basic = set(basic_name_filter(timelines, cfg.min_mentions))
    sets: dict[str, set[str]] = {}
    counts = None
    for f in cfg.filters:
        if f == "all":
            sets[f] = basic
            continue
        counts = counts if counts is not None else yearly_counts(timelines)
        if f == "top-1000":
            sets[f] = top_k_by_year(counts, cfg.top_k) & basic
        else:
            sets[f] = top_frac_by_year(counts, cfg.top_fraction) & basic
    return sets


class _ArtifactDir:
    """Tracks files written into out_dir so failures leave nothing partial."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.created: list[Path] = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.created.append(p)
        return p

    def cleanup(self):
        for p in self.created:
            try:
                p.unlink()
            except FileNotFoundError:
                pass


def _width_token(width: int) -> str:
    if width == WIDTH_3_MONTHS:
        return "3mo"
    if width == WIDTH_5_YEARS:
        return "5y"
    return f"{width}mo"


def _stats_artifacts(
    art: _ArtifactDir,
    periods: list[FamePeriod],
    method: str,
    filter_name: str,
    seed: int,
    reps: int,
    level: float,
    tail_quantile: float,
    widths: tuple[int, ...] = (WIDTH_3_MONTHS, WIDTH_5_YEARS),
) -> list[rep.CohortStats]:
    """Quantile series per width; curves, fits, and bootstrap intervals on
    the widest cohorts (those feed the summary table)."""
    token = _FILTER_FILE_TOKEN[filter_name]
    for width in widths[:-1]:
        cohorts = assign_cohorts(periods, width)
        rep.write_quantile_series_csv(
            cohorts, art.path(f"series_{method}_{token}_{_width_token(width)}.csv")
        )
    main_width = widths[-1]
    main_cohorts = assign_cohorts(periods, main_width)
    all_stats = [
        rep.compute_cohort_stats(method, filter_name, cohort, seed, reps, level, tail_quantile)
        for cohort in main_cohorts
    ]
    intervals = {cs.cohort.label: cs.quantiles for cs in all_stats}
    rep.write_quantile_series_csv(
        main_cohorts,
        art.path(f"series_{method}_{token}_{_width_token(main_width)}.csv"),
        intervals=intervals,
    )
    for cs in all_stats:
        rep.write_cumulative_curve_csv(
            cs.cohort,
            cumulative_curve(cs.cohort),
            art.path(f"curve_{method}_{token}_{cs.cohort.label}.csv"),
            cs.fit,
        )
    rep.write_fits_json(
        {cs.cohort.label: cs for cs in all_stats}, art.path(f"fits_{method}_{token}.json")
    )
    return all_stats


def run_pipeline(cfg: RunConfig, inputs: Sequence[Path], out_dir: Path) -> list[Path]:
    """End-to-end run; returns the artifact paths (removed again on error)."""
    art = _ArtifactDir(Path(out_dir))
    try:
        timelines = build_pipeline_timelines(cfg, inputs, art.path("sampling_report.csv"))
        if not timelines:
            raise DataError("no mentions found inside the analysis window")
        name_sets = select_name_sets(cfg, timelines)
        grid = WeekGrid.for_window(cfg.window)
        summary_rows = []
        for method in cfg.methods:
            detected = detect_periods(timelines, method, grid, cfg.workers)
            valid = {p.name: p for p in period_filter(detected, cfg.window, cfg.min_duration)}
            for filter_name in cfg.filters:
                names = sorted(name_sets[filter_name] & valid.keys())
                periods = [valid[n] for n in names]
                if not periods:
                    raise EmptyCohort(
                        f"no fame periods survive filtering for ({method}, {filter_name})"
                    )
                token = _FILTER_FILE_TOKEN[filter_name]
                rep.write_periods_csv(periods, art.path(f"periods_{method}_{token}.csv"))
                stats = _stats_artifacts(
                    art, periods, method, filter_name,
                    cfg.seed, cfg.reps, cfg.level, cfg.tail_quantile, cfg.cohort_widths,
                )
                summary_rows.extend(rep.summary_row(cs) for cs in stats)
        rep.write_summary_csv(summary_rows, art.path("summary.csv"))
        rep.write_summary_text(summary_rows, art.path("summary.txt"))
        rep.write_manifest(cfg.as_manifest_dict(), inputs, art.path("manifest.json"))
        return art.created
    except BaseException:
        art.cleanup()
        raise


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_window(values: list[str]) -> AnalysisWindow:
    try:
        (sy, sm), (ey, em) = parse_month(values[0]), parse_month(values[1])
        return AnalysisWindow(date(sy, sm, 1), date(ey, em, 1))
    except ValueError as exc:
        raise ConfigError(f"bad --window: {exc}") from exc


def _parse_widths(raw: str) -> tuple[int, ...]:
    try:
        widths = tuple(sorted({int(w) for w in raw.split(",") if w.strip()}))
    except ValueError as exc:
        raise ConfigError(f"bad --widths {raw!r}: {exc}") from exc
    if not widths or widths[0] < 1:
        raise ConfigError(f"bad --widths {raw!r}: positive month counts required")
    return widths


def _parse_fraction(raw: str) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad fraction {raw!r}: {exc}") from exc


def _csv_list(raw: str, allowed: tuple[str, ...], what: str) -> tuple[str, ...]:
    items = tuple(s.strip() for s in raw.split(",") if s.strip())
    bad = [s for s in items if s not in allowed]
    if bad or not items:
        raise ConfigError(f"bad {what} {raw!r}; choose from {', '.join(allowed)}")
    return items


def _add_window_arg(p):
    p.add_argument(
        "--window",
        nargs=2,
        metavar=("START", "END"),
        required=True,
        help="analysis window as two month boundaries, e.g. --window 1895-01 2011-01 "
        "(START inclusive, END exclusive)",
    )


def _add_recognizer_args(p):
    p.add_argument("--gazetteer", type=Path, help="given-name list, one per line")
    p.add_argument("--honorifics", type=Path, help="honorific list (default built in)")
    p.add_argument("--stoplist", type=Path, help="capitalized stopword list (default built in)")


def _build_run_config(args, schema=None) -> RunConfig:
    return RunConfig(
        window=_parse_window(args.window),
        n_min=args.n_min,
        seed=args.seed,
        methods=_csv_list(args.methods, METHODS, "--methods"),
        filters=_csv_list(args.filters, FILTERS, "--filters"),
        schema=schema or args.schema,
        cohort_widths=_parse_widths(args.widths),
        reps=args.reps,
        level=args.level,
        tail_quantile=args.tail_quantile,
        min_mentions=args.min_mentions,
        min_duration=args.min_duration,
        top_k=args.top_k,
        top_fraction=_parse_fraction(args.top_fraction),
        underfull_policy=args.underfull_policy,
        workers=args.workers,
        gazetteer=args.gazetteer,
        honorifics=args.honorifics,
        stoplist=args.stoplist,
    )


def _cmd_synth(args) -> int:
    spec = load_synth_spec(args.spec)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    n = write_documents(generate_corpus(spec), args.out)
    print(f"wrote {n} documents to {args.out}")
    return 0


def _cmd_extract(args) -> int:
    recognizer = RecognizerConfig(
        given_name_gazetteer=load_wordlist(args.gazetteer),
        honorifics=load_wordlist(args.honorifics) if args.honorifics else DEFAULT_HONORIFICS,
        stop_capitalized=load_wordlist(args.stoplist) if args.stoplist else DEFAULT_STOP_CAPITALIZED,
    )

    def tagged(docs: Iterable[Document]):
        for doc in docs:
            mentions = tuple((m.name, m.count) for m in mentions_of(doc, recognizer))
            yield Document(id=doc.id, timestamp=doc.timestamp, mentions=mentions)

    reader = read_documents(args.input, "raw")
    n = write_documents(tagged(reader), args.out)
    print(f"extracted mentions for {n} documents to {args.out} "
          f"({reader.stats.malformed} malformed lines skipped)")
    return 0


def _cmd_sample(args) -> int:
    window = _parse_window(args.window)
    volumes = month_volumes(_read_windowed(args.input, args.schema, window))
    sampler_cfg = SamplerConfig(args.n_min, args.seed, args.underfull_policy)
    kept_counts: dict[tuple[int, int], int] = {}
    sampled = sample_uniform(
        _read_windowed(args.input, args.schema, window), volumes, sampler_cfg, kept_counts
    )
    n = write_documents(sampled, args.out)
    if args.report:
        write_sampling_report(volumes, kept_counts, args.report)
    print(f"kept {n} documents -> {args.out}")
    return 0


def _cmd_periods(args) -> int:
    cfg = _build_run_config(args)
    art = _ArtifactDir(Path(args.out_dir))
    try:
        timelines = build_pipeline_timelines(cfg, args.input, art.path("sampling_report.csv"))
        if not timelines:
            raise DataError("no mentions found inside the analysis window")
        name_sets = select_name_sets(cfg, timelines)
        grid = WeekGrid.for_window(cfg.window)
        if args.timelines:
            from .timeline import write_timelines_tsv

            write_timelines_tsv(timelines, art.path(args.timelines))
        for method in cfg.methods:
            detected = detect_periods(timelines, method, grid, cfg.workers)
            valid = {p.name: p for p in period_filter(detected, cfg.window, cfg.min_duration)}
            for filter_name in cfg.filters:
                names = sorted(name_sets[filter_name] & valid.keys())
                if not names:
                    raise EmptyCohort(
                        f"no fame periods survive filtering for ({method}, {filter_name})"
                    )
                token = _FILTER_FILE_TOKEN[filter_name]
                rep.write_periods_csv(
                    [valid[n] for n in names], art.path(f"periods_{method}_{token}.csv")
                )
    except BaseException:
        art.cleanup()
        raise
    print(f"wrote {len(art.created)} period files to {args.out_dir}")
    return 0


def _label_from_periods_file(path: Path) -> tuple[str, str]:
    stem = path.stem
    if stem.startswith("periods_"):
        rest = stem[len("periods_"):]
        for method in METHODS:
            if rest.startswith(method + "_"):
                token = rest[len(method) + 1:]
                if token in _FILTER_FROM_TOKEN:
                    return method, _FILTER_FROM_TOKEN[token]
    raise ConfigError(
        f"{path}: expected file name periods_<method>_<filter>.csv "
        f"(filters: {', '.join(_FILTER_FILE_TOKEN.values())})"
    )


def _load_labelled_periods(path: Path) -> tuple[str, str, list[FamePeriod]]:
    method, filter_name = _label_from_periods_file(path)
    periods = rep.read_periods_csv(path)
    if not periods:
        raise EmptyCohort(f"{path}: no periods")
    mismatched = {p.method for p in periods} - {method}
    if mismatched:
        raise DataError(
            f"{path}: file is named for method {method!r} but contains "
            f"{', '.join(sorted(mismatched))} rows"
        )
    return method, filter_name, periods


def _cmd_stats(args) -> int:
    art = _ArtifactDir(Path(args.out_dir))
    try:
        for path in args.periods:
            method, filter_name, periods = _load_labelled_periods(Path(path))
            _stats_artifacts(
                art, periods, method, filter_name,
                args.seed, args.reps, args.level, args.tail_quantile,
                _parse_widths(args.widths),
            )
    except BaseException:
        art.cleanup()
        raise
    print(f"wrote {len(art.created)} statistics files to {args.out_dir}")
    return 0


def _cmd_report(args) -> int:
    art = _ArtifactDir(Path(args.out_dir))
    try:
        summary_rows = []
        for path in args.periods:
            method, filter_name, periods = _load_labelled_periods(Path(path))
            for cohort in assign_cohorts(periods, args.width):
                cs = rep.compute_cohort_stats(
                    method, filter_name, cohort, args.seed, args.reps, args.level,
                    args.tail_quantile,
                )
                summary_rows.append(rep.summary_row(cs))
        rep.write_summary_csv(summary_rows, art.path("summary.csv"))
        rep.write_summary_text(summary_rows, art.path("summary.txt"))
        config = {
            "seed": args.seed,
            "reps": args.reps,
            "level": args.level,
            "tail_quantile": args.tail_quantile,
            "width": args.width,
        }
        rep.write_manifest(config, args.periods, art.path("manifest.json"))
    except BaseException:
        art.cleanup()
        raise
    print(f"wrote summary for {len(args.periods)} period files to {args.out_dir}")
    return 0


def _cmd_run(args) -> int:
    cfg = _build_run_config(args)
    created = run_pipeline(cfg, args.input, Path(args.out_dir))
    print(f"wrote {len(created)} artifacts to {args.out_dir}")
    return 0


def _cmd_fixture(args) -> int:
    from .timeline import write_timelines_tsv

    t = fixture_timeline(args.kind)
    write_timelines_tsv({t.name: t}, args.out)
    print(f"wrote fixture {args.kind} to {args.out}")
    return 0


FORMATS_EPILOG = """\
file formats (all UTF-8, LF newlines):
  raw corpus        JSONL: {"id": str, "date": ISO-8601, "text": str}
  pretagged corpus  JSONL: {"id": str, "date": ISO-8601, "mentions": [[name, count], ...]}
                    or TSV: date<TAB>name<TAB>count (one mention per line)
  periods CSV       name,method,start,end,peak_date,duration_days
                    (ISO dates; fractional durations carry 3 decimals)
  series CSV        bucket_start,width,n,p50,p90,p99[,p50_lo,p50_hi,...]
  curve CSV         "# cohort=<label> n=<n> reference_slope=<alpha+1>" then x,y rows
  fits JSON         {cohort label: {alpha,d_min,n_tail,lo,hi,reps,seed}}
  summary CSV/text  method,filtering,period,p50 (lo..hi),p90 (lo..hi),p99 (lo..hi),alpha (lo..hi)
  sampling report   month,n_t,kept
  manifest JSON     config + sha256 of every input
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famespan",
        description="Measure per-name fame durations in timestamped corpora.",
        epilog=FORMATS_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a pre-tagged corpus from a generator spec")
    p.add_argument("--spec", type=Path, required=True, help="generator spec (JSON)")
    p.add_argument("--seed", type=int, default=None, help="override the spec's seed")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("extract", help="raw JSONL -> pre-tagged JSONL via the recognizer")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--gazetteer", type=Path, required=True)
    p.add_argument("--honorifics", type=Path)
    p.add_argument("--stoplist", type=Path)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("sample", help="volume-normalize to n_min documents per month")
    p.add_argument("--input", type=Path, nargs="+", required=True)
    p.add_argument("--schema", choices=("raw", "pretagged"), default="pretagged")
    _add_window_arg(p)
    p.add_argument("--n-min", dest="n_min", type=int, required=True,
                   help="monthly document target (no silent default)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--underfull-policy", choices=("drop-month", "keep-all", "fail"),
                   default="drop-month")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--report", type=Path, help="write month,n_t,kept CSV here")
    p.set_defaults(func=_cmd_sample)

    def add_pipeline_args(p, with_stats: bool):
        p.add_argument("--input", type=Path, nargs="+", required=True)
        p.add_argument("--schema", choices=("raw", "pretagged"), default="pretagged")
        _add_window_arg(p)
        p.add_argument("--n-min", dest="n_min", type=int, required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--methods", default=",".join(METHODS))
        p.add_argument("--filters", default=",".join(FILTERS))
        p.add_argument("--min-mentions", type=int, default=10)
        p.add_argument("--min-duration", type=float, default=2.0)
        p.add_argument("--top-k", type=int, default=1000)
        p.add_argument("--top-fraction", default="1/1000")
        p.add_argument("--underfull-policy", choices=("drop-month", "keep-all", "fail"),
                       default="drop-month")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        _add_recognizer_args(p)
        if with_stats:
            p.add_argument("--reps", type=int, default=25000, help="bootstrap resamples")
            p.add_argument("--level", type=float, default=0.99)
            p.add_argument("--tail-quantile", type=float, default=0.8)
            p.add_argument("--widths", default="3,60",
                           help="cohort widths in months; the widest feeds the summary table")
        p.add_argument("--out-dir", type=Path, required=True)

    p = sub.add_parser("periods", help="compute fame periods -> periods_<method>_<filter>.csv")
    add_pipeline_args(p, with_stats=False)
    p.add_argument("--timelines", help="also persist timelines TSV under this name")
    p.set_defaults(func=_cmd_periods, reps=25000, level=0.99, tail_quantile=0.8,
                   widths="3,60")

    p = sub.add_parser("stats", help="statistics artifacts for existing periods CSVs")
    p.add_argument("--periods", type=Path, nargs="+", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=25000)
    p.add_argument("--level", type=float, default=0.99)
    p.add_argument("--tail-quantile", type=float, default=0.8)
    p.add_argument("--widths", default="3,60",
                   help="cohort widths in months; the widest feeds curves and fits")
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("report", help="summary table + manifest from periods CSVs")
    p.add_argument("--periods", type=Path, nargs="+", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--reps", type=int, default=25000)
    p.add_argument("--level", type=float, default=0.99)
    p.add_argument("--tail-quantile", type=float, default=0.8)
    p.add_argument("--width", type=int, default=WIDTH_5_YEARS,
                   help="summary cohort width in months")
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("run", help="end-to-end pipeline")
    add_pipeline_args(p, with_stats=True)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("fixture", help="write a bundled disagreement fixture as timelines TSV")
    p.add_argument("--kind", choices=FIXTURE_KINDS, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_fixture)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FamespanError as exc:
        print(f"famespan: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"famespan: error: {exc}", file=sys.stderr)
        return DataError.exit_code


if __name__ == "__main__":
    sys.exit(main())
