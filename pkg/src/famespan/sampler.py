"""Volume-normalizing subsampler.

Corpus volume varies by orders of magnitude over a century, which by
itself changes measured fame durations.  To decouple measurements from
volume, each document in month t is kept independently with probability
min(1, n_min/n_t).  The keep decision is a pure function of
(seed, document id), so the kept set does not depend on stream order or
partitioning, and the expected number of surviving documents in every
sufficiently full month is n_min.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from hashlib import blake2b
from pathlib import Path
from typing import Iterable, Iterator

from .corpus_io import Document
from .dates import month_of
from .errors import ConfigError, DataError, UnderfullMonth

UNDERFULL_POLICIES = ("drop-month", "keep-all", "fail")


@dataclass(frozen=True)
class MonthVolume:
    month: tuple[int, int]
    n_t: int

    def __post_init__(self):
        if self.n_t < 0:
            raise ValueError("document count cannot be negative")


@dataclass(frozen=True)
class SamplerConfig:
    n_min: int
    seed: int
    underfull_policy: str = "drop-month"

    def __post_init__(self):
        if self.n_min < 1:
            raise ConfigError("n_min must be >= 1")
        if self.underfull_policy not in UNDERFULL_POLICIES:
            raise ConfigError(
                f"unknown underfull policy {self.underfull_policy!r}; "
                f"expected one of {UNDERFULL_POLICIES}"
            )


def month_volumes(docs: Iterable[Document]) -> list[MonthVolume]:
    """Exact per-month document counts, sorted by month."""
    counts: dict[tuple[int, int], int] = {}
    for doc in docs:
        key = month_of(doc.timestamp)
        counts[key] = counts.get(key, 0) + 1
    return [MonthVolume(month, counts[month]) for month in sorted(counts)]


def keep_score(seed: int, doc_id: str) -> float:
    """Deterministic uniform score in [0, 1) for one (seed, id) pair."""
    key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    digest = blake2b(doc_id.encode("utf-8"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "little") / 2**64


def sample_uniform(
    docs: Iterable[Document],
    volumes: list[MonthVolume],
    cfg: SamplerConfig,
    kept_counts: dict[tuple[int, int], int] | None = None,
) -> Iterator[Document]:
    """Keep each document in month t with probability min(1, n_min/n_t).

    ``volumes`` must cover every month present in ``docs``.  Months whose
    volume is below n_min follow cfg.underfull_policy.  Pass a dict as
    ``kept_counts`` to collect per-month kept totals for the sampling
    report.
    """
    probs: dict[tuple[int, int], float] = {}
    for vol in volumes:
        if vol.n_t >= cfg.n_min:
            probs[vol.month] = min(1.0, cfg.n_min / vol.n_t)
        elif cfg.underfull_policy == "drop-month":
            probs[vol.month] = 0.0
        elif cfg.underfull_policy == "keep-all":
            probs[vol.month] = 1.0
        else:
            raise UnderfullMonth(
                f"month {vol.month[0]:04d}-{vol.month[1]:02d} has {vol.n_t} documents "
                f"< n_min={cfg.n_min}"
            )
    for doc in docs:
        month = month_of(doc.timestamp)
        try:
            p = probs[month]
        except KeyError:
            raise DataError(
                f"document {doc.id!r} in month {month[0]:04d}-{month[1]:02d} "
                "not covered by the volume pass"
            ) from None
        if p >= 1.0 or (p > 0.0 and keep_score(cfg.seed, doc.id) < p):
            if kept_counts is not None:
                kept_counts[month] = kept_counts.get(month, 0) + 1
            yield doc


def write_sampling_report(
    volumes: list[MonthVolume],
    kept_counts: dict[tuple[int, int], int],
    path: str | Path,
) -> None:
    """CSV audit trail: month, n_t, kept."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["month", "n_t", "kept"])
        for vol in volumes:
            writer.writerow(
                [f"{vol.month[0]:04d}-{vol.month[1]:02d}", vol.n_t, kept_counts.get(vol.month, 0)]
            )
