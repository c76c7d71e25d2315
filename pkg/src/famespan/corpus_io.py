"""Read, validate, and window timestamped documents.

Two line-oriented input schemas are supported, both UTF-8:

* ``raw``: one JSON object per line with fields ``id``, ``date``
  (ISO-8601), ``text``.
* ``pretagged``: JSON lines with ``id``, ``date``, ``mentions`` (array of
  ``[name, count]`` pairs), or a TSV variant ``date<TAB>name<TAB>count``
  (one mention record per line; ids are synthesized from line numbers).

Malformed lines are counted and skipped; if more than 10% of non-blank
lines are malformed the reader raises SchemaError at end of stream,
since that level of breakage signals the wrong schema choice rather
than dirty data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, Iterator

from .dates import Timestamp, iso, parse_timestamp
from .errors import SchemaError

MALFORMED_FRACTION_LIMIT = 0.10

SCHEMAS = ("raw", "pretagged")


@dataclass(frozen=True)
class Document:
    """One dated corpus item, carrying either raw text or extracted mentions."""

    id: str
    timestamp: Timestamp
    text: str | None = None
    mentions: tuple[tuple[str, int], ...] | None = None

    def __post_init__(self):
        if (self.text is None) == (self.mentions is None):
            raise ValueError(f"document {self.id!r}: exactly one of text/mentions required")


@dataclass(frozen=True)
class AnalysisWindow:
    """Half-open [start, end) date range; both ends on month boundaries."""

    start: date
    end: date

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"window start {self.start} not before end {self.end}")
        if self.start.day != 1 or self.end.day != 1:
            raise ValueError("window boundaries must be the first of a month")

    def contains(self, ts: Timestamp) -> bool:
        d = ts.date() if isinstance(ts, datetime) else ts
        return self.start <= d < self.end


@dataclass
class ReadStats:
    """Per-file accounting filled in as the reader is consumed."""

    lines: int = 0
    blank: int = 0
    documents: int = 0
    malformed: int = 0
    errors: list[str] = field(default_factory=list)


class DocumentReader:
    """Iterable over one input file; exposes .stats once exhausted."""

    def __init__(self, path: str | Path, schema: str):
        if schema not in SCHEMAS:
            raise ValueError(f"unknown schema {schema!r}; expected one of {SCHEMAS}")
        self.path = Path(path)
        self.schema = schema
        self.stats = ReadStats()

    def __iter__(self) -> Iterator[Document]:
        stats = self.stats
        tsv_mode = None
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stats.lines += 1
                stripped = line.strip()
                if not stripped:
                    stats.blank += 1
                    continue
                if tsv_mode is None:
                    tsv_mode = self.schema == "pretagged" and not stripped.startswith("{")
                try:
                    if tsv_mode:
                        doc = _parse_tsv_line(stripped, lineno)
                    else:
                        doc = _parse_json_line(stripped, self.schema)
                except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
                    stats.malformed += 1
                    if len(stats.errors) < 10:
                        stats.errors.append(f"{self.path.name}:{lineno}: {exc}")
                    continue
                stats.documents += 1
                yield doc
        processed = stats.documents + stats.malformed
        if processed and stats.malformed / processed > MALFORMED_FRACTION_LIMIT:
            raise SchemaError(
                f"{self.path}: {stats.malformed} of {processed} lines malformed "
                f"(>{MALFORMED_FRACTION_LIMIT:.0%}); wrong --schema? "
                f"first errors: {'; '.join(stats.errors[:3])}"
            )


def _parse_json_line(line: str, schema: str) -> Document:
    rec = json.loads(line)
    if not isinstance(rec, dict):
        raise ValueError("record is not a JSON object")
    doc_id = rec["id"]
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("id must be a non-empty string")
    ts = parse_timestamp(str(rec["date"]))
    if schema == "raw":
        text = rec["text"]
        if not isinstance(text, str):
            raise ValueError("text must be a string")
        return Document(id=doc_id, timestamp=ts, text=text)
    mentions = _validate_mentions(rec["mentions"])
    return Document(id=doc_id, timestamp=ts, mentions=mentions)


def _validate_mentions(raw) -> tuple[tuple[str, int], ...]:
    if not isinstance(raw, (list, tuple)):
        raise ValueError("mentions must be an array")
    out = []
    for item in raw:
        name, count = item
        if not isinstance(name, str) or not name:
            raise ValueError("mention name must be a non-empty string")
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise ValueError(f"mention count must be a positive integer, got {count!r}")
        out.append((name, count))
    return tuple(out)


def _parse_tsv_line(line: str, lineno: int) -> Document:
    parts = line.split("\t")
    if len(parts) != 3:
        raise ValueError(f"expected 3 tab-separated fields, got {len(parts)}")
    ts = parse_timestamp(parts[0])
    name = parts[1].strip()
    if not name:
        raise ValueError("empty name")
    count = int(parts[2])
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return Document(id=f"tsv:{lineno}", timestamp=ts, mentions=((name, count),))


def read_documents(path: str | Path, schema: str) -> DocumentReader:
    """Stream Documents from a line-oriented file in the declared schema."""
    return DocumentReader(path, schema)


def write_documents(docs: Iterable[Document], path: str | Path) -> int:
    """Write documents as JSON lines; returns the number written."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(document_to_json(doc))
            fh.write("\n")
            n += 1
    return n


def document_to_json(doc: Document) -> str:
    rec: dict = {"id": doc.id, "date": iso(doc.timestamp)}
    if doc.text is not None:
        rec["text"] = doc.text
    else:
        rec["mentions"] = [[name, count] for name, count in doc.mentions]
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def window_filter(docs: Iterable[Document], window: AnalysisWindow) -> Iterator[Document]:
    """Yield exactly the documents whose timestamp falls in the window."""
    for doc in docs:
        if window.contains(doc.timestamp):
            yield doc
