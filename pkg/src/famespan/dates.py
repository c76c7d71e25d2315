"""Timestamp plumbing shared by the whole pipeline.

Timestamps arrive as ISO-8601 strings at either day or sub-day precision
and are kept at the finest precision given: day-precision values stay
``datetime.date``, finer ones become naive-UTC ``datetime.datetime``.
Internally the number-crunching modules work on integer microseconds
since the Unix epoch (``numpy.datetime64[us]``), which makes gap and
binning arithmetic exact instead of float-fuzzy.
"""

from __future__ import annotations

import re
from datetime import date, datetime, timedelta, timezone

import numpy as np

US_PER_DAY = 86_400_000_000
_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()

_DATE_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")

Timestamp = date | datetime


def parse_timestamp(raw: str) -> Timestamp:
    """Parse an ISO-8601 date or date-time; reject invalid calendar dates.

    Date-times with a UTC offset are converted to UTC and returned naive.
    """
    s = raw.strip()
    m = _DATE_RE.match(s)
    if m:
        return date(int(m.group(1)), int(m.group(2)), int(m.group(3)))
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc).replace(tzinfo=None)
    return dt


def epoch_us(ts: Timestamp) -> int:
    """Microseconds since 1970-01-01 (negative before the epoch)."""
    days = ts.toordinal() - _EPOCH_ORDINAL
    us = days * US_PER_DAY
    if isinstance(ts, datetime):
        us += ((ts.hour * 60 + ts.minute) * 60 + ts.second) * 1_000_000 + ts.microsecond
    return us


def from_epoch_us(us: int) -> Timestamp:
    """Inverse of epoch_us; midnight values come back as plain dates."""
    days, rem = divmod(int(us), US_PER_DAY)
    d = date.fromordinal(days + _EPOCH_ORDINAL)
    if rem == 0:
        return d
    return datetime(d.year, d.month, d.day) + timedelta(microseconds=rem)


def ts64(ts: Timestamp) -> np.datetime64:
    return np.datetime64(epoch_us(ts), "us")


def ts64_to_timestamp(value: np.datetime64) -> Timestamp:
    return from_epoch_us(int(value.astype("datetime64[us]").astype(np.int64)))


def iso(ts: Timestamp) -> str:
    """Canonical ISO text: plain date for day precision, 'T'-separated otherwise."""
    return ts.isoformat()


def month_of(ts: Timestamp) -> tuple[int, int]:
    return (ts.year, ts.month)


def month_start(year: int, month: int) -> date:
    return date(year, month, 1)


def next_month(year: int, month: int) -> tuple[int, int]:
    return (year + 1, 1) if month == 12 else (year, month + 1)


def add_months(year: int, month: int, n: int) -> tuple[int, int]:
    idx = year * 12 + (month - 1) + n
    return idx // 12, idx % 12 + 1


def month_index(year: int, month: int) -> int:
    """Calendar months since 1970-01 (the cohort bucket anchor)."""
    return (year - 1970) * 12 + (month - 1)


def month_from_index(idx: int) -> tuple[int, int]:
    return 1970 + idx // 12, idx % 12 + 1


def parse_month(raw: str) -> tuple[int, int]:
    """Parse 'YYYY-MM' (or a full date on a month boundary)."""
    s = raw.strip()
    m = re.match(r"^(\d{4})-(\d{2})$", s)
    if m:
        year, month = int(m.group(1)), int(m.group(2))
        month_start(year, month)  # validates the month
        return year, month
    d = parse_timestamp(s)
    if isinstance(d, datetime) or d.day != 1:
        raise ValueError(f"not a month boundary: {raw!r}")
    return d.year, d.month


def monday_on_or_before(d: date) -> date:
    return d - timedelta(days=d.weekday())
