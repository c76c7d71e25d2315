from datetime import date, datetime
from fractions import Fraction

import numpy as np
import pytest

from famespan.name_extract import Mention
from famespan.timeline import (
    Timeline,
    YearlyCount,
    basic_name_filter,
    build_timelines,
    read_timelines_tsv,
    top_frac_by_year,
    top_k_by_year,
    write_timelines_tsv,
    yearly_counts,
)

D1 = date(1950, 3, 4)
D2 = date(1950, 3, 9)


def test_additive_merge():
    tls = build_timelines([Mention("A", D1, 2), Mention("A", D1, 1), Mention("A", D2, 1)])
    t = tls["A"]
    assert t.timestamps() == [D1, D2]
    assert t.counts.tolist() == [3, 1]
    assert t.total == 4


def test_disjoint_names_disjoint_timelines():
    tls = build_timelines([Mention("A", D1, 1), Mention("B", D2, 2)])
    assert set(tls) == {"A", "B"}
    assert tls["A"].total == 1 and tls["B"].total == 2


def test_merge_is_order_independent():
    mentions = [Mention("A", D1, 2), Mention("B", D2, 1), Mention("A", D2, 1)]
    assert build_timelines(mentions) == build_timelines(list(reversed(mentions)))


def test_total_multiplicity_conserved():
    rng = np.random.default_rng(3)
    mentions = [
        Mention(f"n{rng.integers(0, 20)}", date(2000, 1, 1 + int(rng.integers(0, 28))), int(rng.integers(1, 5)))
        for _ in range(500)
    ]
    tls = build_timelines(mentions)
    assert sum(t.total for t in tls.values()) == sum(m.count for m in mentions)


def test_basic_name_filter_boundary():
    tls = build_timelines(
        [Mention("nine", D1, 9), Mention("ten", D1, 10), Mention("one", D2, 1)]
    )
    kept = basic_name_filter(tls, min_total=10)
    assert set(kept) == {"ten"}
    assert set(basic_name_filter(tls, min_total=1)) == {"nine", "ten", "one"}


def test_yearly_counts():
    tls = build_timelines(
        [
            Mention("A", date(1999, 12, 31), 2),
            Mention("A", date(2000, 1, 1), 3),
            Mention("A", date(2000, 6, 1), 1),
        ]
    )
    assert sorted(yearly_counts(tls)) == [
        YearlyCount("A", 1999, 2),
        YearlyCount("A", 2000, 4),
    ]


class TestTopK:
    COUNTS = [
        YearlyCount("A", 2000, 5),
        YearlyCount("B", 2000, 3),
        YearlyCount("C", 2000, 1),
    ]

    def test_direct_ranking(self):
        assert top_k_by_year(self.COUNTS, k=2) == {"A", "B"}

    def test_k_larger_than_names(self):
        assert top_k_by_year(self.COUNTS, k=10) == {"A", "B", "C"}

    def test_union_over_years(self):
        counts = self.COUNTS + [YearlyCount("D", 2001, 9)]
        assert top_k_by_year(counts, k=1) == {"A", "D"}

    def test_tie_breaks_lexicographically(self):
        counts = [YearlyCount("B", 2000, 5), YearlyCount("A", 2000, 5), YearlyCount("C", 2000, 5)]
        assert top_k_by_year(counts, k=2) == {"A", "B"}

    def test_per_year_size(self):
        counts = [YearlyCount(f"n{i}", 2000, i) for i in range(50)]
        assert len(top_k_by_year(counts, k=20)) == 20


class TestTopFrac:
    def test_ceiling_rule(self):
        counts = [YearlyCount(f"n{i:04d}", 2000, 2500 - i) for i in range(2500)]
        got = top_frac_by_year(counts, Fraction(1, 1000))
        assert got == {"n0000", "n0001", "n0002"}  # ceil(2.5) = 3

    def test_exactly_one_per_thousand(self):
        counts = [YearlyCount(f"n{i:04d}", 2000, 1000 - i) for i in range(1000)]
        assert top_frac_by_year(counts, Fraction(1, 1000)) == {"n0000"}

    def test_fraction_one_returns_all(self):
        counts = [YearlyCount(f"n{i}", 2000, i + 1) for i in range(7)]
        assert top_frac_by_year(counts, 1) == {f"n{i}" for i in range(7)}

    def test_float_fraction_handled_decimally(self):
        counts = [YearlyCount(f"n{i:04d}", 2000, 3000 - i) for i in range(3000)]
        assert len(top_frac_by_year(counts, 0.001)) == 3  # ceil(3.0), not ceil(3.0000000004)


def test_monotone_in_added_years():
    counts = [YearlyCount(f"n{i}", 2000, 10 - i) for i in range(5)]
    base_k = top_k_by_year(counts, k=2)
    base_f = top_frac_by_year(counts, 1)
    more = counts + [YearlyCount("z", 2001, 100)]
    assert base_k <= top_k_by_year(more, k=2)
    assert base_f <= top_frac_by_year(more, 1)


def test_tsv_round_trip(tmp_path):
    tls = build_timelines(
        [
            Mention("B name", D2, 1),
            Mention("A name", D1, 2),
            Mention("A name", datetime(1950, 3, 4, 12, 30), 1),
        ]
    )
    path = tmp_path / "timelines.tsv"
    write_timelines_tsv(tls, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == sorted(lines)  # byte-stable (name, timestamp) order
    assert read_timelines_tsv(path) == tls


def test_empty_timeline_rejected():
    with pytest.raises(ValueError):
        Timeline("x", np.array([], dtype=np.int64), np.array([], dtype=np.int64))
