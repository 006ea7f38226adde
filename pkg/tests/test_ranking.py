import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from vineopt.ranking import BinSizes, FitnessRecord, bin_value, rank_partition


def record(f12, f31a, f33, f31b, f32):
    return FitnessRecord(
        f12_binned=0.0, f31a=f31a, f33=f33, f31b=f31b,
        f32_binned=0.0, f12_raw=f12, f32_raw=f32,
    )


class TestBinValue:
    def test_left_edge(self):
        assert bin_value(0.0, 1.0) == 0.0
        assert bin_value(0.99, 1.0) == 0.0
        assert bin_value(1.0, 1.0) == 1.0
        assert bin_value(7.3, 5.0) == 5.0

    def test_fractional_bin(self):
        assert bin_value(0.77, 0.25) == pytest.approx(0.75)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            bin_value(1.0, 0.0)
        with pytest.raises(ValueError):
            bin_value(1.0, -2.0)
        with pytest.raises(ValueError):
            bin_value(-0.1, 1.0)

    @given(st.floats(0.0, 1e6), st.floats(1e-3, 1e3))
    def test_bin_properties(self, x, b):
        edge = bin_value(x, b)
        assert 0.0 <= edge <= x
        assert x - edge < b or math.isclose(x - edge, b)


class TestRankPartition:
    def test_orders_by_binned_f12_first(self):
        worse = record(2.7, 0, 0.0, 0, 10.0)
        better = record(1.1, 5, 99.0, 9, 99.0)
        ordered = rank_partition([worse, better])
        assert ordered[0] is better
        assert better.rank == 1 and worse.rank == 2

    def test_same_bin_defers_to_integer_objective(self):
        a = record(1.9, 2, 0.0, 0, 10.0)
        b = record(1.1, 3, 0.0, 0, 10.0)
        ordered = rank_partition([b, a])
        assert ordered[0] is a  # same f12 bin [1, 2); fewer links wins

    def test_priority_chain_f33_then_f31b_then_f32(self):
        base = dict(f12=1.0, f31a=2, f32=10.0)
        lo_f33 = record(base["f12"], base["f31a"], 10.0, 9, base["f32"])
        hi_f33 = record(base["f12"], base["f31a"], 20.0, 0, base["f32"])
        assert rank_partition([hi_f33, lo_f33])[0] is lo_f33

        lo_f31b = record(1.0, 2, 10.0, 3, 99.0)
        hi_f31b = record(1.0, 2, 10.0, 4, 1.0)
        assert rank_partition([hi_f31b, lo_f31b])[0] is lo_f31b

        short = record(1.0, 2, 10.0, 3, 6.0)
        long = record(1.0, 2, 10.0, 3, 11.0)
        assert rank_partition([long, short])[0] is short

    def test_raw_values_break_bin_ties(self):
        a = record(1.2, 0, 0.0, 0, 10.0)
        b = record(1.7, 0, 0.0, 0, 10.0)
        ordered = rank_partition([b, a])
        assert ordered[0] is a

        c = record(1.0, 0, 0.0, 0, 12.0)
        d = record(1.0, 0, 0.0, 0, 11.0)
        assert rank_partition([c, d])[0] is d

    def test_full_tie_keeps_input_order_with_distinct_ranks(self):
        twins = [record(1.0, 1, 5.0, 2, 7.0) for _ in range(3)]
        ordered = rank_partition(twins)
        assert [t.rank for t in twins] == [1, 2, 3]
        assert ordered == twins

    def test_recomputes_binned_columns_from_raw(self):
        rec = record(7.3, 0, 0.0, 0, 13.0)
        rec.f12_binned = 999.0
        rec.f32_binned = 999.0
        rank_partition([rec], BinSizes(bin_f12=2.0, bin_f32=5.0))
        assert rec.f12_binned == 6.0
        assert rec.f32_binned == 10.0

    def test_ranks_are_a_permutation(self):
        rng = random.Random(4)
        records = [
            record(rng.uniform(0, 10), rng.randint(0, 5), rng.uniform(0, 100),
                   rng.randint(0, 5), rng.uniform(5, 50))
            for _ in range(40)
        ]
        ordered = rank_partition(records)
        assert sorted(r.rank for r in records) == list(range(1, 41))
        keys = [r.key() for r in ordered]
        assert keys == sorted(keys)

    @settings(max_examples=100)
    @given(
        st.lists(
            st.tuples(
                # coarse grid so no two distinct values share a 1e-12 bin
                st.integers(0, 50).map(lambda k: k * 0.37),
                st.integers(0, 6),
                st.floats(0, 100),
                st.integers(0, 6),
                st.integers(0, 50).map(lambda k: k * 0.61),
            ),
            min_size=1,
            max_size=30,
        )
    )
    def test_tiny_bins_reduce_to_raw_lexicographic(self, rows):
        records = [record(*row) for row in rows]
        tiny = BinSizes(bin_f12=1e-12, bin_f32=1e-12)
        ordered = rank_partition(records, tiny)
        raw_keys = [
            (r.f12_raw, r.f31a, r.f33, r.f31b, r.f32_raw) for r in ordered
        ]
        assert raw_keys == sorted(raw_keys)

    def test_binning_changes_outcomes_vs_raw_sort(self):
        # With the default bin of 1.0, a slightly worse f12 but far fewer
        # links must outrank; with a tiny bin the raw f12 must win.
        compact = record(1.8, 1, 0.0, 1, 10.0)
        sprawling = record(1.2, 5, 0.0, 5, 30.0)
        assert rank_partition([sprawling, compact])[0] is compact
        compact2 = record(1.8, 1, 0.0, 1, 10.0)
        sprawling2 = record(1.2, 5, 0.0, 5, 30.0)
        tiny = BinSizes(bin_f12=1e-9, bin_f32=1e-9)
        assert rank_partition([sprawling2, compact2], tiny)[0] is sprawling2
