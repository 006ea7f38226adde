"""Rank partitioning: reduce the prioritized objective vector to a single
rank by binning the two real-valued objectives and sorting the population
lexicographically, binned columns before the raw tie-breakers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class BinSizes:
    """Bin widths for the kinematic-fitness and total-length columns."""

    bin_f12: float = 1.0
    bin_f32: float = 5.0


@dataclass
class FitnessRecord:
    """One population member's sort columns, in comparison order.

    ``f12_raw`` holds the penalized kinematic fitness; the binned column is
    derived from it so constraint pressure survives the reduction.
    """

    f12_binned: float
    f31a: int
    f33: float
    f31b: int
    f32_binned: float
    f12_raw: float
    f32_raw: float
    rank: int = 0
    pop_ref: int = 0

    def key(self) -> tuple[float, int, float, int, float, float, float]:
        return (
            self.f12_binned,
            self.f31a,
            self.f33,
            self.f31b,
            self.f32_binned,
            self.f12_raw,
            self.f32_raw,
        )


def bin_value(x: float, bin_size: float) -> float:
    """Left edge of the bin containing x (bin widths > 0, x >= 0 only)."""
    if bin_size <= 0.0:
        raise ValueError("bin size must be positive")
    if x < 0.0:
        raise ValueError("cannot bin a negative value")
    return x - math.fmod(x, bin_size)


def rank_partition(
    records: Sequence[FitnessRecord], bins: BinSizes = BinSizes()
) -> list[FitnessRecord]:
    """Assign ranks 1..N by a stable ascending sort on the seven columns.

    The binned columns are (re)computed here from the raw values, so callers
    only need to fill the raw fields. Ties across all seven columns keep
    their input order and still receive distinct consecutive ranks.
    """
    for record in records:
        record.f12_binned = bin_value(record.f12_raw, bins.bin_f12)
        record.f32_binned = bin_value(record.f32_raw, bins.bin_f32)
    ordered = sorted(records, key=FitnessRecord.key)
    for position, record in enumerate(ordered, start=1):
        record.rank = position
    return ordered
