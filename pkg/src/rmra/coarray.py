"""Integer-lattice coarray algebra for sparse sensor arrays.

Sensor positions live on the half-wavelength grid as non-negative
integers.  The difference coarray of an array is the set of pairwise
position differences (spatial lags); the weight function counts how
many sensor pairs realize each lag.  Everything here is pure and
operates on immutable values.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable

from .errors import ApertureTooSmall, InvalidArray, UnknownSensor

__all__ = [
    "SensorArray",
    "WeightFunction",
    "Coarray",
    "make_array",
    "weight_function",
    "coarray",
    "weight_after_removal",
    "primary_weights",
]


@dataclass(frozen=True, slots=True)
class SensorArray:
    """Strictly increasing sensor positions, normalized to start at 0.

    Use :func:`make_array` to build one from raw input; it sorts,
    deduplicates and translates the positions so the first sensor sits
    at the origin.
    """

    positions: tuple[int, ...]

    def __post_init__(self):
        p = self.positions
        if len(p) < 2:
            raise InvalidArray("need at least 2 distinct sensor positions")
        if p[0] != 0:
            raise InvalidArray("positions must be normalized to start at 0")
        if any(b <= a for a, b in zip(p, p[1:])):
            raise InvalidArray("positions must be strictly increasing")

    @property
    def n(self) -> int:
        """Number of sensors."""
        return len(self.positions)

    @property
    def aperture(self) -> int:
        """Distance between the first and last sensor."""
        return self.positions[-1]

    def interior(self) -> tuple[int, ...]:
        """Positions other than the two endpoints."""
        return self.positions[1:-1]

    def mirrored(self) -> "SensorArray":
        """Reflection about the aperture midpoint (s -> L - s)."""
        L = self.aperture
        return SensorArray(tuple(sorted(L - s for s in self.positions)))

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def __contains__(self, s) -> bool:
        return s in self.positions

    def __str__(self) -> str:
        return "[" + " ".join(str(s) for s in self.positions) + "]"


@dataclass(frozen=True, slots=True)
class WeightFunction:
    """Pair counts per spatial lag, stored for lags 0..L only.

    ``counts[m]`` is the number of unordered sensor pairs separated by
    exactly ``m`` grid units; ``counts[0]`` counts the self-pairs, one
    per sensor.  Negative lags are implicit through the even symmetry
    w(-m) = w(m) and are never stored.
    """

    counts: tuple[int, ...]

    @property
    def aperture(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, lag: int) -> int:
        """Weight at any lag; symmetric, zero outside [-L, L]."""
        m = abs(lag)
        return self.counts[m] if m < len(self.counts) else 0

    def total_pairs(self) -> int:
        """Sum of w over the full symmetric lag range [-L, L].

        Equals n^2 for the weight function of an n-sensor array: the
        count of ordered sensor pairs, self-pairs included.
        """
        return self.counts[0] + 2 * sum(self.counts[1:])


@dataclass(frozen=True, slots=True)
class Coarray:
    """Distinct spatial lags of an array, with the holes they leave.

    ``present`` holds the achieved non-negative lags; the full coarray
    is its symmetric closure over [-L, L].
    """

    aperture: int
    present: frozenset[int]

    @property
    def lags(self) -> frozenset[int]:
        """All achieved lags in [-L, L], negatives included."""
        return self.present | {-m for m in self.present}

    @property
    def holes(self) -> frozenset[int]:
        """Lags in [0, L] missing from the coarray."""
        return frozenset(range(self.aperture + 1)) - self.present

    @property
    def dof(self) -> int:
        """Degrees of freedom: number of distinct lags in [-L, L]."""
        return 2 * len(self.present) - 1

    @property
    def hole_free(self) -> bool:
        return len(self.present) == self.aperture + 1


def make_array(positions: Iterable[int]) -> SensorArray:
    """Build a SensorArray from raw integer positions.

    The input is sorted, deduplicated and translated so the smallest
    position becomes 0.  Fewer than two distinct positions, or any
    non-integer entry, raises InvalidArray.
    """
    try:
        values = sorted({operator.index(v) for v in positions})
    except TypeError as exc:
        raise InvalidArray(f"positions must be integers: {exc}") from None
    if len(values) < 2:
        raise InvalidArray("need at least 2 distinct sensor positions")
    origin = values[0]
    return SensorArray(tuple(v - origin for v in values))


def weight_function(a: SensorArray) -> WeightFunction:
    """Count the sensor pairs realizing each lag in [0, L]."""
    p = a.positions
    counts = [0] * (a.aperture + 1)
    counts[0] = a.n
    for i, pi in enumerate(p):
        for pj in p[i + 1:]:
            counts[pj - pi] += 1
    return WeightFunction(tuple(counts))


def coarray(a: SensorArray) -> Coarray:
    """Distinct lags, holes and degrees of freedom of an array."""
    w = weight_function(a)
    present = frozenset(m for m, c in enumerate(w.counts) if c > 0)
    return Coarray(aperture=a.aperture, present=present)


def weight_after_removal(a: SensorArray, w: WeightFunction, s: int) -> WeightFunction:
    """Weight function of ``a`` with sensor ``s`` removed.

    Derived incrementally from ``w`` (which must be the weight function
    of ``a``) by cancelling every pair involving ``s``; no full
    recomputation.  The table keeps the original indexing over [0, L],
    so lags beyond the surviving aperture simply drop to count 0.
    """
    if s not in a.positions:
        raise UnknownSensor(f"sensor {s} is not in the array")
    counts = list(w.counts)
    counts[0] -= 1
    for t in a.positions:
        if t != s:
            counts[abs(s - t)] -= 1
    return WeightFunction(tuple(counts))


def primary_weights(a: SensorArray) -> tuple[int, int, int]:
    """Weights at the three smallest positive lags, (w(1), w(2), w(3)).

    A diagnostic for mutual-coupling exposure: large values mean many
    closely spaced sensor pairs.
    """
    if a.aperture < 3:
        raise ApertureTooSmall("primary weights need an aperture of at least 3")
    w = weight_function(a)
    return (w[1], w[2], w[3])
