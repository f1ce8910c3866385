"""Two-fold redundancy checks and single-failure robustness analysis.

A two-fold redundant sparse array (TFRSA) satisfies two conditions:
every lag in [1, L-1] is realized by at least two sensor pairs while
the extreme lag L is realized exactly once (healthy condition), and the
coarray stays hole-free over [0, L] after the loss of any one interior
sensor (failure condition).  Lag 0 is exempt from the healthy check:
its weight is the sensor count and says nothing about redundancy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coarray import SensorArray, WeightFunction, weight_after_removal, weight_function
from .errors import EndpointFailureUndefined, TooSmall, UnknownSensor

__all__ = [
    "FailureCheck",
    "RobustnessReport",
    "check_healthy",
    "check_failure",
    "assess",
    "essential_sensors",
]


@dataclass(frozen=True, slots=True)
class FailureCheck:
    """Verdict for one simulated sensor failure."""

    ok: bool
    first_hole: int | None


@dataclass(frozen=True, slots=True)
class RobustnessReport:
    """Full robustness assessment of one array.

    ``per_sensor`` maps every interior position to its failure verdict;
    endpoint failures are structurally fatal and are not part of the
    failure criterion.  ``fragility`` is |essential| / n, kept exact.
    """

    array: SensorArray
    healthy_ok: bool
    per_sensor: dict[int, FailureCheck]
    essential: frozenset[int]
    fragility: Fraction
    is_tfrsa: bool


def check_healthy(w: WeightFunction) -> bool:
    """Healthy two-fold coverage: w(i) >= 2 on [1, L-1] and w(L) = 1.

    Scans lags in ascending order and stops at the first violation;
    candidate arrays in a search mostly fail at small lags.
    """
    counts = w.counts
    L = w.aperture
    for i in range(1, L):
        if counts[i] < 2:
            return False
    return counts[L] == 1


def _lost_lags(a: SensorArray, w: WeightFunction, s: int) -> list[int]:
    """Lags that vanish from the coarray when sensor ``s`` is removed.

    A lag disappears exactly when every pair realizing it involves
    ``s``, so only the lags |s - t| need inspection: O(n) per sensor
    against the precomputed weight table of the intact array.
    """
    counts = w.counts
    touched: dict[int, int] = {}
    for t in a.positions:
        if t != s:
            d = abs(s - t)
            touched[d] = touched.get(d, 0) + 1
    return sorted(d for d, c in touched.items() if counts[d] == c)


def check_failure(a: SensorArray, s: int) -> FailureCheck:
    """Hole-freedom of the coarray after the failure of interior sensor ``s``.

    The surviving array must keep every lag in [0, L] of the original
    aperture; implemented on top of :func:`weight_after_removal`.
    Endpoint positions are out of scope for this criterion and raise
    EndpointFailureUndefined.
    """
    if s not in a.positions:
        raise UnknownSensor(f"sensor {s} is not in the array")
    if s == 0 or s == a.aperture:
        raise EndpointFailureUndefined(
            "failure analysis is defined for interior sensors only"
        )
    w_s = weight_after_removal(a, weight_function(a), s)
    for i in range(a.aperture + 1):
        if w_s.counts[i] == 0:
            return FailureCheck(ok=False, first_hole=i)
    return FailureCheck(ok=True, first_hole=None)


def essential_sensors(a: SensorArray) -> frozenset[int]:
    """Sensors whose removal changes the coarray lag-set.

    Compares lag-sets by definition, independent of the interior-only
    convention of the failure criterion; the endpoints of any array are
    always essential because lag L dies with them.
    """
    if a.n < 3:
        raise TooSmall("essential-sensor analysis needs at least 3 sensors")
    w = weight_function(a)
    return frozenset(s for s in a.positions if _lost_lags(a, w, s))


def assess(a: SensorArray) -> RobustnessReport:
    """Run the full two-step validation and derive the summary metrics.

    Healthy check once, failure check for every interior sensor, plus
    essential sensors and fragility.  Arrays of two sensors have no
    interior to protect and are never reported robust.
    """
    w = weight_function(a)
    healthy_ok = check_healthy(w)
    per_sensor: dict[int, FailureCheck] = {}
    all_ok = True
    for s in a.interior():
        lost = _lost_lags(a, w, s)
        verdict = FailureCheck(ok=not lost, first_hole=lost[0] if lost else None)
        per_sensor[s] = verdict
        all_ok = all_ok and verdict.ok
    essential = frozenset(s for s in a.positions if _lost_lags(a, w, s))
    return RobustnessReport(
        array=a,
        healthy_ok=healthy_ok,
        per_sensor=per_sensor,
        essential=essential,
        fragility=Fraction(len(essential), a.n),
        is_tfrsa=healthy_ok and all_ok and a.n >= 3,
    )
