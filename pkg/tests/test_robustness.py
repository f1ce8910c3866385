from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rmra import (
    assess,
    check_failure,
    check_healthy,
    essential_sensors,
    make_array,
    weight_function,
)
from rmra.errors import EndpointFailureUndefined, TooSmall, UnknownSensor

from oracle import (
    essential_brute,
    failure_holes_brute,
    healthy_brute,
    is_tfrsa_brute,
    weights_brute,
)

CFE8 = [0, 1, 4, 5, 7, 8, 9, 10]
TABLE_N11 = [0, 1, 2, 3, 4, 10, 11, 16, 17, 21, 22]
TABLE_N14 = [0, 1, 2, 3, 4, 5, 12, 14, 21, 23, 29, 30, 35, 36]

positions_strategy = st.sets(st.integers(1, 60), min_size=2, max_size=19).map(
    lambda s: tuple(sorted({0, *s}))
)


class TestCheckHealthy:
    def test_eight_sensor_array_is_healthy(self):
        assert check_healthy(weight_function(make_array(CFE8)))

    def test_uniform_array_is_healthy(self):
        assert check_healthy(weight_function(make_array([0, 1, 2, 3])))

    def test_underweighted_lag_fails(self):
        # weights of [0,1,2,5,6] are (5,3,1,1,2,2,1): lag 2 is only
        # realized by the pair (0,2), so two-fold coverage fails there
        arr = [0, 1, 2, 5, 6]
        assert weights_brute(arr) == [5, 3, 1, 1, 2, 2, 1]
        assert not check_healthy(weight_function(make_array(arr)))

    @given(positions_strategy)
    @settings(max_examples=100, deadline=None)
    def test_matches_brute_force(self, positions):
        verdict = check_healthy(weight_function(make_array(positions)))
        assert verdict == healthy_brute(list(positions))


class TestCheckFailure:
    def test_eight_sensor_array_survives_sensor_one(self):
        assert check_failure(make_array(CFE8), 1).ok

    def test_uniform_array_survives_interior_failure(self):
        assert check_failure(make_array([0, 1, 2, 3]), 1).ok

    def test_failure_opening_a_hole(self):
        # removing sensor 2 from [0,1,2,5,6,7] loses lag 3 entirely
        verdict = check_failure(make_array([0, 1, 2, 5, 6, 7]), 2)
        assert not verdict.ok
        assert verdict.first_hole == 3

    def test_endpoints_are_out_of_scope(self):
        a = make_array(CFE8)
        with pytest.raises(EndpointFailureUndefined):
            check_failure(a, 0)
        with pytest.raises(EndpointFailureUndefined):
            check_failure(a, 10)

    def test_unknown_sensor(self):
        with pytest.raises(UnknownSensor):
            check_failure(make_array(CFE8), 6)

    @given(positions_strategy, st.data())
    @settings(max_examples=150, deadline=None)
    def test_matches_brute_force(self, positions, data):
        a = make_array(positions)
        if a.n < 3:
            return
        s = data.draw(st.sampled_from(a.interior()))
        verdict = check_failure(a, s)
        holes = failure_holes_brute(list(a.positions), s)
        assert verdict.ok == (not holes)
        assert verdict.first_hole == (holes[0] if holes else None)


class TestAssess:
    def test_eight_sensor_array_report(self):
        report = assess(make_array(CFE8))
        assert report.is_tfrsa
        assert report.healthy_ok
        assert report.essential == frozenset({0, 10})
        assert report.fragility == Fraction(1, 4)
        assert set(report.per_sensor) == {1, 4, 5, 7, 8, 9}
        assert all(v.ok for v in report.per_sensor.values())

    def test_eleven_sensor_optimal_array(self):
        assert assess(make_array(TABLE_N11)).is_tfrsa

    def test_sparse_but_fragile_array(self):
        # hole-free coarray yet single-fold lags: healthy check fails
        report = assess(make_array([0, 1, 2, 3, 7, 11]))
        assert not report.healthy_ok
        assert not report.is_tfrsa

    def test_two_sensor_arrays_are_never_robust(self):
        report = assess(make_array([0, 1]))
        assert report.healthy_ok  # no lags in [1, L-1] to cover
        assert not report.is_tfrsa
        assert report.fragility == Fraction(1, 1)

    def test_agrees_with_check_failure(self):
        a = make_array([0, 1, 2, 5, 6, 7])
        report = assess(a)
        for s in a.interior():
            assert report.per_sensor[s] == check_failure(a, s)

    @given(positions_strategy)
    @settings(max_examples=150, deadline=None)
    def test_matches_brute_force(self, positions):
        a = make_array(positions)
        report = assess(a)
        assert report.is_tfrsa == is_tfrsa_brute(list(positions))
        assert report.essential == frozenset(essential_brute(list(positions)))

    @given(positions_strategy)
    @settings(max_examples=100, deadline=None)
    def test_reflection_invariance(self, positions):
        a = make_array(positions)
        assert assess(a).is_tfrsa == assess(a.mirrored()).is_tfrsa

    @given(positions_strategy)
    @settings(max_examples=150, deadline=None)
    def test_robust_arrays_have_near_endpoint_sensors(self, positions):
        # lag L-1 can only be covered twice by the pairs (0, L-1) and (1, L)
        a = make_array(positions)
        if assess(a).is_tfrsa and a.aperture >= 3:
            assert 1 in a.positions
            assert (a.aperture - 1) in a.positions

    @given(positions_strategy)
    @settings(max_examples=150, deadline=None)
    def test_tfrsa_implies_two_essential_endpoints(self, positions):
        a = make_array(positions)
        report = assess(a)
        if report.is_tfrsa:
            assert report.essential == frozenset({0, a.aperture})
            assert report.fragility == Fraction(2, a.n)

    @given(positions_strategy)
    @settings(max_examples=150, deadline=None)
    def test_failures_of_healthy_arrays_hit_interior_lags(self, positions):
        # endpoints and lag 0 survive any interior removal, so the first
        # hole of a healthy array always lands in [1, L-1]
        a = make_array(positions)
        report = assess(a)
        if report.healthy_ok:
            for verdict in report.per_sensor.values():
                if not verdict.ok:
                    assert 1 <= verdict.first_hole <= a.aperture - 1


class TestEssentialSensors:
    def test_three_sensor_uniform_array(self):
        assert essential_sensors(make_array([0, 1, 2])) == frozenset({0, 1, 2})

    def test_fourteen_sensor_optimal_array(self):
        assert essential_sensors(make_array(TABLE_N14)) == frozenset({0, 36})

    def test_too_small(self):
        with pytest.raises(TooSmall):
            essential_sensors(make_array([0, 4]))

    @given(positions_strategy)
    @settings(max_examples=100, deadline=None)
    def test_matches_brute_force(self, positions):
        a = make_array(positions)
        if a.n >= 3:
            assert essential_sensors(a) == frozenset(essential_brute(list(positions)))
