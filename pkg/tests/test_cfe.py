from fractions import Fraction

import pytest

from rmra import (
    assess,
    cfe_aperture,
    cfe_array,
    cfe_dof,
    cfe_positions,
    coarray,
    ies_of,
    make_array,
    validate_range,
)
from rmra.errors import BelowMinimumSize, DomainError


def corrupted_positions(n):
    """Family generator with the first tail sensor shifted by three."""
    p = n - 6
    return [*range(p), 2 * p + 3, 2 * p + 1, 3 * p + 1, 3 * p + 2, 4 * p + 1, 4 * p + 2]


class TestGenerator:
    def test_smallest_member(self):
        assert cfe_array(8).array.positions == (0, 1, 4, 5, 7, 8, 9, 10)

    def test_eleven_sensor_member_matches_searched_optimum(self):
        assert cfe_array(11).array.positions == (0, 1, 2, 3, 4, 10, 11, 16, 17, 21, 22)

    def test_hundred_sensor_member(self):
        member = cfe_array(100)
        assert member.array.positions == (*range(94), 188, 189, 283, 284, 377, 378)
        assert member.p == 94

    def test_below_minimum_size(self):
        for fn in (cfe_array, cfe_aperture, cfe_dof, cfe_positions):
            with pytest.raises(BelowMinimumSize):
                fn(7)


class TestIdentities:
    @pytest.mark.parametrize("n,aperture", [(8, 10), (11, 22), (12, 26)])
    def test_aperture_values(self, n, aperture):
        assert cfe_aperture(n) == aperture
        assert cfe_array(n).array.aperture == aperture

    @pytest.mark.parametrize("n,dof", [(8, 21), (12, 53)])
    def test_dof_values(self, n, dof):
        assert cfe_dof(n) == dof

    @pytest.mark.parametrize("n", range(8, 61))
    def test_identities_hold(self, n):
        member = cfe_array(n)
        assert member.aperture == 4 * n - 22 == member.array.aperture
        assert member.dof == 8 * n - 43 == 2 * member.aperture + 1
        c = coarray(member.array)
        assert c.hole_free
        assert c.dof == member.dof


class TestSpacings:
    def test_smallest_member_spacings(self):
        assert cfe_array(8).ies.spacings == (1, 3, 1, 2, 1, 1, 1)

    def test_spacing_pattern_for_any_size(self):
        for n in (9, 12, 25, 80):
            p = n - 6
            expected = (1,) * (p - 1) + (p + 1, 1, p, 1, p - 1, 1)
            assert cfe_array(n).ies.spacings == expected

    def test_display_compresses_unit_runs(self):
        assert str(cfe_array(11).ies) == "{1^4, 6, 1, 5, 1, 4, 1}"
        assert str(ies_of(make_array(range(5)))) == "{1^4}"

    def test_positions_round_trip(self):
        for n in (8, 13, 40):
            member = cfe_array(n)
            assert member.ies.positions() == member.array.positions
        arbitrary = make_array([0, 2, 9, 11, 20])
        assert ies_of(arbitrary).positions() == arbitrary.positions

    def test_spacings_sum_to_aperture(self):
        member = cfe_array(17)
        assert member.ies.aperture == member.aperture


class TestRobustnessOfFamily:
    @pytest.mark.parametrize("n", [8, 9, 10, 11, 12, 20, 47, 113])
    def test_members_are_robust(self, n):
        report = assess(cfe_array(n).array)
        assert report.is_tfrsa
        assert report.essential == frozenset({0, 4 * n - 22})
        assert report.fragility == Fraction(2, n)


class TestValidateRange:
    def test_single_size(self):
        summary = validate_range(8, 8)
        assert summary.mega_count == 0
        assert summary.failures == ()

    def test_small_sweep(self):
        summary = validate_range(8, 60)
        assert summary.mega_count == 0

    def test_progress_callback_sees_every_size(self):
        seen = []
        validate_range(8, 14, progress=seen.append)
        assert seen == list(range(8, 15))

    def test_range_validation(self):
        with pytest.raises(DomainError):
            validate_range(7, 20)
        with pytest.raises(DomainError):
            validate_range(12, 9)

    def test_corrupted_generator_negative_control(self):
        # frozen from the brute-force oracle: every size fails except
        # n=10, where the shifted tail happens to land on another
        # robust array ([0,1,2,3,9,11,13,14,17,18])
        summary = validate_range(8, 50, generator=corrupted_positions)
        assert summary.mega_count == 42
        failing = {f.n for f in summary.failures}
        assert failing == set(range(8, 51)) - {10}
        assert assess(make_array(corrupted_positions(10))).is_tfrsa

    def test_generator_collapsing_to_one_position_is_a_failure(self):
        summary = validate_range(8, 9, generator=lambda n: [4] * n)
        assert summary.mega_count == 2
        assert all(f.reason == "invalid-array" for f in summary.failures)

    def test_failure_reasons_are_specific(self):
        summary = validate_range(8, 12, generator=lambda n: list(range(n - 1)) + [n + 3])
        assert summary.mega_count == 5
        assert {f.reason for f in summary.failures} <= {"healthy-check", "failure-check"}
