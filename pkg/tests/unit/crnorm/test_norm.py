"""Unit tests for certified sup norms and C^r norms."""

from __future__ import annotations

from fractions import Fraction

import pytest

from padicwave.arith import AbsValue
from padicwave.core.exceptions import InvalidParametersError
from padicwave.crnorm import (
    RatioInterval,
    SupInterval,
    cr_norm,
    derivative_constant,
    interval_max,
    norm_downgrade,
    remainder_profile,
    subspace_member,
    sup_abs,
)
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly import BoundaryProfile, LocPolyFun
from padicwave.multiindex import MultiIndex


class TestIntervals:
    """Tests for the enclosure types."""

    def test_interval_max(self) -> None:
        """Test interval_max takes the largest lower and upper bounds."""
        a = SupInterval(AbsValue.of(2), AbsValue.of(1))
        b = SupInterval(AbsValue.of(1), AbsValue.of(1))
        result = interval_max(a, b)
        assert result.lower == AbsValue.of(1)
        assert result.tight

    def test_ratio_of_intervals(self) -> None:
        """Test the ratio enclosure divides lower by upper and upper by lower."""
        num = SupInterval(AbsValue.of(2), AbsValue.of(1))
        den = SupInterval(AbsValue.of(1), AbsValue.one())
        ratio = RatioInterval.of(num, den)
        assert ratio.lower == AbsValue.of(2)
        assert ratio.upper == AbsValue.one()

    def test_ratio_unbounded_when_denominator_may_vanish(self) -> None:
        """Test a zero lower denominator gives an unbounded ratio."""
        ratio = RatioInterval.of(SupInterval(AbsValue.one(), AbsValue.one()), SupInterval(AbsValue.zero(), AbsValue.one()))
        assert ratio.upper is None

    def test_scaled(self) -> None:
        """Test scaling shifts both ends."""
        scaled = SupInterval(AbsValue.of(3), AbsValue.of(2)).scaled(Fraction(1))
        assert scaled.lower == AbsValue.of(2)
        assert scaled.upper == AbsValue.of(1)


class TestSupAbs:
    """Tests for the certified supremum."""

    def test_identity_on_integers(self, q3: FieldDescriptor) -> None:
        """Test sup |z| over O_F is one."""
        result = sup_abs(LocPolyFun.monomial(q3, (1,)), depth=2)
        assert result.tight
        assert result.value == AbsValue.one()

    def test_square_on_small_disc(self, q3: FieldDescriptor) -> None:
        """Test sup |z^2| over ϖ^2 O_F is p^{-4}."""
        result = sup_abs(LocPolyFun.monomial(q3, (2,)), region=CosetRep((0, 0)), depth=3)
        assert result.tight
        assert result.value == AbsValue.of(4)

    def test_shallow_depth_is_not_tight(self, q3: FieldDescriptor) -> None:
        """Test stopping at the region level leaves only the Gauss bound."""
        result = sup_abs(LocPolyFun.monomial(q3, (2,)), region=CosetRep((0, 0)), depth=2)
        assert not result.tight
        assert result.lower.is_zero
        assert result.upper == AbsValue.of(4)

    def test_zero_function(self, q3: FieldDescriptor) -> None:
        """Test the zero function has sup zero."""
        result = sup_abs(LocPolyFun.zero(q3), depth=1)
        assert result.upper.is_zero


class TestCrNorm:
    """Tests for cr_norm and its companions."""

    @pytest.mark.parametrize("r", [0, Fraction(1, 2), 1, 2])
    def test_constant_has_norm_one(self, any_field: FieldDescriptor, r: Fraction | int) -> None:
        """Test ‖1‖_{C^r} = 1 with no remainder."""
        report = cr_norm(LocPolyFun.constant(any_field, 1), r, depth=1)
        assert report.tight
        assert report.value.value == AbsValue.one()
        assert report.remainder_part.upper.is_zero

    @pytest.mark.parametrize("p", [2, 3])
    def test_identity_in_c1(self, p: int) -> None:
        """Test ‖z‖_{C^1} = 1 over Q_p."""
        report = cr_norm(LocPolyFun.monomial(FieldDescriptor(p=p), (1,)), 1, depth=2)
        assert report.tight
        assert report.value.value == AbsValue.one()

    def test_square_in_c2(self, q3: FieldDescriptor) -> None:
        """Test ‖z^2‖_{C^2} = 1 over Q_3."""
        report = cr_norm(LocPolyFun.monomial(q3, (2,)), 2, depth=2)
        assert report.value.value == AbsValue.one()

    def test_negative_r_rejected(self, q3: FieldDescriptor) -> None:
        """Test r < 0 raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            cr_norm(LocPolyFun.constant(q3, 1), -1)

    def test_downgrade(self, q3: FieldDescriptor) -> None:
        """Test downgrading to the same r returns the report and raising r fails."""
        f = LocPolyFun.monomial(q3, (1,))
        report = cr_norm(f, 1, depth=2)
        assert norm_downgrade(report, f, 1) is report
        assert norm_downgrade(report, f, 0).r == 0
        with pytest.raises(InvalidParametersError):
            norm_downgrade(report, f, 2)

    def test_derivative_constant_rejects_large_index(self, q3: FieldDescriptor) -> None:
        """Test |i| > r raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            derivative_constant(LocPolyFun.monomial(q3, (2,)), MultiIndex((2,)), 1)

    def test_negative_profile_range(self, q3: FieldDescriptor) -> None:
        """Test a negative h_max raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            remainder_profile(LocPolyFun.constant(q3, 1), 0, -1)


class TestSubspace:
    """Tests for membership in the boundary subspace."""

    def test_linear_in_capped_direction(self, ramified3: FieldDescriptor) -> None:
        """Test z^(1,0) lies in the subspace with d_0 = 1."""
        profile = BoundaryProfile(caps=(1, None))
        assert subspace_member(LocPolyFun.monomial(ramified3, (1, 0)), 2, profile)

    def test_quadratic_in_capped_direction(self, ramified3: FieldDescriptor) -> None:
        """Test z^(2,0) leaves the subspace once σ_0 is outside J'."""
        profile = BoundaryProfile(caps=(1, None))
        f = LocPolyFun.monomial(ramified3, (2, 0))
        assert not subspace_member(f, 2, profile)
        assert subspace_member(f, Fraction(3, 2), profile)

    def test_dimension_mismatch(self, ramified3: FieldDescriptor) -> None:
        """Test a profile of the wrong dimension raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            subspace_member(LocPolyFun.constant(ramified3, 1), 1, BoundaryProfile(caps=(None,)))
