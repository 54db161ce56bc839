"""Unit tests for moment oracles and the growth criterion."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from padicwave.arith import AbsValue, PadicScalar
from padicwave.core.exceptions import DegreeTooHighError, InvalidParametersError
from padicwave.distribution import (
    DiracOracle,
    HaarOracle,
    ScaledOracle,
    TableOracle,
    avv_check,
    dual_norm,
    extend_pair,
    pair,
    validate_additivity,
)
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly import LocPolyFun
from padicwave.sampling import random_locpoly, random_point
from padicwave.wavelet import analyze


class TestDirac:
    """Tests for point masses."""

    def test_moments_at_origin(self, q3: FieldDescriptor) -> None:
        """Test δ_0 has mass one on the cosets through 0 and nothing elsewhere."""
        mu = DiracOracle(q3, 1)
        assert mu.moment(CosetRep((0, 0)), 2, (0,)) == 1
        assert mu.moment(CosetRep((0, 0)), 2, (1,)).is_zero
        assert mu.moment(CosetRep((1,)), 1, (0,)).is_zero
        assert mu.support(2) == [CosetRep((0, 0))]

    def test_non_integral_point_rejected(self, q3: FieldDescriptor) -> None:
        """Test a point outside O_F raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            DiracOracle(q3, 0, PadicScalar.from_fraction(q3, Fraction(1, 3)))

    def test_index_above_degree(self, q3: FieldDescriptor) -> None:
        """Test asking for a moment above the degree raises DegreeTooHighError."""
        with pytest.raises(DegreeTooHighError):
            DiracOracle(q3, 1).moment(CosetRep(()), 0, (2,))

    @pytest.mark.parametrize("r", [0, Fraction(1, 2), 1])
    def test_growth_constant_is_one(self, q5: FieldDescriptor, rng: random.Random, r: Fraction | int) -> None:
        """Test δ_x passes the criterion with C = 1."""
        mu = DiracOracle(q5, 1, random_point(rng, q5))
        report = avv_check(mu, r, 1, 3)
        assert report.passed is True
        assert report.c_estimate == AbsValue.one()
        assert dual_norm(mu, r, 1, 3).upper == AbsValue.one()

    def test_additive(self, unramified9: FieldDescriptor, rng: random.Random) -> None:
        """Test Dirac moments are additive."""
        assert validate_additivity(DiracOracle(unramified9, 1, random_point(rng, unramified9)), 2).valid

    def test_pairing_evaluates(self, q3: FieldDescriptor, rng: random.Random) -> None:
        """Test ∫ f δ_x = f(x) and the coefficient pairing agrees."""
        x = random_point(rng, q3)
        mu = DiracOracle(q3, 1, x)
        f = random_locpoly(rng, q3, 2, 1)
        assert pair(mu, f) == f(x)
        assert extend_pair(mu, analyze(f, 1)) == f(x)

    def test_extend_pair_order(self, q3: FieldDescriptor, rng: random.Random) -> None:
        """Test an explicit order equal to the coefficients' order pairs the same and any other raises."""
        x = random_point(rng, q3)
        mu = DiracOracle(q3, 1, x)
        c = analyze(random_locpoly(rng, q3, 1, 1), Fraction(3, 2))
        assert extend_pair(mu, c, Fraction(3, 2)) == extend_pair(mu, c)
        with pytest.raises(InvalidParametersError):
            extend_pair(mu, c, 1)

    def test_pairing_degree_check(self, q3: FieldDescriptor) -> None:
        """Test pairing a function above the distribution degree raises DegreeTooHighError."""
        with pytest.raises(DegreeTooHighError):
            pair(DiracOracle(q3, 1), LocPolyFun.monomial(q3, (2,)))


class TestHaar:
    """Tests for the Riemann-sum (Haar) functional."""

    def test_integral_of_z(self, q3: FieldDescriptor) -> None:
        """Test ∫_{Z_3} z = -1/2 to ten digits."""
        gap = HaarOracle(q3, 1).moment(CosetRep(()), 0, (1,)) - PadicScalar.from_fraction(q3, Fraction(-1, 2))
        assert gap.valuation is None or gap.valuation >= 10

    def test_total_mass(self, q3: FieldDescriptor) -> None:
        """Test ∫ 1 = 1 and a level-1 coset carries 1/3."""
        mu = HaarOracle(q3, 0)
        assert mu.moment(CosetRep(()), 0, (0,)) == 1
        assert mu.moment(CosetRep((2,)), 1, (0,)) == Fraction(1, 3)

    def test_order_one(self, q3: FieldDescriptor) -> None:
        """Test the Haar functional is tempered of order 1 with C = 1."""
        report = avv_check(HaarOracle(q3, 1), 1, 1, 2)
        assert report.passed is True
        assert report.c_estimate == AbsValue.one()

    def test_not_order_half(self, q3: FieldDescriptor) -> None:
        """Test the Haar functional violates the order-1/2 growth bound."""
        report = avv_check(HaarOracle(q3, 0), Fraction(1, 2), 0, 2)
        assert report.passed is False
        assert report.violation is not None

    def test_additive(self, q3: FieldDescriptor) -> None:
        """Test Haar moments are additive."""
        assert validate_additivity(HaarOracle(q3, 1), 1).valid


class TestTablesAndScaling:
    """Tests for tabulated and scaled oracles."""

    def test_tabulated_copy_is_additive(self, q3: FieldDescriptor) -> None:
        """Test a tabulated Dirac measure keeps its additivity."""
        table = TableOracle.from_oracle(DiracOracle(q3, 1), 2)
        assert validate_additivity(table, 2).valid

    def test_broken_entry_detected(self, q3: FieldDescriptor) -> None:
        """Test changing one moment breaks additivity at the parent level."""
        table = TableOracle.from_oracle(DiracOracle(q3, 1), 2)
        broken = table.with_entry(CosetRep((0,)), 1, (0,), PadicScalar.from_int(q3, 2))
        result = validate_additivity(broken, 2)
        assert not result.valid
        assert result.failure is not None
        assert result.failure[1] == 0

    def test_json_round_trip(self, q3: FieldDescriptor, rng: random.Random) -> None:
        """Test a table survives to_json and from_json."""
        table = TableOracle.from_oracle(DiracOracle(q3, 1, random_point(rng, q3)), 2)
        again = TableOracle.from_json(q3, 1, table.to_json())
        assert again.table.keys() == table.table.keys()
        assert all(again.table[k] == v for k, v in table.table.items())

    def test_scaled(self, q3: FieldDescriptor) -> None:
        """Test scaling multiplies every moment."""
        mu = ScaledOracle(9, DiracOracle(q3, 0))
        assert mu.moment(CosetRep((0,)), 1, (0,)) == 9
        report = avv_check(mu, 0, 0, 2)
        assert report.c_estimate == AbsValue.of(2)

    def test_avv_rejects_low_degree(self, q3: FieldDescriptor) -> None:
        """Test a degree below [r] raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            avv_check(DiracOracle(q3, 0), 1, 0, 2)
