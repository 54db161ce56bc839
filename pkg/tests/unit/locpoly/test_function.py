"""Unit tests for locally polynomial functions."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from pydantic import ValidationError

from padicwave.arith import AbsValue, PadicScalar
from padicwave.core.exceptions import DegreeTooHighError, FieldMismatchError, InvalidParametersError
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly import BoundaryProfile, LocPolyDocument, LocPolyFun
from padicwave.multiindex import MultiIndex, mi_binom
from padicwave.sampling import random_locpoly, random_point


class TestConstruction:
    """Tests for LocPolyFun.build and the named constructors."""

    def test_wrong_level_rejected(self, q3: FieldDescriptor) -> None:
        """Test a coset of the wrong level raises InvalidParametersError."""
        one = PadicScalar.one(q3)
        with pytest.raises(InvalidParametersError):
            LocPolyFun.build(q3, 2, {CosetRep((1,)): {MultiIndex((0,)): one}})

    def test_caps_enforced(self, ramified3: FieldDescriptor) -> None:
        """Test an index above the caps raises DegreeTooHighError."""
        one = PadicScalar.one(ramified3)
        with pytest.raises(DegreeTooHighError):
            LocPolyFun.build(ramified3, 0, {CosetRep(()): {MultiIndex((0, 2)): one}}, caps=(None, 1))

    def test_zero_coefficients_dropped(self, q3: FieldDescriptor) -> None:
        """Test zero entries do not count towards the support."""
        zero = PadicScalar.exact_zero(q3)
        f = LocPolyFun.build(q3, 1, {CosetRep((1,)): {MultiIndex((0,)): zero}})
        assert f.is_zero
        assert f == LocPolyFun.zero(q3)

    def test_monomial_evaluates(self, any_field: FieldDescriptor, rng: random.Random) -> None:
        """Test the monomial z^(1, 0, ...) is the identity function."""
        z = random_point(rng, any_field)
        f = LocPolyFun.monomial(any_field, MultiIndex.unit(any_field.d, 0))
        assert f(z) == z

    def test_indicator(self, q3: FieldDescriptor) -> None:
        """Test an indicator is one on its coset and zero elsewhere."""
        f = LocPolyFun.indicator(q3, CosetRep((1,)))
        assert f(CosetRep((1, 2)).point(q3)) == 1
        assert f(CosetRep((2,)).point(q3)).is_zero

    def test_field_mismatch_on_evaluate(self, q2: FieldDescriptor, q3: FieldDescriptor) -> None:
        """Test evaluating at a point of another field raises FieldMismatchError."""
        with pytest.raises(FieldMismatchError):
            LocPolyFun.constant(q3, 1)(PadicScalar.one(q2))


class TestRefinement:
    """Tests for rewriting a function at a finer level."""

    def test_refine_keeps_values(self, any_field: FieldDescriptor, rng: random.Random) -> None:
        """Test refine_to gives the same function."""
        f = random_locpoly(rng, any_field, 0, 2)
        g = f.refine_to(2)
        assert g.level == 2
        assert g == f
        for _ in range(5):
            z = random_point(rng, any_field)
            assert g(z) == f(z)

    def test_constant_across_levels(self, q3: FieldDescriptor) -> None:
        """Test a constant is the same at levels 0 and 2."""
        assert LocPolyFun.constant(q3, 7, level=2) == LocPolyFun.constant(q3, 7)

    def test_refine_down_rejected(self, q3: FieldDescriptor) -> None:
        """Test refining to a coarser level raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            LocPolyFun.constant(q3, 1, level=2).refine_to(1)


class TestDerivatives:
    """Tests for the divided derivatives D_i f / i!."""

    def test_derived_of_monomial(self, q3: FieldDescriptor) -> None:
        """Test D_1(z^3) / 1! = 3 z^2."""
        f = LocPolyFun.monomial(q3, (3,))
        assert f.derived((1,)) == LocPolyFun.monomial(q3, (2,), 3)

    @pytest.mark.parametrize(("i", "j"), [((1, 0), (0, 1)), ((1, 0), (1, 0)), ((0, 1), (1, 1))])
    def test_composition(self, ramified3: FieldDescriptor, rng: random.Random, i: tuple[int, ...], j: tuple[int, ...]) -> None:
        """Test derived_j(derived_i f) = binom(i + j, i) · derived_{i+j} f."""
        f = random_locpoly(rng, ramified3, 1, 3)
        total = MultiIndex(i).plus(j)
        assert f.derived(i).derived(j) == f.derived(total).scale(mi_binom(total, i))

    def test_leibniz(self, q3: FieldDescriptor, rng: random.Random) -> None:
        """Test derived_k(fg) = Σ_{l <= k} derived_l(f) · derived_{k-l}(g)."""
        f = random_locpoly(rng, q3, 1, 2)
        g = random_locpoly(rng, q3, 0, 2)
        k = MultiIndex((2,))
        expected = LocPolyFun.zero(q3)
        for low in k.below():
            expected = expected + f.derived(low) * g.derived(k.minus(low))
        assert (f * g).derived(k) == expected

    def test_remainder(self, q5: FieldDescriptor, rng: random.Random) -> None:
        """Test the Taylor remainder of z^2 of order 1 is y^2 and of order 2 is zero."""
        f = LocPolyFun.monomial(q5, (2,))
        x = random_point(rng, q5)
        y = random_point(rng, q5)
        assert f.remainder(1, x, y) == y * y
        assert f.remainder(Fraction(5, 2), x, y).is_zero


class TestProductAndNorm:
    """Tests for pointwise products and the F_h norm."""

    def test_product_is_pointwise(self, unramified9: FieldDescriptor, rng: random.Random) -> None:
        """Test (fg)(z) = f(z) g(z)."""
        f = random_locpoly(rng, unramified9, 1, 1)
        g = random_locpoly(rng, unramified9, 0, 1)
        fg = f * g
        for _ in range(4):
            z = random_point(rng, unramified9)
            assert fg(z) == f(z) * g(z)

    def test_fh_norm_of_indicator(self, q3: FieldDescriptor) -> None:
        """Test an indicator has F_h norm one."""
        assert LocPolyFun.indicator(q3, CosetRep((2, 1))).fh_norm() == AbsValue.one()

    def test_fh_norm_weights_degree(self, q3: FieldDescriptor) -> None:
        """Test a linear coefficient at level 1 is weighted by q^{-1}."""
        f = LocPolyFun.build(q3, 1, {CosetRep((0,)): {MultiIndex((1,)): PadicScalar.one(q3)}})
        assert f.fh_norm() == AbsValue.of(1)

    def test_zero_norm(self, q3: FieldDescriptor) -> None:
        """Test the zero function has norm zero."""
        assert LocPolyFun.zero(q3).fh_norm().is_zero


class TestBoundaryProfile:
    """Tests for the analytic directions and caps."""

    def test_full(self) -> None:
        """Test the full profile leaves every direction analytic."""
        profile = BoundaryProfile.full(2)
        assert profile.analytic == frozenset({0, 1})
        assert profile.y_caps() == (None, None)

    @pytest.mark.parametrize(("r", "enlarged"), [(Fraction(3, 2), {0, 1}), (2, {1})])
    def test_enlarged(self, r: Fraction | int, enlarged: set[int]) -> None:
        """Test J' adds σ with d_σ + 1 > r."""
        profile = BoundaryProfile(caps=(1, None))
        assert profile.enlarged(r) == frozenset(enlarged)

    def test_y_prime_caps(self) -> None:
        """Test Y' drops the caps of directions in J'."""
        profile = BoundaryProfile(caps=(1, None))
        assert profile.y_prime_caps(Fraction(3, 2)) == (None, None)
        assert profile.y_prime_caps(2) == (1, None)

    def test_negative_cap_rejected(self) -> None:
        """Test negative caps raise ValidationError."""
        with pytest.raises(ValidationError):
            BoundaryProfile(caps=(-1, None))

    def test_indices(self) -> None:
        """Test Y ∩ I_{<=2} with σ_0 frozen at degree 0."""
        assert BoundaryProfile(caps=(0, None)).indices(2) == [(0, 0), (0, 1), (0, 2)]


class TestDocument:
    """Tests for the JSON document form."""

    def test_round_trip(self, any_field: FieldDescriptor, rng: random.Random) -> None:
        """Test a function survives a trip through JSON text."""
        f = random_locpoly(rng, any_field, 1, 2)
        text = LocPolyDocument.from_function(f).model_dump_json()
        assert LocPolyDocument.model_validate_json(text).to_function() == f

    def test_unknown_key_rejected(self) -> None:
        """Test extra keys raise ValidationError."""
        with pytest.raises(ValidationError):
            LocPolyDocument.model_validate({"field": {"p": 3}, "level": 0, "extra": 1})
