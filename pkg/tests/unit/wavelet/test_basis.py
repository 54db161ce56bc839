"""Unit tests for the wavelet basis, analysis and synthesis."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from padicwave.arith import AbsValue, PadicScalar
from padicwave.core.exceptions import DegreeTooHighError, IndexTooLargeError, InvalidParametersError
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly import BoundaryProfile, LocPolyFun
from padicwave.sampling import random_coeffs, random_locpoly, random_point
from padicwave.wavelet import (
    WaveletCoeffs,
    analyze,
    approximant,
    approximation_series,
    basis_fn,
    coefficient_ratio,
    subfamily_indices,
    synthesize,
)


class TestBasisFunctions:
    """Tests for e_{a,i,r}."""

    def test_index_too_large(self, q3: FieldDescriptor) -> None:
        """Test |i| > [r] raises IndexTooLargeError."""
        with pytest.raises(IndexTooLargeError):
            basis_fn(q3, CosetRep(()), (2,), Fraction(3, 2))

    def test_support_and_scale(self, q3: FieldDescriptor) -> None:
        """Test e_{a,0,r} is ϖ^{[l(a) r]} on its coset and zero off it."""
        e = basis_fn(q3, CosetRep((1, 2)), (0,), 1)
        assert e(CosetRep((1, 2, 1)).point(q3)) == 9
        assert e(CosetRep((1, 1)).point(q3)).is_zero

    def test_non_canonical_representative(self, q3: FieldDescriptor) -> None:
        """Test padded representatives denote the same basis function."""
        assert basis_fn(q3, CosetRep((1, 0)), (1,), 1) == basis_fn(q3, CosetRep((1,)), (1,), 1)

    @pytest.mark.parametrize(
        ("digits", "i", "r"),
        [((), (0,), 0), ((2,), (1,), 1), ((1, 2), (1,), Fraction(3, 2)), ((0, 1), (2,), 2)],
    )
    def test_analysis_of_basis_vector(self, q3: FieldDescriptor, digits: tuple[int, ...], i: tuple[int, ...], r: Fraction | int) -> None:
        """Test analyze(e_{a,i,r}) is the unit family at (a, i)."""
        a = CosetRep(digits)
        assert analyze(basis_fn(q3, a, i, r), r) == WaveletCoeffs.unit(q3, r, a, i)


class TestAnalysisSynthesis:
    """Tests for the coefficient maps."""

    @pytest.mark.parametrize("r", [0, 1, Fraction(3, 2)])
    def test_coefficients_round_trip(self, any_field: FieldDescriptor, rng: random.Random, r: Fraction | int) -> None:
        """Test analyze(synthesize(c)) == c."""
        c = random_coeffs(rng, any_field, r, 2)
        assert analyze(synthesize(c), r) == c

    def test_function_round_trip(self, any_field: FieldDescriptor, rng: random.Random) -> None:
        """Test synthesize(analyze(f)) == f for f of degree at most [r]."""
        f = random_locpoly(rng, any_field, 1, 1)
        assert synthesize(analyze(f, 1), level=1) == f

    def test_degree_too_high(self, q3: FieldDescriptor) -> None:
        """Test analyzing z^2 with [r] = 1 raises DegreeTooHighError."""
        with pytest.raises(DegreeTooHighError):
            analyze(LocPolyFun.monomial(q3, (2,)), Fraction(3, 2))

    def test_synthesize_too_coarse(self, q3: FieldDescriptor) -> None:
        """Test writing a level-2 family at level 1 raises InvalidParametersError."""
        c = WaveletCoeffs.unit(q3, 1, CosetRep((1, 1)), (0,))
        with pytest.raises(InvalidParametersError):
            synthesize(c, level=1)

    def test_linear_in_coefficients(self, q5: FieldDescriptor, rng: random.Random) -> None:
        """Test synthesize is additive on disjoint families."""
        a = WaveletCoeffs.unit(q5, 1, CosetRep((1,)), (1,))
        b = WaveletCoeffs.unit(q5, 1, CosetRep((0, 3)), (0,))
        both = WaveletCoeffs.build(q5, 1, {**a.entries, **b.entries})
        z = random_point(rng, q5)
        assert synthesize(both)(z) == synthesize(a)(z) + synthesize(b)(z)


class TestCoefficients:
    """Tests for WaveletCoeffs."""

    def test_build_merges_padded_keys(self, q3: FieldDescriptor) -> None:
        """Test entries at padded and canonical keys are summed."""
        c = WaveletCoeffs.build(q3, 1, {(CosetRep((2,)), (0,)): 1, (CosetRep((2, 0)), (0,)): 2})
        assert c.support() == [(CosetRep((2,)), (0,))]
        assert c.entries[(CosetRep((2,)), (0,))] == 3

    def test_caps_enforced(self, ramified3: FieldDescriptor) -> None:
        """Test indices outside the caps raise DegreeTooHighError."""
        with pytest.raises(DegreeTooHighError):
            WaveletCoeffs.build(ramified3, 2, {(CosetRep(()), (1, 1)): 1}, caps=(0, None))

    def test_restricted(self, ramified3: FieldDescriptor) -> None:
        """Test restriction keeps only the capped indices."""
        c = WaveletCoeffs.build(ramified3, 1, {(CosetRep(()), (1, 0)): 1, (CosetRep(()), (0, 1)): 1})
        assert c.restricted((0, None)).support() == [(CosetRep(()), (0, 1))]

    def test_sup_abs(self, q3: FieldDescriptor) -> None:
        """Test sup |b| picks the largest coefficient."""
        c = WaveletCoeffs.build(q3, 0, {(CosetRep(()), (0,)): 9, (CosetRep((1,)), (0,)): PadicScalar.from_int(q3, 3)})
        assert c.sup_abs() == AbsValue.of(1)

    def test_json_round_trip(self, unramified9: FieldDescriptor, rng: random.Random) -> None:
        """Test to_json and from_json agree."""
        c = random_coeffs(rng, unramified9, Fraction(5, 3), 1)
        assert WaveletCoeffs.from_json(c.to_json()) == c


class TestApproximation:
    """Tests for the approximants f_h and their series."""

    def test_exact_for_low_degree(self, q3: FieldDescriptor, rng: random.Random) -> None:
        """Test f_h == f once h reaches the level of a function of degree <= [r]."""
        f = random_locpoly(rng, q3, 1, 1)
        assert approximant(f, 1, 1) == f
        assert approximant(f, 1, 2) == f

    def test_negative_level(self, q3: FieldDescriptor) -> None:
        """Test h < 0 raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            approximant(LocPolyFun.constant(q3, 1), 1, -1)

    def test_series_vanishes_when_exact(self, q3: FieldDescriptor) -> None:
        """Test the distances are zero when every approximant is exact."""
        f = LocPolyFun.monomial(q3, (1,))
        steps = approximation_series(f, 1, [0, 1], depth=2)
        assert [s.h for s in steps] == [0, 1]
        assert all(s.distance.upper.is_zero for s in steps)
        assert all(s.increment.is_zero for s in steps)

    def test_constant_ratio(self, q3: FieldDescriptor) -> None:
        """Test the coefficient ratio of a constant is exactly one."""
        ratio = coefficient_ratio(LocPolyFun.constant(q3, 1), 1, depth=1)
        assert ratio.lower == AbsValue.one()
        assert ratio.upper == AbsValue.one()

    def test_subfamily_indices(self) -> None:
        """Test Y' ∩ I_{<=1} with σ_0 frozen."""
        assert subfamily_indices(1, BoundaryProfile(caps=(0, None))) == [(0, 0), (0, 1)]

    @pytest.mark.parametrize("caps", [(0, None), (1, 0), (2, 1), (None, None), (0, 0)])
    @pytest.mark.parametrize("r", [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(5, 3), Fraction(2), Fraction(7, 2)])
    def test_subfamily_matches_y(self, caps: tuple[int | None, ...], r: Fraction) -> None:
        """Test Y' and Y cut out the same indices of total degree at most [r]."""
        bp = BoundaryProfile(caps=caps)
        assert set(subfamily_indices(r, bp)) == set(bp.indices(int(r)))

    def test_subfamily_negative_order(self) -> None:
        """Test a negative order raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            subfamily_indices(Fraction(-1, 2), BoundaryProfile(caps=(0, None)))
