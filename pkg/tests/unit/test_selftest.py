"""Unit tests for the selftest runner."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from padicwave.core.enums import SelftestScope
from padicwave.core.exceptions import InvalidParametersError
from padicwave.deltaops import ProbeReport
from padicwave.selftest import CHECKS, PLANS, SEPARATION_CASES, ConstantLock, check_finite_differences, run_selftest


class TestRegistry:
    """Tests for the check registry and plans."""

    def test_checks_registered(self) -> None:
        """Test every named check is registered."""
        assert set(CHECKS) >= {
            "basis_norms",
            "round_trip",
            "coefficient_bound",
            "norm_inequalities",
            "derivative_structure",
            "approximants",
            "avv",
            "separation",
            "finite_differences",
            "subspace",
        }

    def test_full_plan_is_larger(self) -> None:
        """Test the full plan covers more fields and samples than the fast one."""
        fast, full = PLANS[SelftestScope.FAST], PLANS[SelftestScope.FULL]
        assert len(full.fields) > len(fast.fields)
        assert full.samples > fast.samples
        assert full.round_trip_samples > fast.round_trip_samples

    def test_full_plan_scale(self) -> None:
        """Test the full plan runs at the acceptance scale."""
        full = PLANS[SelftestScope.FULL]
        assert {(fd.p, fd.f, fd.e) for fd in full.fields} == {(2, 1, 1), (3, 1, 1), (5, 1, 1), (3, 2, 1), (3, 1, 2)}
        assert full.r_values == (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(5, 3), Fraction(2))
        assert full.basis_level == 3
        assert full.basis_depth == 5
        assert full.round_trip_samples == 200
        assert full.round_trip_level == 3
        assert full.samples == 100
        assert full.approx_h == 4
        assert full.haar_additivity_depth == 4
        assert full.avv_depth == 6
        assert full.separation_depth == 6
        assert full.delta_h == (1, 2, 3, 4)
        assert full.delta_points == 5
        assert full.poly_degree == 4
        assert full.probe_h == 5

    def test_separation_cases_grow(self) -> None:
        """Test every separation case has 0 < r_k < r."""
        for _, r_vec, k in SEPARATION_CASES:
            assert 0 < r_vec[k] < sum(r_vec)


class TestRunSelftest:
    """Tests for run_selftest."""

    def test_unknown_check_raises(self) -> None:
        """Test an unknown check name raises InvalidParametersError."""
        with pytest.raises(InvalidParametersError):
            run_selftest(SelftestScope.FAST, only=["no_such_check"])

    def test_single_check(self) -> None:
        """Test running one algebraic check gives a one-entry passing report."""
        report = run_selftest(SelftestScope.FAST, seed=3, only=["derivative_structure"])
        assert [r.name for r in report.results] == ["derivative_structure"]
        assert report.passed
        assert report.failing == []
        payload = report.to_json()
        assert payload["scope"] == "fast"
        assert payload["seed"] == 3

    def test_coefficient_bound(self) -> None:
        """Test the constant-index factor holds and a constant is recorded per configuration."""
        report = run_selftest(SelftestScope.FAST, seed=1, only=["coefficient_bound"])
        result = report.results[0]
        assert result.passed, result.detail
        plan = PLANS[SelftestScope.FAST]
        assert len(result.detail["constants"]) == len(plan.fields) * len(plan.r_values)

    def test_same_seed_same_constants(self) -> None:
        """Test two runs with one seed record identical constants."""
        first = run_selftest(SelftestScope.FAST, seed=2, only=["coefficient_bound"])
        second = run_selftest(SelftestScope.FAST, seed=2, only=["coefficient_bound"])
        assert first.results[0].detail["constants"] == second.results[0].detail["constants"]

    def test_separation_fast(self) -> None:
        """Test both separating distributions pass additivity, uniform and tensor checks at the fast depth."""
        report = run_selftest(SelftestScope.FAST, only=["separation"])
        assert report.passed, report.results[0].detail

    @pytest.mark.slow
    def test_separation_full(self) -> None:
        """Test the separation case by case through depth 6, additivity included."""
        detail = run_selftest(SelftestScope.FULL, only=["separation"]).results[0].detail
        assert len(detail) == len(SEPARATION_CASES)
        for case in detail.values():
            assert case == {"exact_growth": True, "growing": True, "additive": True, "uniform": True, "tensor": True}

    def test_any_ratio_violation_fails(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test a violation of either ratio fails the finite-difference check."""
        plan = PLANS[SelftestScope.FAST]
        for name in ("leading", "spread"):
            report = ProbeReport(rows=[], constants={}, violations=[(name, 2)])
            monkeypatch.setattr("padicwave.selftest.inequality_probe", lambda *_a, _r=report, **_k: _r)
            passed, detail = check_finite_differences(plan, random.Random(0))
            assert not passed
            assert any(failure.get("probe") == [name] for failure in detail["failures"])


class TestConstantLock:
    """Tests for recording and enforcing empirical constants."""

    def test_round_trip_through_file(self, tmp_path: Path) -> None:
        """Test a recorded lock reloads unchanged and the rerun passes against it."""
        report = run_selftest(SelftestScope.FAST, seed=4, only=["approximants"])
        lock = ConstantLock.of(report)
        assert set(lock.constants) == {"approximants"}
        path = tmp_path / "lock.json"
        lock.dump(path)
        assert ConstantLock.load(path) == lock
        assert run_selftest(SelftestScope.FAST, seed=4, only=["approximants"], lock=lock).passed

    def test_moved_constant_fails(self) -> None:
        """Test a locked configuration whose constant moved fails with the drift recorded."""
        report = run_selftest(SelftestScope.FAST, seed=4, only=["approximants"])
        recorded = report.results[0].detail["constants"]
        key = next(iter(recorded))
        tampered = ConstantLock(scope=SelftestScope.FAST, seed=4, constants={"approximants": recorded | {key: "-99"}})
        rerun = run_selftest(SelftestScope.FAST, seed=4, only=["approximants"], lock=tampered)
        assert not rerun.passed
        assert rerun.results[0].detail["drift"] == {key: {"locked": "-99", "recorded": recorded[key]}}

    def test_missing_configuration_drifts(self) -> None:
        """Test a locked configuration the run no longer records counts as drift."""
        tampered = ConstantLock(scope=SelftestScope.FAST, seed=4, constants={"approximants": {"Q_7:1": "0"}})
        rerun = run_selftest(SelftestScope.FAST, seed=4, only=["approximants"], lock=tampered)
        assert rerun.results[0].detail["drift"] == {"Q_7:1": {"locked": "0", "recorded": None}}

    def test_unlocked_checks_untouched(self) -> None:
        """Test checks without locked constants keep their own verdict."""
        lock = ConstantLock(scope=SelftestScope.FAST, seed=3, constants={"approximants": {"x": "0"}})
        report = run_selftest(SelftestScope.FAST, seed=3, only=["derivative_structure"], lock=lock)
        assert report.passed

    def test_wrong_scope_or_seed(self) -> None:
        """Test a lock recorded under another seed raises InvalidParametersError."""
        lock = ConstantLock(scope=SelftestScope.FAST, seed=1)
        with pytest.raises(InvalidParametersError):
            run_selftest(SelftestScope.FAST, seed=2, only=["approximants"], lock=lock)
