"""Named acceptance checks, run at a ``fast`` or a ``full`` scale.

Each check returns a verdict and a JSON-ready detail payload. A check that
raises a library error is recorded as failed with the error name; checks
never raise. Checks that record empirical constants can be held to a
:class:`ConstantLock` written by an earlier run.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation, SelftestScope
from padicwave.core.exceptions import DepthInsufficientError, InvalidParametersError, PadicWaveError
from padicwave.crnorm import RatioInterval, cr_norm, subspace_member
from padicwave.deltaops import inequality_probe, recover_leading
from padicwave.distribution import (
    DiracOracle,
    HaarOracle,
    avv_check,
    counterexample_build,
    extend_pair,
    growth_table,
    pair,
    tensor_check,
    uniform_check,
    validate_additivity,
)
from padicwave.fields.cosets import CosetRep, residue_system
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.function import LocPolyFun, integer_part
from padicwave.locpoly.profile import BoundaryProfile
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import MultiIndex, index_set, mi_binom
from padicwave.sampling import make_rng, random_coeffs, random_divided_poly, random_locpoly, random_point
from padicwave.wavelet import analyze, approximation_series, basis_fn, synthesize

logger: BoundLogger = get_logger(__name__)

type Detail = dict[str, Any]
type CheckFn = Callable[["SelftestPlan", random.Random], tuple[bool, Detail]]


@dataclass(frozen=True, slots=True)
class SelftestPlan:
    fields: tuple[FieldDescriptor, ...]
    r_values: tuple[Fraction, ...]
    basis_level: int
    basis_depth: int
    round_trip_level: int
    round_trip_samples: int
    max_level: int
    samples: int
    extra_depth: int
    approx_h: int
    avv_depth: int
    haar_additivity_depth: int
    separation_depth: int
    delta_h: tuple[int, ...]
    delta_points: int
    poly_degree: int
    probe_h: int


def _fields(*specs: tuple[int, int, int]) -> tuple[FieldDescriptor, ...]:
    return tuple(FieldDescriptor(p=p, f=f, e=e) for p, f, e in specs)


PLANS: dict[SelftestScope, SelftestPlan] = {
    SelftestScope.FAST: SelftestPlan(
        fields=_fields((2, 1, 1), (3, 1, 1), (3, 1, 2)),
        r_values=(Fraction(0), Fraction(1, 2), Fraction(1)),
        basis_level=1,
        basis_depth=3,
        round_trip_level=1,
        round_trip_samples=4,
        max_level=1,
        samples=4,
        extra_depth=2,
        approx_h=2,
        avv_depth=4,
        haar_additivity_depth=2,
        separation_depth=3,
        delta_h=(1, 2),
        delta_points=2,
        poly_degree=2,
        probe_h=2,
    ),
    SelftestScope.FULL: SelftestPlan(
        fields=_fields((2, 1, 1), (3, 1, 1), (5, 1, 1), (3, 2, 1), (3, 1, 2)),
        r_values=(Fraction(0), Fraction(1, 2), Fraction(1), Fraction(5, 3), Fraction(2)),
        basis_level=3,
        basis_depth=5,
        round_trip_level=3,
        round_trip_samples=200,
        max_level=2,
        samples=100,
        extra_depth=3,
        approx_h=4,
        avv_depth=6,
        haar_additivity_depth=4,
        separation_depth=6,
        delta_h=(1, 2, 3, 4),
        delta_points=5,
        poly_degree=4,
        probe_h=5,
    ),
}

SEPARATION_CASES: tuple[tuple[int, tuple[Fraction, ...], int], ...] = (
    (3, (Fraction(3, 2), Fraction(1, 2)), 1),
    (5, (Fraction(1), Fraction(1)), 0),
)

CHECKS: dict[str, CheckFn] = {}


def check(name: str) -> Callable[[CheckFn], CheckFn]:
    def register(fn: CheckFn) -> CheckFn:
        CHECKS[name] = fn
        return fn

    return register


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: Detail
    seconds: float = 0.0

    def to_json(self) -> Detail:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True, slots=True)
class SelftestReport:
    scope: SelftestScope
    seed: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failing(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]

    def to_json(self) -> Detail:
        return {
            "scope": self.scope.value,
            "seed": self.seed,
            "passed": self.passed,
            "failing": self.failing,
            "checks": [r.to_json() for r in self.results],
        }


def _q_power(fd: FieldDescriptor, x: Fraction) -> AbsValue:
    """q^x as an absolute value."""
    return AbsValue.of(-fd.f * x)


@check("basis_norms")
def check_basis_norms(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    checked = 0
    failures: list[Detail] = []
    for fd in plan.fields:
        for r in plan.r_values:
            indices = index_set(Relation.LE, integer_part(r), fd.d)
            for level in range(plan.basis_level + 1):
                for a in residue_system(fd, level):
                    if a.canonical() != a:
                        continue
                    for i in indices:
                        depth = min(level + plan.extra_depth, plan.basis_depth)
                        norm = cr_norm(basis_fn(fd, a, i, r), r, depth=depth).value
                        bound = _q_power(fd, -(floor(level * r) - level * r + r - i.total))
                        ok = norm.upper <= bound and bound <= _q_power(fd, Fraction(1))
                        if level == 0:
                            ok = ok and norm.tight and norm.value == AbsValue.one()
                        checked += 1
                        if not ok:
                            failures.append(
                                {
                                    "field": fd.label(),
                                    "r": str(r),
                                    "a": list(a.digits),
                                    "i": list(i),
                                    "upper": str(norm.upper),
                                }
                            )
    return not failures, {"checked": checked, "failures": failures[:10]}


@check("round_trip")
def check_round_trip(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    checked = 0
    failures: list[Detail] = []
    for fd in plan.fields:
        for r in plan.r_values:
            for _ in range(plan.round_trip_samples):
                f = random_locpoly(rng, fd, rng.randint(0, plan.round_trip_level), integer_part(r))
                c = random_coeffs(rng, fd, r, plan.round_trip_level)
                checked += 1
                if synthesize(analyze(f, r)) != f or analyze(synthesize(c), r) != c:
                    failures.append({"field": fd.label(), "r": str(r)})
    return not failures, {"checked": checked, "failures": failures[:10]}


def _worse(worst: AbsValue | None, upper: AbsValue | None) -> AbsValue | None:
    """Running maximum of certified ratio uppers; None once any ratio is unbounded."""
    if worst is None or upper is None:
        return None
    return max(worst, upper)


def _exponent(value: AbsValue | None) -> str | None:
    return None if value is None or value.exponent is None else str(value.exponent)


@check("coefficient_bound")
def check_coefficient_bound(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    """Record C with sup |b_{a,i}(f)| <= C ||f|| and check the q^r factor on constant-index families."""
    constants: dict[str, str | None] = {}
    violations: list[Detail] = []
    for fd in plan.fields:
        constant_caps = (0,) * fd.d
        for r in plan.r_values:
            worst: AbsValue | None = AbsValue.zero()
            for _ in range(plan.samples):
                f = random_locpoly(rng, fd, rng.randint(0, plan.max_level), integer_part(r))
                if not f.is_zero:
                    norm = cr_norm(f, r, depth=f.level + plan.extra_depth).value
                    worst = _worse(worst, RatioInterval.exact(analyze(f, r).sup_abs(), norm).upper)
                # f = Σ b_a e_{a,0,r}
                c = random_coeffs(rng, fd, r, plan.max_level, caps=constant_caps)
                if c.is_zero:
                    continue
                g = synthesize(c)
                g_norm = cr_norm(g, r, depth=g.level + plan.extra_depth).value
                if c.sup_abs() > g_norm.upper.scaled(fd.f * r):
                    violations.append(
                        {"field": fd.label(), "r": str(r), "b0": str(c.sup_abs()), "norm": str(g_norm.upper)}
                    )
            constants[f"{fd.label()}:{r}"] = _exponent(worst)
    return not violations, {"constants": constants, "violations": violations[:10]}


@check("norm_inequalities")
def check_norm_inequalities(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    checked = 0
    failures: list[Detail] = []
    for fd in plan.fields:
        for r in plan.r_values:
            for _ in range(plan.samples):
                level = rng.randint(0, plan.max_level)
                degree = integer_part(r) + 1
                f = random_locpoly(rng, fd, level, degree)
                g = random_locpoly(rng, fd, level, degree)
                depth = level + plan.extra_depth
                nf = cr_norm(f, r, depth).value
                ng = cr_norm(g, r, depth).value
                nfg = cr_norm(f * g, r, depth).value
                checked += 1
                if nf.upper > f.fh_norm().scaled(fd.f * r * level):
                    failures.append({"field": fd.label(), "r": str(r), "kind": "level"})
                if nfg.upper > nf.upper * ng.upper:
                    failures.append({"field": fd.label(), "r": str(r), "kind": "product"})
    return not failures, {"checked": checked, "failures": failures[:10]}


@check("derivative_structure")
def check_derivative_structure(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    checked = 0
    failures: list[Detail] = []
    for fd in plan.fields:
        small = index_set(Relation.LE, 2, fd.d)
        for _ in range(plan.samples):
            level = rng.randint(0, plan.max_level)
            f = random_locpoly(rng, fd, level, 3)
            g = random_locpoly(rng, fd, level, 3)
            i, j, k = rng.choice(small), rng.choice(small), rng.choice(small)
            composed = f.derived(i).derived(j) == f.derived(i.plus(j)).scale(mi_binom(i.plus(j), i))
            leibniz = LocPolyFun.zero(fd, level)
            for low in k.below():
                leibniz = leibniz + f.derived(low) * g.derived(k.minus(low))
            checked += 1
            if not composed or (f * g).derived(k) != leibniz:
                failures.append({"field": fd.label(), "i": list(i), "j": list(j), "k": list(k)})
    return not failures, {"checked": checked, "failures": failures[:10]}


@check("approximants")
def check_approximants(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    constants: dict[str, str | None] = {}
    failures: list[Detail] = []
    for fd in plan.fields:
        for r in (Fraction(1), Fraction(3, 2)):
            m = MultiIndex.unit(fd.d, 0, integer_part(r) + 1)
            steps = approximation_series(LocPolyFun.monomial(fd, m), r, range(plan.approx_h + 1), depth=plan.extra_depth)
            worst: AbsValue | None = AbsValue.zero()
            for step in steps:
                worst = _worse(worst, RatioInterval.exact(step.increment, step.envelope).upper)
            for before, after in zip(steps, steps[1:], strict=False):
                if not after.distance.upper < before.distance.lower:
                    failures.append({"field": fd.label(), "r": str(r), "h": after.h})
            constants[f"{fd.label()}:{r}"] = _exponent(worst)
    return not failures, {"constants": constants, "failures": failures[:10]}


@check("avv")
def check_avv(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    detail: Detail = {}
    ok = True
    for p in (3, 5):
        fd = FieldDescriptor(p=p)
        for r in plan.r_values:
            dirac = avv_check(DiracOracle(fd, integer_part(r), random_point(rng, fd)), r, integer_part(r), plan.avv_depth)
            passed = dirac.passed is True and dirac.c_estimate == AbsValue.one()
            detail[f"dirac:{fd.label()}:{r}"] = passed
            ok = ok and passed
        haar = HaarOracle(fd, 1)
        smooth = avv_check(haar, 1, 1, plan.avv_depth)
        rough = avv_check(HaarOracle(fd, 0), Fraction(1, 2), 0, plan.avv_depth)
        detail[f"haar:{fd.label()}:1"] = smooth.passed is True and smooth.c_estimate == AbsValue.one()
        detail[f"haar:{fd.label()}:1/2"] = rough.passed is False and rough.violation is not None
        gap = haar.moment(CosetRep(()), 0, (1,)) - PadicScalar.from_fraction(fd, Fraction(-1, 2))
        detail[f"haar_integral:{fd.label()}"] = gap.valuation is None or gap.valuation >= 10
        additive = validate_additivity(haar, plan.haar_additivity_depth).valid
        detail[f"haar_additive:{fd.label()}"] = additive
        mismatches = 0
        for _ in range(plan.samples):
            f = random_locpoly(rng, fd, rng.randint(0, plan.max_level), 1)
            for mu in (haar, DiracOracle(fd, 1, random_point(rng, fd))):
                if extend_pair(mu, analyze(f, 1), 1) != pair(mu, f):
                    mismatches += 1
        detail[f"pairing:{fd.label()}"] = mismatches == 0
        ok = ok and all(v for k, v in detail.items() if fd.label() in k)
    return ok, detail


@check("separation")
def check_separation(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    detail: Detail = {}
    ok = True
    depth = plan.separation_depth
    for p, r_vec, k in SEPARATION_CASES:
        mu = counterexample_build(p, r_vec, k)
        rows = growth_table(mu, depth)
        exact = all(row.ratio == AbsValue.of(-mu.d * row.n * r_vec[k]) for row in rows)
        growing = all(a.ratio < b.ratio for a, b in zip(rows, rows[1:], strict=False))
        additive = validate_additivity(mu, depth).valid
        uniform = uniform_check(mu, depth).passed is True
        tensor = tensor_check(mu, depth).passed is False
        case = {"exact_growth": exact, "growing": growing, "additive": additive, "uniform": uniform, "tensor": tensor}
        detail[f"p={p}:{','.join(str(x) for x in r_vec)}:k={k}"] = case
        ok = ok and all(case.values())
    return ok, detail


@check("finite_differences")
def check_finite_differences(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    checked = 0
    failures: list[Detail] = []
    inconclusive = 0
    for fd in plan.fields:
        for _ in range(plan.samples):
            degree = rng.randint(1, plan.poly_degree)
            poly, coeffs = random_divided_poly(rng, fd, degree)
            points = [random_point(rng, fd) for _ in range(plan.delta_points)]
            for m in index_set(Relation.EQ, degree, fd.d):
                expected = coeffs.get(m, PadicScalar.exact_zero(fd))
                for h in plan.delta_h:
                    for z in points:
                        checked += 1
                        if recover_leading(poly, m, h, z) != expected:
                            failures.append({"field": fd.label(), "m": list(m), "h": h})
            try:
                report = inequality_probe(poly, range(1, plan.probe_h + 1), depth=1)
            except DepthInsufficientError:
                inconclusive += 1
                continue
            flagged = sorted({name for name, _ in report.violations})
            if flagged:
                failures.append({"field": fd.label(), "probe": flagged})
    return not failures, {"checked": checked, "inconclusive": inconclusive, "failures": failures[:10]}


@check("subspace")
def check_subspace(plan: SelftestPlan, rng: random.Random) -> tuple[bool, Detail]:
    checked = 0
    failures: list[Detail] = []
    for fd in plan.fields:
        for _ in range(plan.samples):
            r = rng.choice(plan.r_values)
            bp = BoundaryProfile(caps=tuple(rng.choice([None, 0, 1]) for _ in range(fd.d)))
            caps = bp.y_prime_caps(r)
            c = random_coeffs(rng, fd, r, plan.max_level)
            for family in (c, c.restricted(caps)):
                expected = all(i.within(caps) for _, i in family.entries)
                checked += 1
                if subspace_member(synthesize(family), r, bp) != expected:
                    failures.append({"field": fd.label(), "r": str(r), "caps": list(bp.caps)})
    return not failures, {"checked": checked, "failures": failures[:10]}


class ConstantLock(BaseModel):
    """Empirical constants recorded by one run, keyed by check and then by configuration.

    A lock only applies to the scope and seed that produced it; a later run
    fails any locked check whose constants moved.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scope: SelftestScope
    seed: int
    constants: dict[str, dict[str, str | None]] = Field(default_factory=dict)

    @classmethod
    def of(cls, report: SelftestReport) -> ConstantLock:
        recorded = {r.name: dict(r.detail["constants"]) for r in report.results if "constants" in r.detail}
        return cls(scope=report.scope, seed=report.seed, constants=recorded)

    @classmethod
    def load(cls, path: Path) -> ConstantLock:
        return cls.model_validate_json(path.read_text())

    def dump(self, path: Path) -> None:
        path.write_text(self.model_dump_json(indent=2) + "\n")

    def drift(self, name: str, detail: Detail) -> Detail:
        """Locked configurations of ``name`` whose recorded constant differs."""
        locked = self.constants.get(name, {})
        recorded = detail.get("constants", {})
        return {
            key: {"locked": value, "recorded": recorded.get(key)}
            for key, value in locked.items()
            if key not in recorded or recorded[key] != value
        }


def run_selftest(
    scope: SelftestScope, seed: int = 0, only: Iterable[str] | None = None, lock: ConstantLock | None = None
) -> SelftestReport:
    """Run the registered checks in registration order, comparing constants against ``lock`` if given."""
    plan = PLANS[scope]
    names = list(CHECKS) if only is None else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise InvalidParametersError(f"unknown checks {unknown}; known: {list(CHECKS)}")
    if lock is not None and (lock.scope, lock.seed) != (scope, seed):
        raise InvalidParametersError(
            f"lock was recorded for scope {lock.scope.value} seed {lock.seed}, not scope {scope.value} seed {seed}"
        )
    report = SelftestReport(scope, seed)
    for offset, name in enumerate(names):
        start = time.perf_counter()
        try:
            passed, detail = CHECKS[name](plan, make_rng(seed + offset))
        except PadicWaveError as exc:
            passed, detail = False, {"error": type(exc).__name__, "message": str(exc)}
        if lock is not None and (drift := lock.drift(name, detail)):
            logger.warning("selftest.constants.drifted", check=name, configurations=sorted(drift))
            passed, detail = False, detail | {"drift": drift}
        elapsed = time.perf_counter() - start
        logger.info("selftest.check.completed", check=name, passed=passed, seconds=round(elapsed, 3))
        report.results.append(CheckResult(name, passed, detail, elapsed))
    return report
