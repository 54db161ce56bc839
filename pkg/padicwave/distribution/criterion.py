from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.core.exceptions import DegreeTooHighError, InvalidParametersError
from padicwave.core.types import Rational
from padicwave.distribution.oracle import MomentOracle
from padicwave.fields.cosets import CosetRep, residue_system
from padicwave.locpoly.function import LocPolyFun, integer_part
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import MultiIndex, mi_binom, monomial_eval
from padicwave.wavelet.coeffs import WaveletCoeffs

logger: BoundLogger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class MomentWitness:
    """Where a moment ratio was attained: coset digits or coordinates, its level(s), the index."""

    coset: tuple[int, ...]
    levels: tuple[int, ...]
    index: tuple[int, ...]
    ratio: AbsValue

    def to_json(self) -> dict[str, Any]:
        return {
            "coset": list(self.coset),
            "levels": list(self.levels),
            "index": list(self.index),
            "ratio": self.ratio.to_json(),
        }


@dataclass(frozen=True, slots=True)
class AvvReport:
    """Moment growth |moment| q^{-nr} over the checked levels.

    ``envelope[n]`` is the largest ratio among level-n moments. ``passed``
    is None when the run is too shallow for a verdict; otherwise it is
    False exactly when a level beyond depth // 2 sets a new record, and
    ``violation`` names that moment.
    """

    r: Fraction
    degree: int
    depth: int
    envelope: dict[int, AbsValue]
    c_estimate: AbsValue
    witness: MomentWitness | None
    passed: bool | None
    violation: MomentWitness | None = None
    witnesses: dict[int, MomentWitness] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "r": {"num": self.r.numerator, "den": self.r.denominator},
            "degree": self.degree,
            "depth": self.depth,
            "envelope": {str(n): v.to_json() for n, v in sorted(self.envelope.items())},
            "c_estimate": self.c_estimate.to_json(),
            "witness": None if self.witness is None else self.witness.to_json(),
            "passed": self.passed,
            "violation": None if self.violation is None else self.violation.to_json(),
        }


class EnvelopeTracker:
    """Running per-level maxima of moment ratios."""

    def __init__(self) -> None:
        self.envelope: dict[int, AbsValue] = {}
        self.witnesses: dict[int, MomentWitness] = {}

    def observe(self, key: int, witness: MomentWitness) -> None:
        self.envelope.setdefault(key, AbsValue.zero())
        if witness.ratio > self.envelope[key]:
            self.envelope[key] = witness.ratio
            self.witnesses[key] = witness

    def report(self, r: Fraction, degree: int, depth: int) -> AvvReport:
        best = AbsValue.zero()
        witness: MomentWitness | None = None
        for key in sorted(self.envelope):
            if self.envelope[key] > best:
                best = self.envelope[key]
                witness = self.witnesses[key]
        passed: bool | None = None
        violation: MomentWitness | None = None
        if depth > 0:
            half = depth // 2
            record = max((v for n, v in self.envelope.items() if n <= half), default=AbsValue.zero())
            passed = True
            for key in sorted(n for n in self.envelope if n > half):
                if self.envelope[key] > record:
                    passed = False
                    violation = self.witnesses[key]
                    break
        return AvvReport(r, degree, depth, dict(self.envelope), best, witness, passed, violation, dict(self.witnesses))


@dataclass(frozen=True, slots=True)
class AdditivityResult:
    valid: bool
    depth: int
    failure: tuple[CosetRep, int, MultiIndex] | None = None

    def to_json(self) -> dict[str, Any]:
        if self.failure is None:
            return {"valid": self.valid, "depth": self.depth, "failure": None}
        a, n, i = self.failure
        return {"valid": self.valid, "depth": self.depth, "failure": {"a": a.to_json(), "n": n, "i": list(i)}}


@dataclass(frozen=True, slots=True)
class DualNorm:
    """‖μ‖_{r,N}: ``lower`` is attained at ``witness``; ``upper`` is None without a passing envelope."""

    lower: AbsValue
    upper: AbsValue | None
    depth: int
    witness: MomentWitness | None

    def to_json(self) -> dict[str, Any]:
        return {
            "lower": self.lower.to_json(),
            "upper": None if self.upper is None else self.upper.to_json(),
            "depth": self.depth,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _cosets(mu: MomentOracle, n: int) -> list[CosetRep]:
    support = mu.support(n)
    return support if support is not None else residue_system(mu.field, n)


def validate_additivity(mu: MomentOracle, depth: int) -> AdditivityResult:
    """Check moment(a, n, i) = Σ_t Σ_{l<=i} binom(i, l) ϖ^l [t]^{i-l} moment(a_t, n + 1, l) for n < depth.

    a_t = a + [t] ϖ^n runs over the children of a.
    """
    fd = mu.field
    uniformizer = PadicScalar.uniformizer(fd)
    teich = [PadicScalar.teichmuller(fd, t) for t in range(fd.q)]
    indices = mu.indices()
    for n in range(depth):
        for a in _cosets(mu, n):
            children = [a.child(t) for t in range(fd.q)]
            for i in indices:
                parent = mu.moment(a, n, i)
                total = PadicScalar.exact_zero(fd)
                for t, child in enumerate(children):
                    for l in i.below():
                        value = mu.moment(child, n + 1, l)
                        if value.is_zero:
                            continue
                        weight = monomial_eval(uniformizer, l) * monomial_eval(teich[t], i.minus(l))
                        total = total + value * weight * mi_binom(i, l)
                if parent != total:
                    logger.info("distribution.additivity.failed", coset=a, level=n, index=tuple(i))
                    return AdditivityResult(False, depth, (a, n, i))
    return AdditivityResult(True, depth)


def _ratio(value: PadicScalar, f: int, n: int, r: Fraction) -> AbsValue:
    """|value| q^{-nr}."""
    return value.abs().scaled(-f * n * r)


def avv_check(mu: MomentOracle, r: Rational, degree: int, depth: int) -> AvvReport:
    """Growth of |moment(a, n, i)| q^{-nr} over a ∈ A_n, n <= depth, i ∈ Y ∩ I_{<=degree}."""
    rr = Fraction(r)
    if degree < integer_part(rr):
        raise InvalidParametersError(f"degree {degree} is below [r] = {integer_part(rr)}")
    if depth < 0:
        raise InvalidParametersError(f"depth must be non-negative, got {depth}")
    indices = mu.indices(degree)
    tracker = EnvelopeTracker()
    for n in range(depth + 1):
        for a in _cosets(mu, n):
            for i in indices:
                value = mu.moment(a, n, i)
                if value.is_zero:
                    continue
                tracker.observe(n, MomentWitness(a.digits, (n,), tuple(i), _ratio(value, mu.field.f, n, rr)))
    report = tracker.report(rr, degree, depth)
    logger.debug("distribution.avv.completed", r=rr, depth=depth, passed=report.passed)
    return report


def dual_norm(mu: MomentOracle, r: Rational, degree: int, depth: int) -> DualNorm:
    report = avv_check(mu, r, degree, depth)
    upper = report.c_estimate if report.passed else None
    return DualNorm(report.c_estimate, upper, depth, report.witness)


def pair(mu: MomentOracle, f: LocPolyFun) -> PadicScalar:
    """∫ f μ, expanding f on each coset into the moment monomials ((z - a) / ϖ^h)^m."""
    if f.field != mu.field:
        raise InvalidParametersError(f"function over {f.field.label()} for a distribution over {mu.field.label()}")
    if f.degree > mu.degree:
        raise DegreeTooHighError(f"degree {f.degree} exceeds the distribution degree {mu.degree}")
    h = f.level
    step = PadicScalar.uniformizer(f.field) ** h
    total = PadicScalar.exact_zero(f.field)
    for a in f.support():
        for m, c in f.table[a].items():
            total = total + c * monomial_eval(step, m) * mu.moment(a, h, m)
    return total


def extend_pair(mu: MomentOracle, c: WaveletCoeffs, r: Rational | None = None) -> PadicScalar:
    """Σ b_{a,i} μ(e_{a,i,r}) with μ(e_{a,i,r}) = ϖ^{[l(a)r]} moment(a, l(a), i).

    ``r`` defaults to the order the coefficients were taken at; any other
    order raises, since ``c`` is only meaningful against the basis of ``c.r``.
    """
    if c.field != mu.field:
        raise InvalidParametersError(f"coefficients over {c.field.label()} for a distribution over {mu.field.label()}")
    rr = c.r if r is None else Fraction(r)
    if rr != c.r:
        raise InvalidParametersError(f"coefficients on the basis of order {c.r} paired at order {rr}")
    uniformizer = PadicScalar.uniformizer(c.field)
    total = PadicScalar.exact_zero(c.field)
    for (a, i), b in c.entries.items():
        scale = uniformizer ** floor(a.level * rr)
        total = total + b * scale * mu.moment(a, a.level, i)
    return total
