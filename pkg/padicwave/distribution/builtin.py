from __future__ import annotations

import threading
from collections.abc import Iterable

from padicwave.arith.scalar import PadicScalar
from padicwave.config import get_settings
from padicwave.core.exceptions import InvalidParametersError, PrecisionExhaustedError
from padicwave.distribution.oracle import CachedOracle, MomentOracle
from padicwave.fields.cosets import CosetRep, coset_of
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.fields.embeddings import embedded_images
from padicwave.locpoly.profile import BoundaryProfile
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import MultiIndex, mi_binom, monomial_eval, monomial_from_images

logger: BoundLogger = get_logger(__name__)


class DiracOracle(MomentOracle):
    """δ_x for an integral point x."""

    def __init__(
        self,
        field: FieldDescriptor,
        degree: int,
        point: PadicScalar | None = None,
        profile: BoundaryProfile | None = None,
    ) -> None:
        super().__init__(field, degree, profile)
        self.point = point if point is not None else PadicScalar.exact_zero(field)
        if self.point.field != field:
            raise InvalidParametersError(f"point over {self.point.field.label()} for {field.label()}")
        if self.point.valuation is not None and self.point.valuation < 0:
            raise InvalidParametersError(f"point {self.point} is not integral")

    def _moment(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        if coset_of(self.point, n) != a:
            return PadicScalar.exact_zero(self.field)
        offset = (self.point - a.point(self.field)) / PadicScalar.uniformizer(self.field) ** n
        return monomial_eval(offset, i)

    def support(self, n: int) -> list[CosetRep] | None:
        return [coset_of(self.point, n)]


def integer_digit_rep(x: PadicScalar, n: int) -> PadicScalar:
    """The representative Σ_{k<n} d_k ϖ^k of x mod ϖ^n with integer-digit lifts d_k."""
    field = x.field
    rep = PadicScalar.exact_zero(field)
    rest = x
    for k in range(n):
        t = rest.residue()
        if t:
            lift = PadicScalar.residue_lift(field, t)
            rep = rep + lift.shift(k)
            rest = rest - lift
        rest = rest.shift(-1)
    return rep


class HaarOracle(CachedOracle):
    """The Riemann-sum functional μ(g) = lim_m q^{-m} Σ_{b mod ϖ^m} g(b).

    Representatives mod ϖ^m are Σ_{k<m} d_k ϖ^k with d_k the integer-digit
    lifts of the residues. The limits I_i = ∫_{O_F} z^i are computed once
    from power sums S_i(m) = Σ_b b^i via

        S_i(m) = Σ_{l <= i} binom(i, l) S_l(m - 1) (ϖ^{m-1})^{i-l} τ_{i-l},

    τ_j = Σ_d d^j, until two successive differences agree to ``digits``
    uniformizer digits.
    """

    def __init__(
        self,
        field: FieldDescriptor,
        degree: int,
        profile: BoundaryProfile | None = None,
        digits: int | None = None,
        max_level: int | None = None,
    ) -> None:
        super().__init__(field, degree, profile)
        settings = get_settings()
        self.digits = settings.haar_digits if digits is None else digits
        self.max_level = settings.haar_max_level if max_level is None else max_level
        self._limits: dict[MultiIndex, PadicScalar] | None = None
        self._limits_lock = threading.Lock()

    def _power_sums(self) -> dict[MultiIndex, PadicScalar]:
        fd = self.field
        lifts = [PadicScalar.residue_lift(fd, t) for t in range(fd.q)]
        indices = self.profile.indices(self.degree)
        tau = {j: _sum(fd, (monomial_eval(d, j) for d in lifts)) for j in indices}
        one = PadicScalar.one(fd)
        zero = PadicScalar.exact_zero(fd)
        sums = {i: one if i.total == 0 else zero for i in indices}
        q = PadicScalar.from_int(fd, fd.q)
        scale = one
        previous: dict[MultiIndex, PadicScalar] = dict(sums)
        last_diff: dict[MultiIndex, PadicScalar | None] = {i: None for i in indices}
        converged: dict[MultiIndex, PadicScalar] = {}
        for m in range(1, self.max_level + 1):
            step_images = embedded_images(PadicScalar.uniformizer(fd) ** (m - 1))
            sums = {
                i: _sum(
                    fd,
                    (
                        sums[l] * monomial_from_images(step_images, i.minus(l)) * tau[i.minus(l)] * mi_binom(i, l)
                        for l in i.below()
                    ),
                )
                for i in indices
            }
            scale = scale / q
            current = {i: s * scale for i, s in sums.items()}
            for i in indices:
                if i in converged:
                    continue
                diff = current[i] - previous[i]
                prior = last_diff[i]
                last_diff[i] = diff
                if m < 2 or prior is None:
                    continue
                lead = current[i].valuation if current[i].valuation is not None else 0
                target = self.digits + min(lead, 0)
                if _at_least(diff, target) and _at_least(prior, target):
                    precision = _valuation_or_none(diff)
                    if precision is None:
                        precision = _valuation_or_none(prior)
                    converged[i] = current[i] if precision is None else current[i].truncate(precision)
            previous = current
            if len(converged) == len(indices):
                logger.debug("haar.moment.converged", field=fd.label(), level=m, degree=self.degree)
                return converged
        missing = [tuple(i) for i in indices if i not in converged]
        raise PrecisionExhaustedError(f"Haar moments {missing} did not stabilize by level {self.max_level}")

    def limits(self) -> dict[MultiIndex, PadicScalar]:
        """∫_{O_F} z^i for every admissible i."""
        with self._limits_lock:
            if self._limits is None:
                self._limits = self._power_sums()
            return self._limits

    def _compute(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        fd = self.field
        point = a.point(fd)
        base = integer_digit_rep(point, n)
        delta = (base - point) / PadicScalar.uniformizer(fd) ** n
        images = embedded_images(delta)
        integrals = self.limits()
        total = _sum(fd, (mi_binom(i, l) * monomial_from_images(images, i.minus(l)) * integrals[l] for l in i.below()))
        return total / PadicScalar.from_int(fd, fd.q) ** n


def _sum(field: FieldDescriptor, terms: Iterable[PadicScalar]) -> PadicScalar:
    total = PadicScalar.exact_zero(field)
    for term in terms:
        total = total + term
    return total


def _valuation_or_none(x: PadicScalar) -> int | None:
    return x.valuation if not x.is_exact_zero else None


def _at_least(x: PadicScalar, target: int) -> bool:
    return x.is_exact_zero or (x.valuation is not None and x.valuation >= target)
