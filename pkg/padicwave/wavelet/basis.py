"""The wavelet basis e_{a,i,r} of C^r(O_F, E) and the maps between functions and coefficients.

e_{a,i,r}(z) = ϖ^{[l(a)r]} · 1_{a + ϖ^{l(a)} O_F}(z) · ((z - a) / ϖ^{l(a)})^i

for a canonical representative a and |i| <= [r]. ``analyze`` and
``synthesize`` are mutually inverse on functions of degree at most [r].
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation
from padicwave.core.exceptions import DegreeTooHighError, IndexTooLargeError, InvalidParametersError
from padicwave.core.types import Rational
from padicwave.crnorm.domain import RatioInterval, SupInterval
from padicwave.crnorm.norm import cr_norm, remainder_profile
from padicwave.fields.cosets import CosetRep, descendants, residue_system
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.function import CoeffTable, LocPolyFun, integer_part, recentre
from padicwave.locpoly.profile import BoundaryProfile
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import MultiIndex, index_set, monomial_eval
from padicwave.wavelet.coeffs import WaveletCoeffs

logger: BoundLogger = get_logger(__name__)


@lru_cache(maxsize=4096)
def _basis_scale(fd: FieldDescriptor, level: int, i: MultiIndex, r: Fraction) -> PadicScalar:
    """ϖ^{[level·r]} / (ϖ^level)^i, the coefficient of (z - a)^i in e_{a,i,r}."""
    uniformizer = PadicScalar.uniformizer(fd)
    return uniformizer ** floor(level * r) / monomial_eval(uniformizer**level, i)


def basis_fn(fd: FieldDescriptor, a: CosetRep, i: MultiIndex | tuple[int, ...], r: Rational) -> LocPolyFun:
    """e_{a,i,r} as a function of level l(a) supported on one coset."""
    rr = Fraction(r)
    idx = MultiIndex(i)
    if idx.total > integer_part(rr):
        raise IndexTooLargeError(f"|{tuple(idx)}| = {idx.total} exceeds [r] = {integer_part(rr)}")
    rep = a.canonical()
    return LocPolyFun.build(fd, rep.level, {rep: {idx: _basis_scale(fd, rep.level, idx, rr)}})


def _local_table(
    fd: FieldDescriptor, a: CosetRep, r: Fraction, coeffs: Mapping[MultiIndex, PadicScalar]
) -> CoeffTable:
    """Σ_i b_i e_{a,i,r} written around a on a + ϖ^{l(a)} O_F."""
    return {i: b * _basis_scale(fd, a.level, i, r) for i, b in coeffs.items()}


def _grouped(c: WaveletCoeffs) -> dict[CosetRep, dict[MultiIndex, PadicScalar]]:
    groups: dict[CosetRep, dict[MultiIndex, PadicScalar]] = {}
    for (a, i), b in c.entries.items():
        groups.setdefault(a, {})[i] = b
    return groups


def synthesize(c: WaveletCoeffs, level: int | None = None) -> LocPolyFun:
    """θ(c) = Σ b_{a,i} e_{a,i,r}, written at ``level`` (the deepest l(a) by default)."""
    fd = c.field
    h = c.max_level if level is None else level
    if h < c.max_level:
        raise InvalidParametersError(f"level {h} is coarser than the deepest coset level {c.max_level}")
    table: dict[CosetRep, CoeffTable] = {}
    for a, coeffs in _grouped(c).items():
        local = _local_table(fd, a, c.r, coeffs)
        origin = a.point(fd)
        for child in descendants(fd, a, h):
            shifted = recentre(local, child.point(fd) - origin)
            if not shifted:
                continue
            into = table.setdefault(child, {})
            for m, value in shifted.items():
                prev = into.get(m)
                into[m] = value if prev is None else prev + value
    return LocPolyFun.build(fd, h, table)


def _ancestors(a: CosetRep) -> list[CosetRep]:
    """Canonical representatives of strictly coarser level whose coset contains a."""
    found = [CosetRep(())]
    for level in range(1, a.level):
        if a.digits[level - 1]:
            found.append(CosetRep(a.digits[:level]))
    return found


def analyze(f: LocPolyFun, r: Rational) -> WaveletCoeffs:
    """φ(f): the unique finite family with synthesize(analyze(f, r)) == f.

    Cosets of level h are visited in increasing l(a). On each the function
    minus the contributions of the coarser representatives is a single
    polynomial whose coefficients give b_{a,i} after rescaling.

    Raises
    ------
    DegreeTooHighError
        If the total degree of ``f`` exceeds [r].
    """
    rr = Fraction(r)
    big_r = integer_part(rr)
    if f.degree > big_r:
        raise DegreeTooHighError(f"degree {f.degree} exceeds [r] = {big_r}; the basis spans degree <= [r] only")
    fd = f.field
    h = f.level
    uniformizer = PadicScalar.uniformizer(fd)
    local: dict[CosetRep, CoeffTable] = {}
    entries: dict[tuple[CosetRep, MultiIndex], PadicScalar] = {}
    for coset in sorted(residue_system(fd, h), key=lambda x: (x.canonical().level, x.digits)):
        rep = coset.canonical()
        point = rep.point(fd)
        residual: CoeffTable = dict(f.table.get(coset, {}))
        for parent in _ancestors(rep):
            table = local.get(parent)
            if not table:
                continue
            for m, value in recentre(table, point - parent.point(fd)).items():
                prev = residual.get(m)
                residual[m] = -value if prev is None else prev - value
        residual = {m: v for m, v in residual.items() if not v.is_zero}
        if not residual:
            continue
        local[rep] = residual
        scale = uniformizer ** -floor(rep.level * rr)
        for i, d in residual.items():
            entries[(rep, i)] = d * monomial_eval(uniformizer**rep.level, i) * scale
    result = WaveletCoeffs.build(fd, rr, entries)
    logger.debug("wavelet.analyzed", field=fd.label(), r=rr, level=h, terms=len(result.entries))
    return result


def approximant(f: LocPolyFun, r: Rational, h: int) -> LocPolyFun:
    """f_h = Σ_{a ∈ A_h} 1_{a + ϖ^h O_F}(z) Σ_{|i| <= [r]} (D_i f(a) / i!) (z - a)^i."""
    if h < 0:
        raise InvalidParametersError(f"h must be non-negative, got {h}")
    fd = f.field
    indices = index_set(Relation.LE, integer_part(r), f.dim)
    table: dict[CosetRep, CoeffTable] = {}
    for a in residue_system(fd, h):
        point = a.point(fd)
        coeffs = {i: f.derived(i).evaluate(point) for i in indices}
        table[a] = {i: v for i, v in coeffs.items() if not v.is_zero}
    return LocPolyFun.build(fd, h, table, f.caps)


def subfamily_indices(r: Rational, bp: BoundaryProfile) -> list[MultiIndex]:
    """Y' ∩ I_{<=[r]}, the indices of the basis of the closed subspace.

    Directions in J' but not in J have d_σ >= [r], so this is also Y ∩ I_{<=[r]}.
    """
    if Fraction(r) < 0:
        raise InvalidParametersError(f"r must be non-negative, got {r}")
    return index_set(Relation.LE, integer_part(r), bp.dim, caps=bp.y_prime_caps(r))


def coefficient_ratio(f: LocPolyFun, r: Rational, depth: int | None = None) -> RatioInterval:
    """Enclosure of sup |b_{a,i,r}(f)| / ‖f‖_{C^r}."""
    coeffs = analyze(f, r)
    return RatioInterval.exact(coeffs.sup_abs(), cr_norm(f, r, depth).value)


@dataclass(frozen=True, slots=True)
class ApproximationStep:
    """One level of the approximation f_h → f."""

    h: int
    distance: SupInterval
    increment: AbsValue
    envelope: SupInterval

    def to_json(self) -> dict[str, Any]:
        return {
            "h": self.h,
            "distance": self.distance.to_json(),
            "increment": self.increment.to_json(),
            "envelope": self.envelope.to_json(),
        }


def approximation_series(
    f: LocPolyFun, r: Rational, h_values: Iterable[int], depth: int | None = None
) -> list[ApproximationStep]:
    """Per h: ‖f - f_h‖_{C^r}, ‖f_{h+1} - f_h‖_{F_{h+1}} and C_{f,r}(h) q^{-rh}."""
    rr = Fraction(r)
    levels = sorted(set(h_values))
    if not levels:
        return []
    profile = remainder_profile(f, rr, levels[-1], depth)
    steps: list[ApproximationStep] = []
    for h in levels:
        f_h = approximant(f, rr, h)
        f_next = approximant(f, rr, h + 1)
        distance = cr_norm(f - f_h, rr, depth).value
        increment = (f_next - f_h).refine_to(h + 1).fh_norm()
        envelope = profile[h].scaled(-f.field.f * rr * h)
        steps.append(ApproximationStep(h, distance, increment, envelope))
    return steps
