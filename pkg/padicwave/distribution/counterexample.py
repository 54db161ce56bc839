"""A distribution on O_F ≅ Z_p^d that is tempered of order r but not of the
coordinate-wise orders (r_1, ..., r_d).

The field is the unramified extension of degree d, whose ring of integers
has coordinates Z_p^d on the power basis 1, x, ..., x^{d-1}. Raw moments
R(b, n, j) = μ(1_{b + p^n Z_p^d}(z) Π_i z_i^{j_i}) are exact rationals:

    R(·, 0, j) = 1,
    R(c + t p^{n-1}, n, j) = p^{⌊n(|j| - r)⌋}                      if t = 0,
                             R(c, n - 1, j) - p^{⌊n(|j| - r)⌋}     if t = α,
                             0                                     otherwise,

and every child of a coset with zero moment has zero moment. Children of
one coset sum to their parent, so the moments are additive.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.ring import field_context, vp_int
from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation
from padicwave.core.exceptions import InvalidParametersError
from padicwave.core.types import Rational
from padicwave.distribution.criterion import AvvReport, EnvelopeTracker, MomentWitness
from padicwave.distribution.oracle import CachedOracle
from padicwave.fields.cosets import CosetRep, coset_of
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.fields.embeddings import embedded_images
from padicwave.locpoly.profile import BoundaryProfile
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import MultiIndex, index_set, mi_binom

logger: BoundLogger = get_logger(__name__)

type Coordinates = tuple[int, ...]


def vp_fraction(x: Fraction, p: int) -> int | None:
    if x == 0:
        return None
    num = vp_int(x.numerator, p)
    den = vp_int(x.denominator, p)
    return (num or 0) - (den or 0)


class LatticeOracle(CachedOracle):
    """The separating distribution, with raw coordinate moments and their embedding form.

    ``k`` is the 0-based coordinate whose order r_k is strictly between 0
    and r = Σ r_i. ``alpha`` is the level-1 branching digit vector; it must
    have a nonzero coordinate other than k.
    """

    def __init__(
        self,
        p: int,
        r_vec: tuple[Rational, ...] | list[Rational],
        k: int,
        alpha: Coordinates | None = None,
        degree: int = 0,
    ) -> None:
        rs = tuple(Fraction(x) for x in r_vec)
        d = len(rs)
        if d < 2:
            raise InvalidParametersError(f"need at least two coordinates, got {d}")
        if any(x < 0 for x in rs):
            raise InvalidParametersError(f"coordinate orders must be non-negative, got {[str(x) for x in rs]}")
        if not 0 <= k < d:
            raise InvalidParametersError(f"coordinate index {k} outside [0, {d})")
        r = sum(rs, Fraction(0))
        if r <= 0:
            raise InvalidParametersError(f"total order must be positive, got {r}")
        if not 0 < rs[k] < r:
            raise InvalidParametersError(f"need 0 < r_k < r, got r_k = {rs[k]} and r = {r}")
        if alpha is None:
            other = next(i for i in range(d) if i != k)
            alpha = tuple(1 if i == other else 0 for i in range(d))
        if len(alpha) != d or any(not 0 <= t < p for t in alpha):
            raise InvalidParametersError(f"alpha {alpha} is not a digit vector in [0, {p})^{d}")
        if all(t == 0 for i, t in enumerate(alpha) if i != k):
            raise InvalidParametersError(f"alpha {alpha} lies in X_1")
        fd = FieldDescriptor(p=p, f=d, e=1)
        super().__init__(fd, degree, BoundaryProfile.full(d))
        self.p = p
        self.d = d
        self.r_vec = rs
        self.r = r
        self.k = k
        self.alpha: Coordinates = tuple(alpha)
        self.inexact = False
        self._poly_cache: dict[MultiIndex, dict[Coordinates, PadicScalar]] = {}
        self._support_cache: dict[int, list[Coordinates]] = {}
        self._cache_lock = threading.Lock()

    # raw coordinate moments

    def step_value(self, n: int, j_total: int) -> Fraction:
        """p^{⌊n(|j| - r)⌋}; non-integral exponents are floored and flagged."""
        exponent = n * (j_total - self.r)
        if exponent.denominator != 1:
            self.inexact = True
        return Fraction(self.p) ** math.floor(exponent)

    def digit_path(self, b: Coordinates, n: int) -> list[Coordinates]:
        """The level digit vectors t_0, ..., t_{n-1} of a coordinate tuple mod p^n."""
        return [tuple((x // self.p**m) % self.p for x in b) for m in range(n)]

    def raw(self, b: Coordinates, n: int, j: Coordinates) -> Fraction:
        if len(b) != self.d or len(j) != self.d:
            raise InvalidParametersError(f"expected {self.d} coordinates")
        zero = (0,) * self.d
        value = Fraction(1)
        j_total = sum(j)
        for m, t in enumerate(self.digit_path(b, n), start=1):
            if value == 0:
                return value
            if t == zero:
                value = self.step_value(m, j_total)
            elif t == self.alpha:
                value = value - self.step_value(m, j_total)
            else:
                return Fraction(0)
        return value

    def support_coordinates(self, n: int) -> list[Coordinates]:
        """Coordinate tuples mod p^n reachable through digit vectors 0 and α."""
        with self._cache_lock:
            cached = self._support_cache.get(n)
        if cached is not None:
            return cached
        if n == 0:
            found: list[Coordinates] = [(0,) * self.d]
        else:
            step = self.p ** (n - 1)
            found = sorted(
                b
                for c in self.support_coordinates(n - 1)
                for b in (c, tuple(x + a * step for x, a in zip(c, self.alpha, strict=True)))
            )
        with self._cache_lock:
            return self._support_cache.setdefault(n, found)

    def coordinate_moment(self, corner: Coordinates, levels: Coordinates, j: Coordinates) -> Fraction:
        """μ(1_{corner + Π p^{n_i} Z_p}(z) Π ((z_i - corner_i) / p^{n_i})^{j_i}) over a product box."""
        top = max(levels, default=0)
        members = [
            b
            for b in self.support_coordinates(top)
            if all((x - c) % self.p**n == 0 for x, c, n in zip(b, corner, levels, strict=True))
        ]
        total = Fraction(0)
        for u in MultiIndex(j).below():
            weight = mi_binom(j, u) * math.prod((-c) ** (a - b) for c, a, b in zip(corner, j, u, strict=True))
            if weight == 0:
                continue
            total += weight * sum((self.raw(b, top, tuple(u)) for b in members), Fraction(0))
        return total / Fraction(self.p) ** sum(n * a for n, a in zip(levels, j, strict=True))

    # embedding moments

    def coordinates(self, x: PadicScalar) -> Coordinates:
        """Z_p coordinates of an integral scalar on the power basis, mod p^precision."""
        modulus = self.p**self.field.precision
        if x.unit is None or x.valuation is None:
            return (0,) * self.d
        if x.valuation < 0:
            raise InvalidParametersError(f"{x} is not integral")
        scale = self.p**x.valuation
        return tuple((c * scale) % modulus for c in x.unit[0])

    def coset_of_coordinates(self, b: Coordinates, n: int) -> CosetRep:
        ctx = field_context(self.field)
        point = PadicScalar.from_block(self.field, 0, ctx.block_from_zq(tuple(b)), ctx.precision)
        return coset_of(point, n)

    def _coordinate_polynomial(self, i: MultiIndex) -> dict[Coordinates, PadicScalar]:
        """Π_j σ_j(Σ_k w_k x^k)^{i_j} as a polynomial in the coordinates w."""
        with self._cache_lock:
            cached = self._poly_cache.get(i)
        if cached is not None:
            return cached
        fd = self.field
        generator = PadicScalar.from_block(
            fd, 0, field_context(fd).block_from_zq(tuple(1 if m == 1 else 0 for m in range(self.d))), fd.precision
        )
        images = embedded_images(generator)
        zero = (0,) * self.d
        poly: dict[Coordinates, PadicScalar] = {zero: PadicScalar.one(fd)}
        for j, power in enumerate(i):
            linear = {tuple(1 if m == kk else 0 for m in range(self.d)): images[j] ** kk for kk in range(self.d)}
            for _ in range(power):
                product: dict[Coordinates, PadicScalar] = {}
                for u, c in poly.items():
                    for v, w in linear.items():
                        key = tuple(a + b for a, b in zip(u, v, strict=True))
                        term = c * w
                        product[key] = term if key not in product else product[key] + term
                poly = product
        with self._cache_lock:
            return self._poly_cache.setdefault(i, poly)

    def _compute(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        fd = self.field
        centre = self.coordinates(a.point(fd))
        corner = tuple(c % self.p**n for c in centre)
        shift = [PadicScalar.from_int(fd, c - b) for c, b in zip(centre, corner, strict=True)]
        total = PadicScalar.exact_zero(fd)
        for l, coeff in self._coordinate_polynomial(i).items():
            # ((z - centre)/p^n)^l expanded around the integer corner of the box
            inner = PadicScalar.exact_zero(fd)
            for u in MultiIndex(l).below():
                raw = self.coordinate_moment(corner, (n,) * self.d, tuple(u))
                if raw == 0:
                    continue
                gap = PadicScalar.one(fd)
                for s, x, y in zip(shift, l, u, strict=True):
                    if x > y:
                        gap = gap * (-s / PadicScalar.from_int(fd, self.p) ** n) ** (x - y)
                inner = inner + gap * PadicScalar.from_fraction(fd, raw) * mi_binom(l, u)
            total = total + coeff * inner
        return total

    def support(self, n: int) -> list[CosetRep] | None:
        return sorted({self.coset_of_coordinates(b, n) for b in self.support_coordinates(n)})


def counterexample_build(
    p: int,
    r_vec: tuple[Rational, ...] | list[Rational],
    k: int,
    alpha: Coordinates | None = None,
    degree: int = 0,
) -> LatticeOracle:
    return LatticeOracle(p, r_vec, k, alpha, degree)


def _box_ratio(mu: LatticeOracle, value: Fraction, levels: Coordinates, r_vec: tuple[Fraction, ...]) -> AbsValue:
    """|value| q^{-Σ n_i r_i} with |p| = p^{-d}."""
    v = vp_fraction(value, mu.p)
    if v is None:
        return AbsValue.zero()
    return AbsValue(mu.d * (v + sum((n * x for n, x in zip(levels, r_vec, strict=True)), Fraction(0))))


def _box_check(mu: LatticeOracle, level_tuples: list[Coordinates], degree: int, depth: int) -> AvvReport:
    tracker = EnvelopeTracker()
    indices = index_set(Relation.LE, degree, mu.d)
    for levels in level_tuples:
        top = max(levels)
        corners = sorted({tuple(x % mu.p**n for x, n in zip(b, levels, strict=True)) for b in mu.support_coordinates(top)})
        for corner in corners:
            for j in indices:
                value = mu.coordinate_moment(corner, levels, tuple(j))
                ratio = _box_ratio(mu, value, levels, mu.r_vec)
                if not ratio.is_zero:
                    tracker.observe(top, MomentWitness(corner, levels, tuple(j), ratio))
    return tracker.report(mu.r, degree, depth)


def uniform_check(mu: LatticeOracle, depth: int, degree: int | None = None) -> AvvReport:
    """Equal levels n in every coordinate, weighted by q^{-nr}."""
    deg = mu.degree if degree is None else degree
    report = _box_check(mu, [(n,) * mu.d for n in range(depth + 1)], deg, depth)
    logger.debug("counterexample.uniform.completed", depth=depth, passed=report.passed)
    return report


def tensor_check(mu: LatticeOracle, depth: int, degree: int | None = None) -> AvvReport:
    """Independent levels n_i <= depth per coordinate, weighted by q^{-Σ n_i r_i}."""
    deg = mu.degree if degree is None else degree
    tuples = list(itertools.product(range(depth + 1), repeat=mu.d))
    report = _box_check(mu, tuples, deg, depth)
    logger.debug("counterexample.tensor.completed", depth=depth, passed=report.passed)
    return report


@dataclass(frozen=True, slots=True)
class GrowthRow:
    n: int
    mass: Fraction
    ratio: AbsValue

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "mass": str(self.mass), "ratio": self.ratio.to_json()}


def growth_table(mu: LatticeOracle, depth: int) -> list[GrowthRow]:
    """|μ(1_{X_n})| q^{-n(r - r_k)} for n = 1..depth, X_n free in coordinate k and p^n Z_p elsewhere."""
    rows: list[GrowthRow] = []
    for n in range(1, depth + 1):
        levels = tuple(0 if i == mu.k else n for i in range(mu.d))
        mass = mu.coordinate_moment((0,) * mu.d, levels, (0,) * mu.d)
        rows.append(GrowthRow(n, mass, _box_ratio(mu, mass, levels, mu.r_vec)))
    return rows
