"""Seeded generators for random scalars, functions, coefficient families and polynomials.

Every generator takes a :class:`random.Random` so that callers own the seed;
identical seeds give identical objects.
"""

from __future__ import annotations

import random
from fractions import Fraction

from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation
from padicwave.core.types import Caps, Rational
from padicwave.deltaops.poly import GlobalPoly
from padicwave.fields.cosets import CosetRep, residue_system
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.function import LocPolyFun, integer_part
from padicwave.multiindex.index import MultiIndex, index_set
from padicwave.wavelet.coeffs import WaveletCoeffs


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)  # noqa: S311


def random_scalar(rng: random.Random, fd: FieldDescriptor, digits: int = 4, zero_weight: float = 0.0) -> PadicScalar:
    """An integral scalar Σ [t_m] ϖ^m with ``digits`` random Teichmüller digits."""
    if zero_weight and rng.random() < zero_weight:
        return PadicScalar.exact_zero(fd)
    return PadicScalar.from_expansion(fd, [rng.randrange(fd.q) for _ in range(digits)])


def random_point(rng: random.Random, fd: FieldDescriptor, digits: int = 6) -> PadicScalar:
    return random_scalar(rng, fd, digits)


def random_locpoly(
    rng: random.Random,
    fd: FieldDescriptor,
    level: int,
    degree: int,
    caps: Caps | None = None,
    density: float = 0.6,
    digits: int = 3,
) -> LocPolyFun:
    """A random element of F_level^degree with integral coefficients; each slot is filled with probability ``density``."""
    indices = index_set(Relation.LE, degree, fd.d, caps=caps)
    table: dict[CosetRep, dict[MultiIndex, PadicScalar]] = {}
    for a in residue_system(fd, level):
        coeffs = {m: random_scalar(rng, fd, digits) for m in indices if rng.random() < density}
        if coeffs:
            table[a] = coeffs
    return LocPolyFun.build(fd, level, table, caps=caps)


def random_coeffs(
    rng: random.Random,
    fd: FieldDescriptor,
    r: Rational,
    max_level: int,
    caps: Caps | None = None,
    density: float = 0.4,
    digits: int = 3,
) -> WaveletCoeffs:
    """A random finite family b_{a,i} with l(a) <= ``max_level`` and |i| <= [r]."""
    rr = Fraction(r)
    indices = index_set(Relation.LE, integer_part(rr), fd.d, caps=caps)
    entries: dict[tuple[CosetRep, MultiIndex], PadicScalar] = {}
    for a in residue_system(fd, max_level):
        rep = a.canonical()
        for i in indices:
            if (rep, i) in entries or rng.random() >= density:
                continue
            entries[(rep, i)] = random_scalar(rng, fd, digits)
    return WaveletCoeffs.build(fd, rr, entries, caps=caps)


def random_divided_poly(
    rng: random.Random,
    fd: FieldDescriptor,
    degree: int,
    density: float = 0.5,
    digits: int = 3,
) -> tuple[GlobalPoly, dict[MultiIndex, PadicScalar]]:
    """A random P = Σ a_i z^i / i! of total degree exactly ``degree`` with its a_i."""
    coeffs: dict[MultiIndex, PadicScalar] = {}
    for m in index_set(Relation.LE, degree, fd.d):
        if m.total == degree or rng.random() < density:
            value = random_scalar(rng, fd, digits)
            if m.total == degree and value.is_zero and not any(k.total == degree for k in coeffs):
                value = PadicScalar.one(fd)
            if not value.is_zero:
                coeffs[m] = value
    return GlobalPoly.from_divided_powers(fd, coeffs), coeffs
