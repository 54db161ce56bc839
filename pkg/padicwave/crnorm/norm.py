from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable
from fractions import Fraction

from padicwave.arith.scalar import PadicScalar
from padicwave.config import get_settings
from padicwave.core.enums import Relation
from padicwave.core.exceptions import DepthInsufficientError, InvalidParametersError
from padicwave.core.types import Rational
from padicwave.crnorm.domain import CrNormReport, RatioInterval, SupInterval, interval_max
from padicwave.crnorm.engine import BranchAndBound, Cell, FlatIndex, FlatTable, recentre_variable
from padicwave.crnorm.sup import sup_abs
from padicwave.fields.cosets import CosetRep, residue_system
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.fields.embeddings import embedded_images
from padicwave.locpoly.function import LocPolyFun, integer_part
from padicwave.locpoly.profile import BoundaryProfile
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import MultiIndex, index_set, mi_binom, monomial_from_images

logger: BoundLogger = get_logger(__name__)

type Gain = Callable[[int], Fraction]


def _trinomial_terms(j: MultiIndex) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], int]]:
    """Terms (a, b, c, coefficient) of Π_σ (δ_σ + W_σ - U_σ)^{j_σ}, with a + b + c = j."""
    per_sigma: list[list[tuple[int, int, int, int]]] = []
    for n in j:
        options: list[tuple[int, int, int, int]] = []
        for b in range(n + 1):
            for c in range(n - b + 1):
                a = n - b - c
                coef = math.factorial(n) // (math.factorial(a) * math.factorial(b) * math.factorial(c))
                options.append((a, b, c, -coef if c % 2 else coef))
        per_sigma.append(options)
    terms: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], int]] = []
    for combo in itertools.product(*per_sigma):
        terms.append(
            (
                tuple(o[0] for o in combo),
                tuple(o[1] for o in combo),
                tuple(o[2] for o in combo),
                math.prod(o[3] for o in combo),
            )
        )
    return terms


def _accumulate(out: FlatTable, key: FlatIndex, value: PadicScalar) -> None:
    prev = out.get(key)
    out[key] = value if prev is None else prev + value


def _pair_polynomial(f: LocPolyFun, alpha: CosetRep, gamma: CosetRep, big_r: int) -> FlatTable:
    """ε(x, y) on x ∈ α + ϖ^h O, x + y ∈ γ + ϖ^h O as a polynomial in (u, w) = (x - α, x + y - γ)."""
    fd = f.field
    d = fd.d
    zero = (0,) * d
    out: FlatTable = {}
    for m, c in f.table.get(gamma, {}).items():
        _accumulate(out, zero + tuple(m), c)
    images = embedded_images(gamma.point(fd) - alpha.point(fd))
    powers: dict[tuple[int, ...], PadicScalar] = {}
    for j in index_set(Relation.LE, big_r, d):
        taylor = f.derived(j).table.get(alpha)
        if not taylor:
            continue
        for a, b, c, coef in _trinomial_terms(j):
            mono = powers.get(a)
            if mono is None:
                mono = monomial_from_images(images, a)
                powers[a] = mono
            if mono.is_zero:
                continue
            base = mono * coef
            for l, t in taylor.items():
                key = tuple(x + y for x, y in zip(l, c, strict=True)) + b
                _accumulate(out, key, -(t * base))
    return {k: v for k, v in out.items() if not v.is_zero}


def _annulus_polynomial(f: LocPolyFun, alpha: CosetRep, big_r: int) -> FlatTable:
    """ε(x, y) for x, x + y in the same coset: Σ_m c_m Σ_{l <= m, |l| > [r]} binom(m, l) u^{m-l} y^l."""
    out: FlatTable = {}
    for m, c in f.table.get(alpha, {}).items():
        for l in m.below():
            if l.total <= big_r:
                continue
            _accumulate(out, tuple(m.minus(l)) + tuple(l), c * mi_binom(m, l))
    return {k: v for k, v in out.items() if not v.is_zero}


def _first_difference(a: CosetRep, b: CosetRep) -> int:
    for m, (x, y) in enumerate(zip(a.digits, b.digits, strict=True)):
        if x != y:
            return m
    return a.level


def _tail_exponent(f: LocPolyFun, big_r: int, gain: Gain, k: int) -> Fraction | None:
    """Bound on sup |ε| weighted by gain(k) over all y with val(y) >= k."""
    best: Fraction | None = None
    for i in index_set(Relation.GT, big_r, f.dim, bound=f.degree):
        exp = f.derived(i).fh_norm().exponent
        if exp is None:
            continue
        candidate = exp + f.field.f * k * i.total - gain(k)
        if best is None or candidate < best:
            best = candidate
    return best


def _remainder_sup(f: LocPolyFun, r: Fraction, depth: int, min_k: int, gain: Gain) -> SupInterval:
    """Certified sup of |ε_{f,[r]}(x, y)| · p^{gain(val y)} over x ∈ O_F and val(y) >= min_k."""
    settings = get_settings()
    fd = f.field
    h = f.level
    big_r = integer_part(r)
    engine = BranchAndBound(fd)
    zero = PadicScalar.exact_zero(fd)
    pair_limit = max(depth, h)
    support = f.support()
    in_support = set(support)

    if min_k < h:
        for alpha, gamma in _pairs(fd, h, support, in_support):
            k = _first_difference(alpha, gamma)
            if k < min_k:
                continue
            coeffs = _pair_polynomial(f, alpha, gamma, big_r)
            if coeffs:
                engine.push(
                    Cell((zero, zero), (h, h), (pair_limit, pair_limit), coeffs, gain(k), ("pair", alpha, gamma))
                )

    annulus = {alpha: _annulus_polynomial(f, alpha, big_r) for alpha in support}
    annulus = {alpha: coeffs for alpha, coeffs in annulus.items() if coeffs}
    shifts = [PadicScalar.teichmuller(fd, t) for t in range(fd.q)]

    def push_annulus(k: int) -> None:
        uniformizer_power = PadicScalar.uniformizer(fd) ** k
        limits = (pair_limit, max(depth, k + 1))
        for alpha, coeffs in annulus.items():
            for t in range(1, fd.q):
                centre = shifts[t] * uniformizer_power
                cell_coeffs = recentre_variable(coeffs, 1, fd.d, centre)
                engine.push(Cell((zero, centre), (h, k + 1), limits, cell_coeffs, gain(k), ("annulus", alpha)))

    start = max(h, min_k)
    cutoff = start + big_r + settings.annulus_slack
    if annulus:
        for k in range(start, cutoff + 1):
            push_annulus(k)
    engine.run()

    extensions = 0
    while annulus:
        tail = _tail_exponent(f, big_r, gain, cutoff + 1)
        if tail is None or (engine.lower is not None and tail >= engine.lower):
            break
        if extensions >= settings.max_annulus_extension:
            engine.fold(tail)
            logger.warning("crnorm.tail.folded", cutoff=cutoff, tail=tail)
            break
        cutoff += 1
        extensions += 1
        push_annulus(cutoff)
        engine.run()

    def witness(cell: Cell) -> tuple[PadicScalar, ...]:
        kind, alpha = cell.tag[0], cell.tag[1]  # type: ignore[index]
        x = alpha.point(fd) + cell.centres[0]
        if kind == "pair":
            gamma = cell.tag[2]  # type: ignore[index]
            return (x, gamma.point(fd) + cell.centres[1] - x)
        return (x, cell.centres[1])

    return engine.interval(witness)


def _pairs(
    fd: FieldDescriptor, h: int, support: list[CosetRep], in_support: set[CosetRep]
) -> Iterable[tuple[CosetRep, CosetRep]]:
    """Ordered level-h coset pairs (α, γ), α != γ, on which ε does not vanish identically."""
    everything = residue_system(fd, h)
    for alpha in support:
        for gamma in everything:
            if gamma != alpha:
                yield alpha, gamma
    for gamma in support:
        for alpha in everything:
            if alpha != gamma and alpha not in in_support:
                yield alpha, gamma


def cr_norm(
    f: LocPolyFun,
    r: Rational,
    depth: int | None = None,
    require_tight: bool = False,
    profile_range: Iterable[int] | None = None,
) -> CrNormReport:
    """Certified ‖f‖_{C^r} as the larger of the Taylor part and the remainder part.

    Raises
    ------
    DepthInsufficientError
        If ``require_tight`` and the enclosure is not tight at ``depth``.
    """
    rr = Fraction(r)
    if rr < 0:
        raise InvalidParametersError(f"r must be non-negative, got {rr}")
    depth = get_settings().default_depth if depth is None else depth
    big_r = integer_part(rr)
    fq = f.field.f

    taylor = interval_max(*(sup_abs(f.derived(i), depth=depth) for i in index_set(Relation.LE, big_r, f.dim)))
    remainder = _remainder_sup(f, rr, depth, 0, lambda k: fq * k * rr)
    profile: dict[int, SupInterval] = {}
    if profile_range is not None:
        wanted = sorted(set(profile_range))
        if wanted:
            full = remainder_profile(f, rr, wanted[-1], depth)
            profile = {h: full[h] for h in wanted}
    report = CrNormReport(rr, depth, taylor, remainder, profile)
    logger.debug(
        "crnorm.completed",
        field=f.field.label(),
        r=rr,
        depth=depth,
        lower=report.value.lower,
        upper=report.value.upper,
    )
    if require_tight and not report.tight:
        raise DepthInsufficientError(
            f"C^{rr} norm enclosure [{report.value.lower}, {report.value.upper}] not tight at depth {depth}"
        )
    return report


def remainder_profile(f: LocPolyFun, r: Rational, h_max: int, depth: int | None = None) -> dict[int, SupInterval]:
    """C_{f,r}(h) = sup_{x, y ∈ ϖ^h O_F} |ε_{f,[r]}(x, y)| q^{rh} for h = 0..h_max."""
    if h_max < 0:
        raise InvalidParametersError(f"h_max must be non-negative, got {h_max}")
    rr = Fraction(r)
    depth = get_settings().default_depth if depth is None else depth
    fq = f.field.f
    return {
        h: _remainder_sup(f, rr, depth, h, lambda _k, h=h: fq * rr * h)
        for h in range(h_max + 1)
    }


def norm_downgrade(report: CrNormReport, f: LocPolyFun, l: Rational) -> CrNormReport:  # noqa: E741
    """The C^l report for l <= r, recomputed at the same depth."""
    ll = Fraction(l)
    if ll == report.r:
        return report
    if ll > report.r:
        raise InvalidParametersError(f"cannot downgrade C^{report.r} to C^{ll}")
    return cr_norm(f, ll, report.depth)


def subspace_member(f: LocPolyFun, r: Rational, bp: BoundaryProfile) -> bool:
    """True when ∂^{d_σ+1} f / ∂z_σ^{d_σ+1} vanishes for every σ outside J'."""
    if bp.dim != f.dim:
        raise InvalidParametersError(f"profile of dimension {bp.dim} for a function of dimension {f.dim}")
    j_prime = bp.enlarged(r)
    for s, cap in enumerate(bp.caps):
        if s in j_prime or cap is None:
            continue
        if not f.derived(MultiIndex.unit(f.dim, s, cap + 1)).is_zero:
            return False
    return True


def derivative_constant(f: LocPolyFun, i: MultiIndex, r: Rational, depth: int | None = None) -> RatioInterval:
    """Enclosure of ‖i! D_i f‖_{C^{r-|i|}} / ‖f‖_{C^r}."""
    rr = Fraction(r)
    if i.total > rr:
        raise InvalidParametersError(f"|i| = {i.total} exceeds r = {rr}")
    lhs = cr_norm(f.derived(i).scale(i.factorial), rr - i.total, depth)
    rhs = cr_norm(f, rr, depth)
    return RatioInterval.of(lhs.value, rhs.value)
