from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence

from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation
from padicwave.core.exceptions import IndexOrderViolationError, InvalidParametersError, UnboundedSetError
from padicwave.core.types import Caps
from padicwave.fields.embeddings import embedded_images


class MultiIndex(tuple[int, ...]):
    """A tuple (i_σ)_σ of non-negative integers in the canonical embedding order.

    The tuple operators keep their sequence meaning; componentwise
    arithmetic goes through :meth:`plus` and :meth:`minus`, and the partial
    order through :meth:`leq`.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int]) -> MultiIndex:
        values = tuple(int(v) for v in entries)
        if any(v < 0 for v in values):
            raise InvalidParametersError(f"multi-index entries must be non-negative, got {values}")
        return super().__new__(cls, values)

    @classmethod
    def zero(cls, dim: int) -> MultiIndex:
        return cls((0,) * dim)

    @classmethod
    def unit(cls, dim: int, position: int, scale: int = 1) -> MultiIndex:
        return cls(scale if s == position else 0 for s in range(dim))

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def total(self) -> int:
        return sum(self)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(v) for v in self)

    def leq(self, other: Sequence[int]) -> bool:
        _check_dims(self, other)
        return all(a <= b for a, b in zip(self, other, strict=True))

    def plus(self, other: Sequence[int]) -> MultiIndex:
        _check_dims(self, other)
        return MultiIndex(a + b for a, b in zip(self, other, strict=True))

    def minus(self, other: Sequence[int]) -> MultiIndex:
        _check_dims(self, other)
        if not all(b <= a for a, b in zip(self, other, strict=True)):
            raise IndexOrderViolationError(f"{tuple(other)} is not below {tuple(self)}")
        return MultiIndex(a - b for a, b in zip(self, other, strict=True))

    def within(self, caps: Caps | None) -> bool:
        if caps is None:
            return True
        return all(c is None or v <= c for v, c in zip(self, caps, strict=True))

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Graded-lexicographic key: total degree first, then larger leading entries first."""
        return (self.total, tuple(-v for v in self))

    def below(self) -> Iterator[MultiIndex]:
        """All l with l <= self, in graded-lexicographic order."""
        yield from sorted(_boxes(tuple(self)), key=MultiIndex.sort_key)

    def __repr__(self) -> str:
        return f"MultiIndex({list(self)})"


def _check_dims(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise InvalidParametersError(f"multi-index dimensions differ: {len(a)} vs {len(b)}")


def _boxes(upper: tuple[int, ...]) -> Iterator[MultiIndex]:
    if not upper:
        yield MultiIndex(())
        return
    for head in range(upper[0] + 1):
        for tail in _boxes(upper[1:]):
            yield MultiIndex((head, *tail))


def _compositions(dim: int, max_total: int, caps: Caps) -> Iterator[tuple[int, ...]]:
    if dim == 0:
        yield ()
        return
    cap = caps[0]
    top = max_total if cap is None else min(cap, max_total)
    for head in range(top + 1):
        for tail in _compositions(dim - 1, max_total - head, caps[1:]):
            yield (head, *tail)


def index_set(
    relation: Relation,
    n: int,
    dim: int,
    caps: Caps | None = None,
    bound: int | None = None,
) -> list[MultiIndex]:
    """I_{*n} = {i : |i| * n}, intersected with the per-σ caps, in graded-lexicographic order.

    Parameters
    ----------
    relation : Relation
        The comparison ``*``.
    n : int
        Right-hand side, ``n >= 0``.
    dim : int
        Number of embeddings.
    caps : Caps | None
        Per-σ upper bounds (None entries are uncapped).
    bound : int | None
        External bound on the total degree, needed for ``>`` and ``>=``
        unless every σ is capped.

    Raises
    ------
    UnboundedSetError
        If the requested set is infinite.
    """
    if n < 0:
        raise InvalidParametersError(f"n must be non-negative, got {n}")
    full_caps: Caps = caps if caps is not None else (None,) * dim
    if len(full_caps) != dim:
        raise InvalidParametersError(f"{len(full_caps)} caps given for dimension {dim}")

    match relation:
        case Relation.LT:
            top, keep = n - 1, lambda t: t < n
        case Relation.LE:
            top, keep = n, lambda t: t <= n
        case Relation.EQ:
            top, keep = n, lambda t: t == n
        case Relation.GT | Relation.GE:
            limits = [c for c in full_caps if c is not None]
            if bound is None and len(limits) < dim:
                raise UnboundedSetError(f"I_{{{relation.value}{n}}} is infinite without caps or a degree bound")
            top = bound if bound is not None else sum(limits)
            if len(limits) == dim:
                top = min(top, sum(limits))
            threshold = n if relation is Relation.GE else n + 1
            keep = lambda t: t >= threshold  # noqa: E731

    if top < 0:
        return []
    found = [MultiIndex(c) for c in _compositions(dim, top, full_caps) if keep(sum(c))]
    return sorted(found, key=MultiIndex.sort_key)


def mi_binom(n: Sequence[int], m: Sequence[int]) -> int:
    _check_dims(n, m)
    if not all(b <= a for a, b in zip(n, m, strict=True)):
        raise IndexOrderViolationError(f"{tuple(m)} is not below {tuple(n)}")
    return math.prod(math.comb(a, b) for a, b in zip(n, m, strict=True))


def monomial_from_images(images: Sequence[PadicScalar], n: Sequence[int]) -> PadicScalar:
    """Π_σ images[σ]^{n_σ} for precomputed embedded images."""
    _check_dims(images, n)
    result: PadicScalar | None = None
    for image, power in zip(images, n, strict=True):
        if power == 0:
            continue
        term = image**power
        result = term if result is None else result * term
    if result is None:
        return PadicScalar.one(images[0].field)
    return result


def monomial_eval(z: PadicScalar, n: Sequence[int]) -> PadicScalar:
    """z^n = Π_σ σ(z)^{n_σ}."""
    return monomial_from_images(embedded_images(z), n)
