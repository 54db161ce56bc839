"""Branch-and-bound for certified suprema of |P| over products of cosets.

A :class:`Cell` carries a polynomial in several O_F-variables, each written
around a centre and ranging over centre + ϖ^level O_F. The Gauss bound
max_m |c_m| q^{-Σ level_v |m_v|} is an upper bound on the cell, and the
constant coefficient is the value at the centre, which is a lower bound.
Cells whose two bounds agree are resolved; others are split along the
coarsest variable until they agree, drop below the running lower bound,
or reach their level limits.
"""

from __future__ import annotations

import heapq
import itertools
from collections.abc import Callable, Hashable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from padicwave.arith.absvalue import AbsValue, exponent_min
from padicwave.arith.scalar import PadicScalar
from padicwave.crnorm.domain import SupInterval
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.fields.embeddings import embedded_images
from padicwave.logger import BoundLogger, get_logger
from padicwave.multiindex.index import mi_binom, monomial_from_images

logger: BoundLogger = get_logger(__name__)

type FlatIndex = tuple[int, ...]
type FlatTable = dict[FlatIndex, PadicScalar]


@dataclass(frozen=True, slots=True)
class Cell:
    centres: tuple[PadicScalar, ...]
    levels: tuple[int, ...]
    limits: tuple[int, ...]
    coeffs: Mapping[FlatIndex, PadicScalar]
    gain: Fraction
    tag: Hashable = None

    def gauss_exponent(self, f: int, d: int) -> Fraction | None:
        best: Fraction | None = None
        for m, c in self.coeffs.items():
            exp = c.val_exponent
            if exp is None:
                continue
            weight = sum(level * sum(m[v * d : (v + 1) * d]) for v, level in enumerate(self.levels))
            candidate = exp + f * weight
            if best is None or candidate < best:
                best = candidate
        return None if best is None else best - self.gain

    def centre_exponent(self, d: int) -> Fraction | None:
        c0 = self.coeffs.get((0,) * (d * len(self.levels)))
        if c0 is None:
            return None
        exp = c0.val_exponent
        return None if exp is None else exp - self.gain


def recentre_variable(coeffs: Mapping[FlatIndex, PadicScalar], v: int, d: int, delta: PadicScalar) -> FlatTable:
    """Re-expand a flattened table after moving the centre of variable v by delta."""
    if delta.is_exact_zero:
        return dict(coeffs)
    images = embedded_images(delta)
    powers: dict[FlatIndex, PadicScalar] = {}
    out: FlatTable = {}
    lo, hi = v * d, (v + 1) * d
    for m, c in coeffs.items():
        block = m[lo:hi]
        for low in itertools.product(*(range(x + 1) for x in block)):
            gap = tuple(x - y for x, y in zip(block, low, strict=True))
            mono = powers.get(gap)
            if mono is None:
                mono = monomial_from_images(images, gap)
                powers[gap] = mono
            if mono.is_zero:
                continue
            key = m[:lo] + low + m[hi:]
            term = c * mono * mi_binom(block, low)
            prev = out.get(key)
            out[key] = term if prev is None else prev + term
    return {k: c for k, c in out.items() if not c.is_zero}


class BranchAndBound:
    """Certified maximum of |P| over a family of cells."""

    def __init__(self, field: FieldDescriptor) -> None:
        self.field = field
        self._f = field.f
        self._d = field.d
        self._heap: list[tuple[Fraction, int, Cell]] = []
        self._counter = itertools.count()
        self.lower: Fraction | None = None
        self.witness: Cell | None = None
        self.unresolved: Fraction | None = None
        self.folded: Fraction | None = None
        self.cells_visited = 0
        self._shift_cache: dict[tuple[int, int], PadicScalar] = {}

    def push(self, cell: Cell) -> None:
        self._observe(cell)
        g = cell.gauss_exponent(self._f, self._d)
        if g is None:
            return
        if self.lower is not None and g >= self.lower:
            return
        heapq.heappush(self._heap, (g, next(self._counter), cell))

    def _observe(self, cell: Cell) -> None:
        c = cell.centre_exponent(self._d)
        if c is not None and (self.lower is None or c < self.lower):
            self.lower = c
            self.witness = cell

    def _shift(self, t: int, level: int) -> PadicScalar:
        key = (t, level)
        cached = self._shift_cache.get(key)
        if cached is None:
            cached = PadicScalar.teichmuller(self.field, t) * PadicScalar.uniformizer(self.field) ** level
            self._shift_cache[key] = cached
        return cached

    def split(self, cell: Cell, v: int) -> list[Cell]:
        level = cell.levels[v]
        children: list[Cell] = []
        for t in range(self.field.q):
            delta = self._shift(t, level)
            centres = tuple(c + delta if u == v else c for u, c in enumerate(cell.centres))
            levels = tuple(lv + 1 if u == v else lv for u, lv in enumerate(cell.levels))
            coeffs = recentre_variable(cell.coeffs, v, self._d, delta)
            children.append(Cell(centres, levels, cell.limits, coeffs, cell.gain, cell.tag))
        return children

    def run(self) -> None:
        while self._heap:
            g, _, cell = heapq.heappop(self._heap)
            if self.lower is not None and g >= self.lower:
                self._heap.clear()
                break
            self.cells_visited += 1
            if cell.centre_exponent(self._d) == g:
                continue
            open_vars = [v for v, (lv, lim) in enumerate(zip(cell.levels, cell.limits, strict=True)) if lv < lim]
            if not open_vars:
                self.unresolved = exponent_min(self.unresolved, g)
                continue
            v = min(open_vars, key=lambda u: (cell.levels[u], u))
            for child in self.split(cell, v):
                self.push(child)

    def fold(self, exponent: Fraction | None) -> None:
        """Add an analytic bound for a part of the domain that was not enumerated."""
        self.folded = exponent_min(self.folded, exponent)

    @property
    def upper(self) -> Fraction | None:
        return exponent_min(exponent_min(self.lower, self.unresolved), self.folded)

    def interval(self, witness: Callable[[Cell], tuple[PadicScalar, ...]]) -> SupInterval:
        points = witness(self.witness) if self.witness is not None else None
        result = SupInterval(AbsValue(self.lower), AbsValue(self.upper), points)
        logger.debug(
            "crnorm.engine.completed",
            lower=result.lower,
            upper=result.upper,
            cells=self.cells_visited,
        )
        return result
