from __future__ import annotations

from fractions import Fraction

from padicwave.config import get_settings
from padicwave.crnorm.domain import SupInterval
from padicwave.crnorm.engine import BranchAndBound, Cell
from padicwave.fields.cosets import CosetRep
from padicwave.locpoly.function import LocPolyFun, recentre


def _region_cells(f: LocPolyFun, region: CosetRep, depth: int) -> list[Cell]:
    fd = f.field
    if region.level <= f.level:
        limit = max(depth, f.level)
        return [
            Cell(
                centres=(a.point(fd),),
                levels=(f.level,),
                limits=(limit,),
                coeffs={tuple(m): c for m, c in f.table[a].items()},
                gain=Fraction(0),
            )
            for a in f.support()
            if region.contains(a)
        ]
    outer = region.truncate(f.level)
    coeffs = f.table.get(outer)
    if not coeffs:
        return []
    centre = region.point(fd)
    shifted = recentre(coeffs, centre - outer.point(fd))
    return [
        Cell(
            centres=(centre,),
            levels=(region.level,),
            limits=(max(depth, region.level),),
            coeffs={tuple(m): c for m, c in shifted.items()},
            gain=Fraction(0),
        )
    ]


def sup_abs(f: LocPolyFun, region: CosetRep | None = None, depth: int | None = None) -> SupInterval:
    """Certified enclosure of sup |f| over a coset region (all of O_F by default).

    Points are enumerated down to level ``depth``; the upper bound is the
    Gauss bound of every cell left open there.
    """
    region = region if region is not None else CosetRep(())
    depth = get_settings().default_depth if depth is None else depth
    engine = BranchAndBound(f.field)
    for cell in _region_cells(f, region, depth):
        engine.push(cell)
    engine.run()
    return engine.interval(lambda cell: cell.centres)
