from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.core.exceptions import DepthInsufficientError, InvalidParametersError
from padicwave.crnorm.domain import RatioInterval, SupInterval
from padicwave.crnorm.sup import sup_abs
from padicwave.deltaops.poly import GlobalPoly
from padicwave.fields.cosets import CosetRep
from padicwave.logger import BoundLogger, get_logger

logger: BoundLogger = get_logger(__name__)

RATIO_NAMES = ("leading", "spread")


@dataclass(frozen=True, slots=True)
class ProbeRow:
    """Ratios at one h, each against sup_{ϖ^h O_F} |P|.

    leading  max_{|m|=N} |a_m| q^{-hN}
    spread   q^{-h N_2} sup_{O_F} |P|

    Both are gated by :func:`inequality_probe`.
    """

    h: int
    local_sup: SupInterval
    ratios: dict[str, RatioInterval]

    def to_json(self) -> dict[str, Any]:
        return {
            "h": self.h,
            "local_sup": self.local_sup.to_json(),
            "ratios": {name: ratio.to_json() for name, ratio in self.ratios.items()},
        }


@dataclass(frozen=True, slots=True)
class ProbeReport:
    rows: list[ProbeRow]
    constants: dict[str, AbsValue | None]
    violations: list[tuple[str, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "rows": [row.to_json() for row in self.rows],
            "constants": {k: None if v is None else v.to_json() for k, v in self.constants.items()},
            "violations": [{"ratio": name, "h": h} for name, h in self.violations],
            "passed": self.passed,
        }


def inequality_probe(P: GlobalPoly, h_values: Iterable[int], depth: int = 2) -> ProbeReport:
    """Certified ratio series for the coefficient and local-sup inequalities of P.

    Each ratio is enclosed using sup_abs at depth h + ``depth``. The
    constant for a ratio is its largest certified upper value over the
    first half of the h range; a later h whose certified lower value
    exceeds it is a violation.

    Raises
    ------
    DepthInsufficientError
        If some local sup is not known to be nonzero.
    """
    if P.is_zero:
        raise InvalidParametersError("the zero polynomial has no coefficient inequalities")
    hs = sorted(set(h_values))
    if not hs or hs[0] < 0:
        raise InvalidParametersError(f"h values must be non-negative and non-empty, got {hs}")
    f = P.field.f
    top = P.degree
    loc = P.to_locpoly()
    divided = P.divided_powers()
    global_sup = sup_abs(loc, depth=depth)

    rows: list[ProbeRow] = []
    for h in hs:
        local = sup_abs(loc, region=CosetRep((0,) * h), depth=h + depth)
        if local.lower.is_zero and not local.upper.is_zero:
            raise DepthInsufficientError(f"sup over ϖ^{h} O_F not separated from zero at depth {h + depth}")
        leading = max(
            (a.abs().scaled(-f * h * top) for m, a in divided.items() if m.total == top), default=AbsValue.zero()
        )
        rows.append(
            ProbeRow(
                h,
                local,
                {
                    "leading": RatioInterval.exact(leading, local),
                    "spread": RatioInterval.of(global_sup.scaled(Fraction(-f * h * top)), local),
                },
            )
        )

    head = rows[: max(1, (len(rows) + 1) // 2)]
    constants: dict[str, AbsValue | None] = {}
    violations: list[tuple[str, int]] = []
    for name in RATIO_NAMES:
        uppers = [row.ratios[name].upper for row in head]
        if any(u is None for u in uppers):
            constants[name] = None
            continue
        constant = max(u for u in uppers if u is not None)
        constants[name] = constant
        for row in rows[len(head) :]:
            if row.ratios[name].lower > constant:
                violations.append((name, row.h))
    logger.debug("deltaops.probe.completed", degree=top, levels=len(rows), violations=len(violations))
    return ProbeReport(rows, constants, violations)
