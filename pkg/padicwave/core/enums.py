from __future__ import annotations

from enum import IntEnum, StrEnum


class Relation(StrEnum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="


class ArithOp(StrEnum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


class ExitCode(IntEnum):
    OK = 0
    VIOLATION = 2
    INPUT_ERROR = 3
    INCONCLUSIVE = 4


class SelftestScope(StrEnum):
    FAST = "fast"
    FULL = "full"


class BuiltinOracle(StrEnum):
    DIRAC = "dirac"
    HAAR = "haar"
