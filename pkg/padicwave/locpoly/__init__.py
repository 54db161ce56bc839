"""Locally polynomial functions on O_F and their JSON documents."""

from __future__ import annotations

from .documents import LocPolyDocument
from .function import CoeffTable, LocPolyFun, integer_part, recentre
from .profile import BoundaryProfile

__all__ = [
    "BoundaryProfile",
    "CoeffTable",
    "LocPolyDocument",
    "LocPolyFun",
    "integer_part",
    "recentre",
]
