"""Catalog file format and report schemas.

The catalog is a plain text file, one record per highest weight vector::

    version 1
    entry 3,2,2 w4 verbatim
      tr(x1^3)(tr(x2^2)tr(x3^2) - tr^2(x2x3)) + ...
    printed: <formula as printed, when the entry is repaired>
    note: <free text>

Expression lines are indented and concatenated. ``#`` starts a comment
line. An expression that does not parse leaves the entry in place with
``expr`` None and the parser message in ``error``. Relation and
validation reports are JSON objects with the fields listed below.
"""

from dataclasses import dataclass, field
from typing import List, Optional

from core.partitions import Partition

CATALOG_VERSION = 1

VERBATIM = "verbatim"
REPAIRED = "repaired"
STATUSES = (VERBATIM, REPAIRED)

CATALOG_DEGREES = range(4, 9)

RELATION_REPORT_FIELDS = ("lambda", "d", "degree", "candidates", "nullspace", "matched_paper", "wall_ms")

ENTRY_REPORT_FIELDS = ("entry", "status", "multidegree", "hwv", "nonzero", "errors", "repairs")


@dataclass(frozen=True)
class CatalogEntry:
    lam: Partition
    index: int
    expr: object
    status: str = VERBATIM
    text: str = ""
    printed: Optional[str] = None
    notes: List[str] = field(default_factory=list, compare=False, hash=False)
    line: int = 0
    error: Optional[str] = None

    @property
    def degree(self) -> int:
        return self.lam.size

    @property
    def parses(self) -> bool:
        return self.expr is not None

    @property
    def label(self) -> str:
        return f"{self.lam.label()} w{self.index}"

    def __str__(self):
        return f"{self.label} [{self.status}]"
