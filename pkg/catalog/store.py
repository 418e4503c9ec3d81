"""Catalog of highest weight vectors: loading, validation and repair bookkeeping."""

import logging
import os
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

from catalog.evaluate import expand, formal_expand, multidegree_of
from catalog.expr import Sum
from catalog.models import (CATALOG_DEGREES, CATALOG_VERSION, REPAIRED, STATUSES, VERBATIM,
                            CatalogEntry)
from catalog.parser import CatalogSyntaxError, bracket_variants, check_balanced, parse_expr
from core.exactnum import rank
from core.mpoly import coefficient_vector
from core.partitions import Partition
from core.settings import load_config, resolve_path

logger = logging.getLogger(__name__)

DEFAULT_CATALOG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "hwv_catalog.txt")


class CatalogMissingError(ValueError):
    """Raised when the catalog has no entries for a requested weight or degree."""


# ── file format ──────────────────────────────────────────────────────────

def _parse_header(line: str, lineno: int) -> Tuple[Partition, int, str]:
    parts = line.split()
    if len(parts) != 4:
        raise CatalogSyntaxError(f"line {lineno}: expected 'entry <lambda> w<k> <status>', got {line!r}")
    _, lam_text, index_text, status = parts
    if not index_text.startswith("w") or not index_text[1:].isdigit():
        raise CatalogSyntaxError(f"line {lineno}: bad entry index {index_text!r}")
    if status not in STATUSES:
        raise CatalogSyntaxError(f"line {lineno}: status must be one of {STATUSES}, got {status!r}")
    return Partition.parse(lam_text), int(index_text[1:]), status


def parse_catalog(text: str) -> List[CatalogEntry]:
    """Read catalog records; an entry whose expression does not parse is kept with expr None."""
    entries: List[CatalogEntry] = []
    current: Optional[dict] = None
    version = None

    def close():
        if current is None:
            return
        body = " ".join(current['lines']).strip()
        if not body:
            raise CatalogSyntaxError(f"line {current['line']}: entry without expression")
        expr, error = None, None
        try:
            expr = parse_expr(body)
        except CatalogSyntaxError as e:
            error = str(e)
            logger.error(f"[catalog] line {current['line']}: entry {current['lam']} w{current['index']} "
                         f"does not parse: {e}")
        entries.append(CatalogEntry(lam=current['lam'], index=current['index'], expr=expr,
                                    status=current['status'], text=body, printed=current['printed'],
                                    notes=current['notes'], line=current['line'], error=error))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("version"):
            version = int(stripped.split()[1])
            if version != CATALOG_VERSION:
                raise CatalogSyntaxError(f"catalog version {version}, expected {CATALOG_VERSION}")
            continue
        if version is None:
            raise CatalogSyntaxError(f"line {lineno}: catalog must start with 'version {CATALOG_VERSION}'")
        if stripped.startswith("entry "):
            close()
            lam, index, status = _parse_header(stripped, lineno)
            current = {'lam': lam, 'index': index, 'status': status, 'lines': [],
                       'printed': None, 'notes': [], 'line': lineno}
            continue
        if current is None:
            raise CatalogSyntaxError(f"line {lineno}: text outside an entry")
        if stripped.startswith("printed:"):
            current['printed'] = stripped[len("printed:"):].strip()
        elif stripped.startswith("note:"):
            current['notes'].append(stripped[len("note:"):].strip())
        elif line[0].isspace():
            current['lines'].append(stripped)
        else:
            raise CatalogSyntaxError(f"line {lineno}: unexpected {stripped!r}")
    close()

    seen = set()
    for e in entries:
        key = (e.lam, e.index)
        if key in seen:
            raise CatalogSyntaxError(f"line {e.line}: duplicate entry {e.label}")
        seen.add(key)
        if e.status == REPAIRED and not e.notes:
            raise CatalogSyntaxError(f"line {e.line}: repaired entry {e.label} needs a note")
    return entries


class CatalogStore:
    """The shipped catalog file, read once."""

    def __init__(self, config_path: str = "config.yaml", path: Optional[str] = None):
        self.config = load_config(config_path)
        configured = self.config.get('catalog', {}).get('path')
        if path is None and configured:
            path = resolve_path(self.config, configured)
        self.path = path or DEFAULT_CATALOG
        with open(self.path) as f:
            self.entries = parse_catalog(f.read())
        logger.info(f"[catalog] {len(self.entries)} entries from {self.path}")

    def unparsed(self) -> List[CatalogEntry]:
        return [e for e in self.entries if not e.parses]

    def weights(self, degree: Optional[int] = None) -> List[Partition]:
        found = []
        for e in self.entries:
            if (degree is None or e.degree == degree) and e.lam not in found:
                found.append(e.lam)
        return found

    def group(self, lam: Sequence[int]) -> List[CatalogEntry]:
        lam = Partition(lam)
        out = sorted((e for e in self.entries if e.lam == lam), key=lambda e: e.index)
        if not out:
            raise CatalogMissingError(f"no catalog entries for {lam.label()}")
        return out

    def entry(self, lam: Sequence[int], index: int) -> CatalogEntry:
        for e in self.group(lam):
            if e.index == index:
                return e
        raise CatalogMissingError(f"no entry w{index} for {Partition(lam).label()}")


_default_store: Optional[CatalogStore] = None


def default_store() -> CatalogStore:
    global _default_store
    if _default_store is None:
        _default_store = CatalogStore()
    return _default_store


def _weight_matches(expr, lam: Partition) -> bool:
    found = multidegree_of(expr)
    if found is None:
        return False
    return {k: v for k, v in found.items() if v} == {i + 1: e for i, e in enumerate(lam)}


def load_catalog(degree: int, d: int, store: Optional[CatalogStore] = None,
                 screen: bool = True) -> List[CatalogEntry]:
    """All entries of the given degree whose weight has at most d rows.

    Each entry is checked for multidegree and, unless ``screen`` is off,
    for g-invariance at a few integer points. The number of entries per
    weight is compared with the multiplicity in the degree component of
    the square of the augmentation ideal.
    """
    from core.characters import omega2_component
    from matrices.numcheck import numeric_hwv_screen

    if degree not in CATALOG_DEGREES:
        raise ValueError(f"catalog degree {degree} outside {CATALOG_DEGREES.start}..{CATALOG_DEGREES.stop - 1}")
    if degree == 8 and d != 3:
        raise ValueError("the degree 8 catalog is only valid for d = 3")
    store = store or default_store()
    entries = [e for e in store.entries if e.degree == degree and len(e.lam) <= d]
    expected = omega2_component(degree, d)
    for lam in {e.lam for e in entries}:
        count = sum(1 for e in entries if e.lam == lam)
        if expected.get(lam, 0) != count:
            logger.warning(f"[catalog] {lam.label()}: {count} entries, multiplicity {expected.get(lam, 0)}")
    for e in entries:
        if not e.parses:
            logger.error(f"[catalog] {e.label} left out: {e.error}")
            continue
        if not _weight_matches(e.expr, e.lam):
            logger.error(f"[catalog] {e.label} does not have multidegree {e.lam}")
        elif screen and not numeric_hwv_screen(e.expr, len(e.lam)):
            logger.error(f"[catalog] {e.label} fails the numeric hwv screen")
        if e.status == REPAIRED:
            logger.warning(f"[catalog] {e.label} is a repaired transcription: {'; '.join(e.notes)}")
    return [e for e in entries if e.parses]


# ── validation ───────────────────────────────────────────────────────────

@dataclass
class EntryReport:
    entry: str
    status: str
    multidegree: bool = False
    hwv: Optional[bool] = None
    nonzero: Optional[bool] = None
    bracket_damage: Optional[int] = None
    repairs: List[str] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.multidegree and bool(self.hwv) and bool(self.nonzero) and not self.errors

    def to_dict(self) -> dict:
        return {'entry': self.entry, 'status': self.status, 'multidegree': self.multidegree,
                'hwv': self.hwv, 'nonzero': self.nonzero, 'bracket_damage': self.bracket_damage,
                'repairs': list(self.repairs), 'errors': list(self.errors), 'passed': self.passed}


@dataclass
class GroupReport:
    lam: Partition
    d: int
    entries: List[EntryReport]
    independent: Optional[bool] = None
    formal_rank: int = 0
    multiplicity: Optional[int] = None

    @property
    def passed(self) -> bool:
        ok = all(r.passed for r in self.entries) and bool(self.independent)
        if self.multiplicity is not None:
            ok = ok and self.multiplicity == len(self.entries)
        return ok

    def to_dict(self) -> dict:
        return {'lambda': str(self.lam), 'd': self.d, 'entries': [r.to_dict() for r in self.entries],
                'independent': self.independent, 'formal_rank': self.formal_rank,
                'multiplicity': self.multiplicity, 'passed': self.passed}


def repair_variants(entry: CatalogEntry) -> List[Tuple[str, CatalogEntry]]:
    """Bracket edits for an entry that does not parse, else single sign flips of its summands."""
    if not entry.parses:
        return [(description, replace(entry, expr=node, text=str(node), status=REPAIRED,
                                      printed=entry.printed or entry.text, error=None,
                                      notes=[description]))
                for description, node in bracket_variants(entry.text)]
    expr = entry.expr
    if not isinstance(expr, Sum) or len(expr.terms) < 2:
        return []
    out = []
    for k in range(len(expr.terms)):
        terms = tuple((-c, t) if j == k else (c, t) for j, (c, t) in enumerate(expr.terms))
        flipped = Sum(terms)
        out.append((f"flip summand {k + 1}", replace(entry, expr=flipped, text=str(flipped),
                                                    status=REPAIRED,
                                                    notes=[f"sign of summand {k + 1} flipped"])))
    return out


def validate_entry(entry: CatalogEntry, ctx, workers: int = 1) -> EntryReport:
    """Multidegree, exact hwv test in ``ctx`` and formal nonvanishing; failures are report content."""
    from core.glaction import MultidegreeError, is_hwv
    from matrices.numcheck import numeric_hwv_screen

    report = EntryReport(entry=entry.label, status=entry.status)
    if not entry.parses:
        report.bracket_damage = check_balanced(entry.text)
        report.errors.append(f"does not parse: {entry.error}")
        logger.warning(f"[catalog] {entry.label} does not parse, trying bracket repairs")
        for description, variant in repair_variants(entry):
            if _weight_matches(variant.expr, entry.lam) and numeric_hwv_screen(variant.expr, len(entry.lam)):
                report.repairs.append(description)
        return report
    if entry.printed:
        report.bracket_damage = check_balanced(entry.printed)
    try:
        report.multidegree = _weight_matches(entry.expr, entry.lam)
        if not report.multidegree:
            report.errors.append(f"multidegree {multidegree_of(entry.expr)} is not {entry.lam}")
            return report
        report.nonzero = bool(formal_expand(entry.expr)[0])
        poly = expand(entry.expr, ctx, workers)
        report.hwv = is_hwv(poly, entry.lam, ctx, workers=workers)
    except (MultidegreeError, ValueError) as e:
        logger.error(f"[catalog] {entry.label}: {e}")
        report.errors.append(str(e))
        return report
    if report.hwv is False and entry.status == VERBATIM:
        logger.warning(f"[catalog] {entry.label} is not a highest weight vector, trying sign repairs")
        for description, variant in repair_variants(entry):
            if numeric_hwv_screen(variant.expr, len(entry.lam)):
                report.repairs.append(description)
    logger.info(f"[catalog] {entry.label}: multidegree={report.multidegree} hwv={report.hwv} "
                f"nonzero={report.nonzero}")
    return report


def validate_group(entries: List[CatalogEntry], ctx, workers: int = 1) -> GroupReport:
    """validate_entry on each member plus linear independence with traces kept formal."""
    from core.characters import omega2_component

    if not entries:
        raise CatalogMissingError("empty catalog group")
    lam = entries[0].lam
    report = GroupReport(lam=lam, d=ctx.d, entries=[validate_entry(e, ctx, workers) for e in entries])
    if not all(e.parses for e in entries):
        logger.error(f"[catalog] {lam.label()} has entries that do not parse, independence not checked")
        report.independent = False
    else:
        _check_independence(report, entries)
    if lam.size in CATALOG_DEGREES and (lam.size < 8 or ctx.d == 3):
        report.multiplicity = omega2_component(lam.size, ctx.d).get(lam, 0)
    return report


def _check_independence(report: GroupReport, entries: List[CatalogEntry]) -> None:
    try:
        polys = formal_expand(*(e.expr for e in entries))
        _, rows = coefficient_vector(polys)
        report.formal_rank = rank(rows, cols=len(entries)) if rows else 0
        report.independent = report.formal_rank == len(entries)
    except ValueError as e:
        logger.error(f"[catalog] {report.lam.label()} independence check failed: {e}")
