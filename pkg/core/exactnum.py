"""Exact rational arithmetic and linear algebra over QQ.

Coefficient matrices are cleared of denominators row by row and reduced
fraction-free over ZZ with sympy's ``DomainMatrix``; nullspace vectors are
returned as coprime integer vectors with a positive leading entry.
"""

import logging
from math import gcd
from functools import reduce
from typing import Dict, Iterable, List, Sequence

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Rat = type(QQ(0))


def rat(numerator, denominator: int = 1) -> Rat:
    """Build a reduced rational; accepts ints, Fractions and QQ elements."""
    if hasattr(numerator, 'numerator') and denominator == 1:
        return QQ(int(numerator.numerator), int(numerator.denominator))
    return QQ(int(numerator), int(denominator))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row(row: Sequence) -> List[int]:
    """Scale a rational row by the lcm of its denominators."""
    values = [rat(x) for x in row]
    den = reduce(_lcm, (int(v.denominator) for v in values), 1)
    return [int(v.numerator) * (den // int(v.denominator)) for v in values]


def normalize(vector: Sequence) -> List[int]:
    """Coprime integer representative with first nonzero entry positive."""
    ints = integer_row(vector)
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    return [-x for x in ints] if lead < 0 else ints


def rat_matrix(rows: Sequence[Sequence], cols: int = None) -> DomainMatrix:
    """Dense QQ matrix; every row must have the same length."""
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != cols:
            raise ValueError(f"ragged matrix: row of length {len(r)}, expected {cols}")
    return DomainMatrix([[rat(x) for x in r] for r in rows], (len(rows), cols), QQ)


def _as_rows(m) -> List[List]:
    if isinstance(m, DomainMatrix):
        return m.to_list()
    return [list(r) for r in m]


def _integer_matrix(rows: List[List], cols: int) -> DomainMatrix:
    int_rows = [integer_row(r) for r in rows if any(x != 0 for x in r)]
    return DomainMatrix([[ZZ(x) for x in r] for r in int_rows], (len(int_rows), cols), ZZ)


def nullspace(m, cols: int = None) -> List[List[int]]:
    """Basis of the right nullspace, one normalized integer vector per free column."""
    rows = _as_rows(m)
    if cols is None:
        cols = m.shape[1] if isinstance(m, DomainMatrix) else (len(rows[0]) if rows else 0)
    if cols == 0:
        return []
    mat = _integer_matrix(rows, cols)
    if mat.shape[0] == 0:
        return [[1 if k == j else 0 for k in range(cols)] for j in range(cols)]

    reduced, den, pivots = mat.rref_den()
    entries = reduced.to_list()
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        vec = [0] * cols
        vec[free] = int(den)
        for i, p in enumerate(pivots):
            vec[p] = -int(entries[i][free])
        basis.append(normalize(vec))
    return basis


def rank(m, cols: int = None) -> int:
    """Exact rank over QQ."""
    rows = _as_rows(m)
    if cols is None:
        cols = m.shape[1] if isinstance(m, DomainMatrix) else (len(rows[0]) if rows else 0)
    mat = _integer_matrix(rows, cols)
    if mat.shape[0] == 0 or cols == 0:
        return 0
    return int(mat.rank())


def mat_vec(rows: Sequence[Sequence], vector: Sequence) -> List[Rat]:
    return [sum((rat(a) * rat(b) for a, b in zip(r, vector)), QQ(0)) for r in rows]


class RowCompressor:
    """Streaming fraction-free echelon form over ZZ.

    Rows are fed one at a time (e.g. one monomial of a tall coefficient
    matrix); only independent rows are kept, keyed by pivot column, so the
    stored matrix never exceeds ``cols`` rows. The kernel of the kept rows
    equals the kernel of everything fed.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self._pivots: Dict[int, List[int]] = {}
        self.fed = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def full(self) -> bool:
        return len(self._pivots) == self.cols

    def add(self, row: Sequence) -> bool:
        """Reduce ``row`` against the kept rows; return True if it was independent."""
        self.fed += 1
        if self.full:
            return False
        vec = integer_row(row)
        for col in range(self.cols):
            if vec[col] == 0:
                continue
            piv = self._pivots.get(col)
            if piv is None:
                self._pivots[col] = self._primitive(vec)
                return True
            a, b = piv[col], vec[col]
            vec = [a * x - b * y for x, y in zip(vec, piv)]
            vec = self._primitive(vec)
        return False

    def extend(self, rows: Iterable[Sequence]):
        for row in rows:
            self.add(row)
            if self.full:
                break

    @staticmethod
    def _primitive(vec: List[int]) -> List[int]:
        g = reduce(gcd, (abs(x) for x in vec), 0)
        return [x // g for x in vec] if g > 1 else vec

    def rows(self) -> List[List[int]]:
        return [self._pivots[c] for c in sorted(self._pivots)]

    def nullspace(self) -> List[List[int]]:
        return nullspace(self.rows(), cols=self.cols)
