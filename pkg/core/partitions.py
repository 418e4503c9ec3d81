"""Partitions, semistandard tableaux, Weyl dimensions and Schur polynomials."""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from core.mpoly import Poly, permute_variables, series_space

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^(\d+)(?:\^(\d+))?$")


class PartitionError(ValueError):
    """Raised for malformed partition input."""


class NotSymmetricError(ValueError):
    """Raised when a polynomial handed to the Schur decomposition is not symmetric."""


class SchurNegativeError(ValueError):
    """Raised when a decomposition would need a negative or fractional multiplicity."""


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; () is the partition of 0."""

    def __new__(cls, parts: Sequence[int] = ()):
        try:
            parts = tuple(int(p) for p in parts)
        except (TypeError, ValueError) as e:
            raise PartitionError(f"bad partition {parts!r}: {e}")
        if any(p < 1 for p in parts):
            raise PartitionError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise PartitionError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read "4,1,1,1", "4,1^3" or "2^2"; the empty string is ()."""
        text = text.strip().strip("()")
        if not text:
            return cls(())
        parts: List[int] = []
        for token in text.split(","):
            m = _TOKEN.match(token.strip())
            if not m:
                raise PartitionError(f"bad partition token {token!r} in {text!r}")
            parts.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls(parts)

    @property
    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition(())
        return Partition([sum(1 for p in self if p > j) for j in range(self[0])])

    def columns(self) -> Tuple[int, ...]:
        """Column lengths, left to right."""
        return tuple(self.conjugate())

    def padded(self, d: int) -> Tuple[int, ...]:
        return tuple(self) + (0,) * (d - len(self))

    def doubled(self) -> "Partition":
        return Partition([2 * p for p in self])

    def label(self) -> str:
        """Exponent notation, e.g. (4,1^3)."""
        groups = []
        for p in self:
            if groups and groups[-1][0] == p:
                groups[-1][1] += 1
            else:
                groups.append([p, 1])
        body = ",".join(f"{p}^{k}" if k > 1 else str(p) for p, k in groups)
        return f"({body})"

    def __str__(self):
        return ",".join(str(p) for p in self)

    def __repr__(self):
        return f"Partition({str(self)})"


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    rows: Tuple[Tuple[int, ...], ...]

    def content(self, row: int) -> Dict[int, int]:
        """How many times each value occurs in the given row (0-based)."""
        counts: Dict[int, int] = {}
        for v in self.rows[row]:
            counts[v] = counts.get(v, 0) + 1
        return counts

    def weight(self, d: int) -> Tuple[int, ...]:
        w = [0] * d
        for row in self.rows:
            for v in row:
                w[v - 1] += 1
        return tuple(w)

    def __str__(self):
        return "/".join("".join(str(v) for v in row) for row in self.rows)


def weyl_dim(lam: Sequence[int], d: int) -> int:
    """Dimension of W_d(lambda); 0 when lambda has more than d parts."""
    lam = Partition(lam)
    if len(lam) > d:
        return 0
    padded = lam.padded(d)
    num, den = 1, 1
    for i in range(d):
        for j in range(i + 1, d):
            num *= padded[i] - padded[j] + j - i
            den *= j - i
    return num // den


def ssyt_enumerate(lam: Sequence[int], d: int) -> List[Tableau]:
    """All semistandard tableaux of shape lambda with entries in 1..d.

    Cells are filled in row-reading order trying values in ascending order,
    so the output is lexicographic in the row reading word.
    """
    lam = Partition(lam)
    if len(lam) > d:
        return []
    cells = [(r, c) for r, length in enumerate(lam) for c in range(length)]
    grid: Dict[Tuple[int, int], int] = {}
    found: List[Tableau] = []

    def fill(k: int):
        if k == len(cells):
            found.append(Tableau(lam, tuple(tuple(grid[(r, c)] for c in range(lam[r]))
                                           for r in range(len(lam)))))
            return
        r, c = cells[k]
        low = 1
        if c > 0:
            low = max(low, grid[(r, c - 1)])
        if r > 0:
            low = max(low, grid[(r - 1, c)] + 1)
        # rows below still need strictly larger entries in this column
        high = d - _rows_below(lam, r, c)
        for v in range(low, high + 1):
            grid[(r, c)] = v
            fill(k + 1)
        grid.pop((r, c), None)

    fill(0)
    return found


def _rows_below(lam: Partition, r: int, c: int) -> int:
    return sum(1 for rr in range(r + 1, len(lam)) if lam[rr] > c)


def _det_alternant(exponents: Tuple[int, ...], d: int) -> Poly:
    space = series_space(d)
    gens = space.ring.gens
    result = space.zero
    for perm in permutations(range(d)):
        term = space.one
        for i, j in enumerate(perm):
            term = term * gens[i] ** exponents[j]
        result += term if perm_sign(perm) > 0 else -term
    return result


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def schur_poly(lam: Partition, d: int, method: str = "bialternant") -> Poly:
    """Schur polynomial S_lambda(t_1..t_d).

    ``bialternant`` divides the two alternants exactly; ``tableau`` sums
    t^weight over semistandard tableaux. Both agree.
    """
    lam = Partition(lam)
    if len(lam) > d:
        raise PartitionError(f"{lam.label()} has more than {d} rows")
    space = series_space(d)
    if method == "tableau":
        terms: Dict[Tuple[int, ...], int] = {}
        for t in ssyt_enumerate(lam, d):
            w = t.weight(d)
            terms[w] = terms.get(w, 0) + 1
        return space.ring.from_dict(terms) if terms else space.zero
    if method != "bialternant":
        raise ValueError(f"unknown method {method!r}")
    padded = lam.padded(d)
    delta = tuple(range(d - 1, -1, -1))
    numer = _det_alternant(tuple(p + s for p, s in zip(padded, delta)), d)
    denom = _det_alternant(delta, d)
    return numer.exquo(denom)


class Decomp(dict):
    """Multiset of irreducible modules: Partition -> multiplicity."""

    def __init__(self, items=None):
        super().__init__()
        for lam, m in (dict(items).items() if items else []):
            self.add(lam, m)

    def add(self, lam, m: int = 1):
        lam = Partition(lam)
        total = self.get(lam, 0) + m
        if total:
            self[lam] = total
        else:
            self.pop(lam, None)

    def __add__(self, other: "Decomp") -> "Decomp":
        out = Decomp(self)
        for lam, m in other.items():
            out.add(lam, m)
        return out

    def scaled(self, k: int) -> "Decomp":
        return Decomp({lam: k * m for lam, m in self.items()})

    def sorted_items(self) -> List[Tuple[Partition, int]]:
        return sorted(self.items(), key=lambda kv: (-kv[0].size, [-p for p in kv[0]]))

    def truncated(self, d: int) -> Tuple["Decomp", int]:
        """Drop modules with more than d rows; return the kept part and the dropped count."""
        kept = Decomp({lam: m for lam, m in self.items() if len(lam) <= d})
        dropped = sum(m for lam, m in self.items() if len(lam) > d)
        return kept, dropped

    def total(self) -> int:
        return sum(self.values())

    def dimension(self, d: int) -> int:
        return sum(m * weyl_dim(lam, d) for lam, m in self.items())

    def character(self, d: int) -> Poly:
        space = series_space(d)
        result = space.zero
        for lam, m in self.items():
            if len(lam) <= d:
                result += schur_poly(lam, d) * m
        return result

    def to_frame(self, d: Optional[int] = None) -> pd.DataFrame:
        rows = []
        for lam, m in self.sorted_items():
            row = {'module': f"W{lam.label()}", 'multiplicity': m}
            if d is not None:
                row['dim'] = weyl_dim(lam, d)
            rows.append(row)
        return pd.DataFrame(rows, columns=['module', 'multiplicity'] + (['dim'] if d is not None else []))

    def to_json(self) -> Dict[str, int]:
        return {str(lam): m for lam, m in self.sorted_items()}

    def __str__(self):
        if not self:
            return "0"
        return " + ".join(f"{m if m > 1 else ''}W{lam.label()}" for lam, m in self.sorted_items())


def is_symmetric(p: Poly, d: int) -> bool:
    for k in range(d - 1):
        swap = list(range(d))
        swap[k], swap[k + 1] = swap[k + 1], swap[k]
        if permute_variables(p, swap) != p:
            return False
    return True


def schur_decompose(p: Poly, d: int) -> Decomp:
    """Expand a symmetric polynomial in t_1..t_d in the Schur basis.

    Repeatedly strips the grlex leading term: for a symmetric polynomial it
    sits on a partition exponent lambda and its coefficient is the
    multiplicity of S_lambda.
    """
    space = series_space(d)
    space.check(p)
    if not is_symmetric(p, d):
        raise NotSymmetricError(f"polynomial in t1..t{d} is not symmetric")
    out = Decomp()
    rest = p
    while rest:
        monom, coeff = rest.LT
        lam = Partition([e for e in monom if e])
        if coeff.denominator != 1 or coeff < 0:
            raise SchurNegativeError(f"coefficient {coeff} at S{lam.label()}")
        out.add(lam, int(coeff))
        rest = rest - schur_poly(lam, d) * coeff
    return out
