"""Abstract base class for 3x3 matrix backends.

A backend supplies the d matrices x_1..x_d with entries in some commutative
ring (polynomials in generic entries, or integers at a sample point); the
base class does all matrix arithmetic on top of that, with memoized prefix
products and standard polynomials. Each memo holds at most ``max_cache``
matrices; the oldest are dropped first.
"""

import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from catalog.expr import Atom, Unit

logger = logging.getLogger(__name__)

N = 3


@dataclass(frozen=True)
class GenericMatrix:
    """A 3x3 matrix over the backend's scalar ring."""
    entries: Tuple[Tuple[object, ...], ...]

    def __getitem__(self, pos):
        p, q = pos
        return self.entries[p][q]

    def trace(self):
        return self.entries[0][0] + self.entries[1][1] + self.entries[2][2]


class MatrixBackend(ABC):
    name: str = ""
    max_cache: int = 20000

    def __init__(self, d: int):
        self.d = d
        self._products: Dict[Tuple[Unit, ...], GenericMatrix] = {}
        self._standard: Dict[Tuple[int, ...], GenericMatrix] = {}
        self._lock = threading.Lock()

    @abstractmethod
    def matrix(self, i: int) -> GenericMatrix:
        """The i-th matrix x_i (1-based)."""
        pass

    @property
    @abstractmethod
    def zero(self):
        pass

    @property
    @abstractmethod
    def one(self):
        pass

    @abstractmethod
    def scalar(self, value):
        """Embed an int or Fraction into the scalar ring."""
        pass

    def _check_index(self, i: int):
        if not 1 <= i <= self.d:
            raise IndexError(f"[{self.name}] matrix index {i} outside 1..{self.d}")

    # ── matrix arithmetic ────────────────────────────────────────────────

    def zero_matrix(self) -> GenericMatrix:
        return GenericMatrix(tuple(tuple(self.zero for _ in range(N)) for _ in range(N)))

    def identity(self) -> GenericMatrix:
        return GenericMatrix(tuple(tuple(self.one if p == q else self.zero for q in range(N))
                                   for p in range(N)))

    def mul(self, a: GenericMatrix, b: GenericMatrix) -> GenericMatrix:
        rows = []
        for p in range(N):
            row = []
            for q in range(N):
                acc = self.zero
                for r in range(N):
                    x, y = a.entries[p][r], b.entries[r][q]
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            rows.append(tuple(row))
        return GenericMatrix(tuple(rows))

    def add(self, a: GenericMatrix, b: GenericMatrix, scale=1) -> GenericMatrix:
        return GenericMatrix(tuple(tuple(a.entries[p][q] + b.entries[p][q] * scale for q in range(N))
                                   for p in range(N)))

    def is_zero_matrix(self, m: GenericMatrix) -> bool:
        return all(not m.entries[p][q] for p in range(N) for q in range(N))

    # ── memoized building blocks ─────────────────────────────────────────

    def standard(self, args: Sequence[int]) -> GenericMatrix:
        """s_k(x_{a1},...,x_{ak}) by expansion along the first position."""
        args = tuple(args)
        if len(set(args)) < len(args):
            return self.zero_matrix()
        if len(args) == 1:
            return self.matrix(args[0])
        cached = self._standard.get(args)
        if cached is not None:
            return cached
        result = self.zero_matrix()
        for pos, a in enumerate(args):
            rest = args[:pos] + args[pos + 1:]
            term = self.mul(self.matrix(a), self.standard(rest))
            result = self.add(result, term, 1 if pos % 2 == 0 else -1)
        self._remember(self._standard, args, result)
        return result

    def unit_matrix(self, unit: Unit) -> GenericMatrix:
        kind = unit[0]
        if kind == "x":
            return self.matrix(unit[1])
        if kind == "s":
            return self.standard(unit[1])
        if kind == "c":
            return self.standard((unit[1], unit[2]))
        raise ValueError(f"[{self.name}] unknown unit {unit!r}")

    def product(self, units: Sequence[Unit]) -> GenericMatrix:
        """Left-to-right product with every prefix cached."""
        units = tuple(units)
        if not units:
            return self.identity()
        cached = self._products.get(units)
        if cached is not None:
            return cached
        result = self.mul(self.product(units[:-1]), self.unit_matrix(units[-1])) \
            if len(units) > 1 else self.unit_matrix(units[0])
        self._remember(self._products, units, result)
        return result

    def trace_atom(self, atom: Atom):
        return self.product(atom).trace()

    def trace_of_word(self, word: Sequence[int]):
        for i in word:
            self._check_index(i)
        return self.product(tuple(("x", i) for i in word)).trace()

    def _remember(self, cache: Dict, key, value: GenericMatrix):
        with self._lock:
            cache[key] = value
            while len(cache) > self.max_cache:
                del cache[next(iter(cache))]

    def cache_info(self) -> Dict[str, int]:
        return {'products': len(self._products), 'standard': len(self._standard)}

    def clear_cache(self):
        with self._lock:
            self._products.clear()
            self._standard.clear()


def entries_list(m: GenericMatrix) -> List[List[object]]:
    return [list(row) for row in m.entries]
