"""Sparse multivariate polynomials with exact rational coefficients.

Polynomials are sympy ``PolyElement`` values over ``QQ`` in ``grlex`` order.
A ``VarSpace`` owns one ring and records what every generator stands for:
either an entry x_{pq}^{(i)} of a generic matrix or a series variable t_i.
The two kinds never share a ring.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

logger = logging.getLogger(__name__)

Poly = PolyElement

ENTRY = "entry"
SERIES = "series"


class VariableKindError(ValueError):
    """Raised when polynomials over different variable spaces are combined."""


class SeriesError(ValueError):
    """Raised when a denominator factor of a rational series is not 1 - m."""


@dataclass(frozen=True, order=True)
class VarId:
    kind: str
    matrix: int = 0
    row: int = 0
    col: int = 0
    index: int = 0

    @property
    def name(self) -> str:
        if self.kind == ENTRY:
            return f"x{self.matrix}_{self.row}{self.col}"
        return f"t{self.index}"

    @classmethod
    def entry(cls, matrix: int, row: int, col: int) -> "VarId":
        return cls(ENTRY, matrix=matrix, row=row, col=col)

    @classmethod
    def series(cls, index: int) -> "VarId":
        return cls(SERIES, index=index)


class VarSpace:
    """A polynomial ring together with the meaning of its generators."""

    def __init__(self, variables: Sequence[VarId]):
        kinds = {v.kind for v in variables}
        if len(kinds) > 1:
            raise VariableKindError(f"mixed variable kinds {sorted(kinds)}")
        self.kind = kinds.pop() if kinds else SERIES
        self.variables: Tuple[VarId, ...] = tuple(variables)
        self.ring = PolyRing([v.name for v in self.variables], QQ, grlex)
        self._index = {v: k for k, v in enumerate(self.variables)}

    def __len__(self):
        return len(self.variables)

    def __contains__(self, var: VarId) -> bool:
        return var in self._index

    def gen(self, var: VarId) -> Poly:
        return self.ring.gens[self._index[var]]

    def position(self, var: VarId) -> int:
        return self._index[var]

    @property
    def zero(self) -> Poly:
        return self.ring.zero

    @property
    def one(self) -> Poly:
        return self.ring.one

    def const(self, value) -> Poly:
        return self.ring(QQ(value.numerator, value.denominator)
                         if hasattr(value, 'denominator') else value)

    def check(self, *polys: Poly):
        for p in polys:
            if p.ring is not self.ring:
                raise VariableKindError(f"polynomial over {p.ring.symbols} used in {self.kind} space")


@lru_cache(maxsize=None)
def series_space(d: int) -> VarSpace:
    """The ring Q[t_1..t_d] with t_1 > t_2 > ... in grlex order."""
    return VarSpace([VarId.series(i) for i in range(1, d + 1)])


def _same_ring(a: Poly, b: Poly):
    if a.ring is not b.ring and a.ring != b.ring:
        raise VariableKindError(f"cannot combine {a.ring.symbols} with {b.ring.symbols}")


def poly_arith(a: Poly, b, op: str) -> Poly:
    """add, sub, mul or scale; ``b`` is a scalar for scale."""
    if op == "scale":
        return a * QQ(b.numerator, b.denominator) if hasattr(b, 'denominator') else a * b
    _same_ring(a, b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def substitute(p: Poly, space: VarSpace, mapping: Mapping[VarId, Poly]) -> Poly:
    """Simultaneous substitution; variables missing from ``mapping`` stay put."""
    if not mapping:
        return p
    for img in mapping.values():
        if isinstance(img, PolyElement):
            _same_ring(p, img)
    replacements = [(space.gen(v), img) for v, img in mapping.items()]
    return p.compose(replacements)


def derive(p: Poly, space: VarSpace, rule: Mapping[VarId, Poly]) -> Poly:
    """The derivation sending each variable v to rule[v] (0 when absent)."""
    result = space.zero
    for var, image in rule.items():
        if not image:
            continue
        dp = p.diff(space.gen(var))
        if dp:
            result += dp * image
    return result


def multihomogeneous_component(p: Poly, space: VarSpace, grading: Callable[[VarId], Hashable],
                               target: Mapping[Hashable, int]) -> Poly:
    """Sum of the terms of ``p`` whose degree in each group equals ``target``."""
    labels = [grading(v) for v in space.variables]
    terms = {}
    for monom, coeff in p.iterterms():
        degrees: Dict[Hashable, int] = {}
        for label, e in zip(labels, monom):
            if e:
                degrees[label] = degrees.get(label, 0) + e
        if all(degrees.get(k, 0) == target.get(k, 0) for k in set(degrees) | set(target)):
            terms[monom] = coeff
    return space.ring.from_dict(terms) if terms else space.zero


def multidegree(p: Poly, space: VarSpace, grading: Callable[[VarId], Hashable]) -> Optional[Dict[Hashable, int]]:
    """Common multidegree of all terms, or None if ``p`` is not multihomogeneous."""
    labels = [grading(v) for v in space.variables]
    found = None
    for monom in p.itermonoms():
        degrees: Dict[Hashable, int] = {}
        for label, e in zip(labels, monom):
            if e:
                degrees[label] = degrees.get(label, 0) + e
        if found is None:
            found = degrees
        elif degrees != found:
            return None
    return found if found is not None else {}


def total_degree(monom: Tuple[int, ...]) -> int:
    return sum(monom)


def truncate(p: Poly, order: int) -> Poly:
    terms = {m: c for m, c in p.iterterms() if sum(m) <= order}
    return p.ring.from_dict(terms) if terms else p.ring.zero


def homogeneous_part(p: Poly, degree: int) -> Poly:
    terms = {m: c for m, c in p.iterterms() if sum(m) == degree}
    return p.ring.from_dict(terms) if terms else p.ring.zero


def permute_variables(p: Poly, perm: Sequence[int]) -> Poly:
    """Rename generator k to generator perm[k]."""
    terms = {}
    for monom, coeff in p.iterterms():
        new = [0] * len(monom)
        for k, e in enumerate(monom):
            new[perm[k]] = e
        terms[tuple(new)] = coeff
    return p.ring.from_dict(terms) if terms else p.ring.zero


def elementary(space: VarSpace, k: int) -> Poly:
    """Elementary symmetric polynomial e_k of the generators."""
    result = space.zero
    for combo in combinations(space.ring.gens, k):
        term = space.one
        for g in combo:
            term = term * g
        result += term
    return result


@dataclass
class Series:
    """Power series truncated at total degree ``order``."""
    body: Poly
    order: int

    def __post_init__(self):
        self.body = truncate(self.body, self.order)

    def __mul__(self, other: "Series") -> "Series":
        order = min(self.order, other.order)
        return Series(_mul_truncated(self.body, other.body, order), order)

    def __sub__(self, other: "Series") -> "Series":
        return Series(self.body - other.body, min(self.order, other.order))

    def __add__(self, other: "Series") -> "Series":
        return Series(self.body + other.body, min(self.order, other.order))

    def piece(self, degree: int) -> Poly:
        if degree > self.order:
            raise ValueError(f"degree {degree} beyond series order {self.order}")
        return homogeneous_part(self.body, degree)

    def coefficient(self, exponents: Sequence[int]):
        return self.body.get(tuple(exponents), QQ(0))

    def to_dict(self) -> Dict[str, int]:
        return {",".join(str(e) for e in m): _plain(c) for m, c in sorted(self.body.iterterms())}


def _plain(c):
    return int(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mul_truncated(a: Poly, b: Poly, order: int) -> Poly:
    ring = a.ring
    terms: Dict[Tuple[int, ...], object] = {}
    b_terms = [(m, c, sum(m)) for m, c in b.iterterms()]
    for ma, ca in a.iterterms():
        da = sum(ma)
        if da > order:
            continue
        for mb, cb, db in b_terms:
            if da + db > order:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            terms[m] = terms.get(m, QQ(0)) + ca * cb
    return ring.from_dict({m: c for m, c in terms.items() if c}) if terms else ring.zero


def series_power(p: Poly, n: int, order: int) -> Poly:
    result = p.ring.one
    for _ in range(n):
        result = _mul_truncated(result, p, order)
    return result


def geometric_inverse(factor: Poly, order: int) -> Poly:
    """1/factor as a truncated series; factor must have constant term 1."""
    ring = factor.ring
    zero_monom = (0,) * ring.ngens
    if factor.get(zero_monom, QQ(0)) != 1:
        raise SeriesError(f"factor {factor} does not have constant term 1")
    rest = ring.one - factor
    if not rest:
        return ring.one
    low = min(sum(m) for m in rest.itermonoms())
    if low == 0:
        raise SeriesError(f"factor {factor} has a non-constant part of degree 0")
    result = ring.one
    power = ring.one
    for _ in range(order // low):
        power = _mul_truncated(power, rest, order)
        if not power:
            break
        result += power
    return result


def series_expand_rational(numer: Poly, denom_factors: Iterable[Tuple[Poly, int]], order: int) -> Series:
    """Expand numer / prod(f^m) to total degree ``order``."""
    body = truncate(numer, order)
    for factor, mult in denom_factors:
        inverse = geometric_inverse(factor, order)
        body = _mul_truncated(body, series_power(inverse, mult, order), order)
    return Series(body, order)


def evaluate_at_one(p: Poly):
    """Sum of coefficients (all variables set to 1)."""
    return sum((c for c in p.itercoeffs()), QQ(0))


def coefficient_vector(polys: List[Poly]) -> Tuple[List[Tuple[int, ...]], List[List]]:
    """Monomial support of ``polys`` and the matrix (monomials x polys) of coefficients."""
    monoms = sorted({m for p in polys for m in p.itermonoms()}, reverse=True)
    rows = [[p.get(m, QQ(0)) for p in polys] for m in monoms]
    return monoms, rows
