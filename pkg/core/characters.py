"""Decomposition calculus on GL_d-characters.

Every decomposition here is computed on characters (symmetric polynomials in
t_1..t_d) and read off with ``schur_decompose``; the combinatorial Young
rules are kept as an independent cross-check.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from core.mpoly import Poly, series_space
from core.partitions import Decomp, Partition, schur_decompose, schur_poly

logger = logging.getLogger(__name__)

# The generating module G of the trace algebra, one highest weight vector each.
GENERATORS = [Partition.parse(s) for s in (
    "1", "2", "3", "1,1,1", "2,2", "2,1,1", "3,1,1", "2,2,1", "1,1,1,1,1", "3,3", "3,1,1,1")]

MAX_OMEGA_DEGREE = 8
SCHUR_AUTO_LIMIT = 4

THRALL_KINDS = ("sym-square-row", "sym-square-col", "sym-algebra-of-W2")


@dataclass(frozen=True)
class SymPower:
    """The symmetric power Sym^q W(lam) as a tensor factor."""
    lam: Partition
    q: int


Factor = Union[Partition, SymPower, Tuple[int, ...]]


def schur(lam: Sequence[int], d: int) -> Poly:
    method = "bialternant" if d <= SCHUR_AUTO_LIMIT else "tableau"
    return schur_poly(Partition(lam), d, method)


def decompose(p: Poly, d: int) -> Decomp:
    return schur_decompose(p, d)


def generator_modules(d: int) -> List[Partition]:
    """Generators of the traceless part (everything but W(1)) with at most d rows."""
    return [lam for lam in GENERATORS if lam != (1,) and len(lam) <= d]


def _strips(lam: Partition, p: int, vertical: bool) -> Iterator[Partition]:
    parts = list(lam) + [0] * p
    n = len(parts)

    def grow(i: int, left: int, acc: List[int]):
        if i == n:
            if left == 0:
                yield Partition([x for x in acc if x])
            return
        cap = 1 if vertical else (left if i == 0 else parts[i - 1] - parts[i])
        for add in range(min(cap, left), -1, -1):
            new = parts[i] + add
            if i > 0 and new > acc[-1]:
                continue
            yield from grow(i + 1, left - add, acc + [new])

    yield from grow(0, p, [])


def young_rule_row(lam: Sequence[int], p: int, d: int) -> Decomp:
    """W(lam) (x) W(p): add a horizontal strip of p boxes."""
    out = Decomp()
    for mu in _strips(Partition(lam), p, vertical=False):
        if len(mu) <= d:
            out.add(mu)
    return out


def young_rule_col(lam: Sequence[int], p: int, d: int) -> Decomp:
    """W(lam) (x) W(1^p): add a vertical strip of p boxes."""
    out = Decomp()
    for mu in _strips(Partition(lam), p, vertical=True):
        if len(mu) <= d:
            out.add(mu)
    return out


def thrall(kind: str, p: int, d: int) -> Union[Decomp, Dict[int, Decomp]]:
    """Closed decompositions of Sym^2 W(p), Sym^2 W(1^p) and Sym W(2).

    For ``sym-algebra-of-W2`` the result maps q to Sym^q W(2) = sum of W(2mu), |mu| = q,
    for q = 0..p.
    """
    if kind == "sym-square-row":
        out = Decomp()
        for k in range(p // 2 + 1):
            out.add(Partition([x for x in (2 * p - 2 * k, 2 * k) if x]))
        return out.truncated(d)[0]
    if kind == "sym-square-col":
        out = Decomp()
        for k in range(p // 2 + 1):
            out.add(Partition([2] * (p - 2 * k) + [1] * (4 * k)))
        return out.truncated(d)[0]
    if kind == "sym-algebra-of-W2":
        graded = {}
        for q in range(p + 1):
            graded[q] = Decomp({mu.doubled(): 1 for mu in partitions_of(q)}).truncated(d)[0]
        return graded
    raise ValueError(f"unknown Thrall kind {kind!r}, expected one of {THRALL_KINDS}")


def partitions_of(n: int, largest: int = None) -> List[Partition]:
    """Partitions of n in decreasing lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        return [Partition(())]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return out


def sym_power_character(ch: Poly, q: int, d: int) -> Poly:
    """Character of Sym^q of a module with character ``ch``.

    A module whose weights are the monomials t^a with multiplicities m_a has
    symmetric algebra character prod_a (1 - u t^a)^(-m_a); this returns the
    coefficient of u^q.
    """
    space = series_space(d)
    space.check(ch)
    by_degree = [space.one] + [space.zero] * q
    for monom, coeff in ch.iterterms():
        if coeff.denominator != 1 or coeff < 0:
            raise ValueError(f"character coefficient {coeff} is not a nonnegative integer")
        m = int(coeff)
        gen = space.ring.from_dict({monom: 1})
        powers = [space.one]
        for _ in range(q):
            powers.append(powers[-1] * gen)
        new = []
        for k in range(q + 1):
            acc = space.zero
            for n in range(k + 1):
                if by_degree[k - n]:
                    acc += by_degree[k - n] * powers[n] * comb(n + m - 1, n)
            new.append(acc)
        by_degree = new
    return by_degree[q]


def factor_character(factor: Factor, d: int) -> Poly:
    if isinstance(factor, SymPower):
        return sym_power_character(schur(factor.lam, d), factor.q, d)
    return schur(factor, d)


def tensor_decompose(factors: Sequence[Factor], d: int) -> Decomp:
    """Decompose a tensor product of irreducibles and symmetric powers of irreducibles."""
    space = series_space(d)
    ch = space.one
    for factor in factors:
        ch = ch * factor_character(factor, d)
    return decompose(ch, d)


def det_twist(lam: Sequence[int], d: int) -> bool:
    """W_d(lam + 1^d) is W_d(1^d) (x) W_d(lam)."""
    lam = Partition(lam)
    if len(lam) > d:
        return False
    shifted = Partition([p + 1 for p in lam.padded(d)])
    return schur(shifted, d) == schur([1] * d, d) * schur(lam, d)


def generator_character(degree: int, d: int) -> Poly:
    space = series_space(d)
    ch = space.zero
    for lam in generator_modules(d):
        if lam.size == degree:
            ch += schur(lam, d)
    return ch


def _compositions(k: int) -> Iterator[Dict[int, int]]:
    """All (q_2..q_6) with sum i*q_i = k and at least two factors."""
    def rec(i: int, left: int, acc: Dict[int, int]):
        if i > 6:
            if left == 0 and sum(acc.values()) >= 2:
                yield dict(acc)
            return
        for q in range(left // i + 1):
            acc[i] = q
            yield from rec(i + 1, left - i * q, acc)
        acc.pop(i, None)

    yield from rec(2, k, {})


def omega2_truncation(k: int, d: int) -> Tuple[Decomp, int]:
    """Degree-k part of the square of the augmentation ideal of Sym(G), and the dropped count.

    For k <= 7 the product is formed with k variables (no partition of k is
    lost) and then truncated to d rows; degree 8 is only supported at d = 3.
    """
    if not 2 <= k <= MAX_OMEGA_DEGREE:
        raise ValueError(f"degree {k} outside 2..{MAX_OMEGA_DEGREE}")
    if k == MAX_OMEGA_DEGREE and d != 3:
        raise ValueError("degree 8 is only available for d = 3")
    d_eff = 3 if k == MAX_OMEGA_DEGREE else max(k, 2)
    space = series_space(d_eff)
    pieces = {i: generator_character(i, d_eff) for i in range(2, 7)}
    total = space.zero
    for comp in _compositions(k):
        term = space.one
        for i, q in comp.items():
            if q:
                term = term * sym_power_character(pieces[i], q, d_eff)
        total += term
    full = decompose(total, d_eff)
    kept, dropped = full.truncated(d)
    if dropped:
        logger.info(f"[characters] degree {k}, d={d}: dropped {dropped} modules with more than {d} rows")
    return kept, dropped


def omega2_component(k: int, d: int) -> Decomp:
    return omega2_truncation(k, d)[0]
