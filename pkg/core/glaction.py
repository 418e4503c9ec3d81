"""GL_d action on trace polynomials: polarization operators and highest weight vectors.

Two equivalent handles on the upper unipotent part of GL_d:

* ``delta`` -- the derivation D_ij sending x_j to x_i and every other
  matrix to 0 (on entries: the entry variables of x_j go to the matching
  entries of x_i);
* ``g`` -- the substitution x_j -> x_i + x_j, which equals exp(D_ij).

A multihomogeneous polynomial of multidegree lambda is a highest weight
vector iff it is killed by every D_ij with i < j, equivalently fixed by
every g_ij.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, List, Sequence, Tuple

from sympy.polys.domains import QQ

from catalog.evaluate import (AtomPoly, atoms_to_expr, canonical_atom, expand, multidegree_of,
                              reduce_to_atoms, standard_unit)
from catalog.expr import unit_letters
from core.exactnum import RowCompressor
from core.mpoly import Poly, derive, multidegree, substitute
from core.partitions import Partition, Tableau, ssyt_enumerate, weyl_dim
from matrices.genmat import MatrixContext, entry_map

logger = logging.getLogger(__name__)

DELTA = "delta"
G = "g"
METHODS = (DELTA, G, "both")


class MultidegreeError(ValueError):
    """Raised when a polynomial does not have the multidegree of the weight in question."""


class TableauError(RuntimeError):
    """Raised when the tableau vectors of a module do not match its Weyl dimension."""


@dataclass(frozen=True)
class PolarizationOp:
    kind: str
    i: int
    j: int

    def __post_init__(self):
        if self.kind not in (DELTA, G):
            raise ValueError(f"unknown polarization kind {self.kind!r}")
        if not 1 <= self.i < self.j:
            raise ValueError(f"polarization needs 1 <= i < j, got i={self.i} j={self.j}")

    def __str__(self):
        return f"{'D' if self.kind == DELTA else 'g'}_{self.i}{self.j}"


def upper_pairs(d: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1)]


def apply_polarization(op: PolarizationOp, p: Poly, ctx: MatrixContext) -> Poly:
    ctx._check_index(op.j)
    if op.kind == DELTA:
        return derive(p, ctx.space, entry_map(ctx, op.i, op.j))
    mapping = {v: ctx.space.gen(v) + img for v, img in entry_map(ctx, op.i, op.j).items()}
    return substitute(p, ctx.space, mapping)


def exp_delta(p: Poly, i: int, j: int, ctx: MatrixContext) -> Poly:
    """sum_k D_ij^k p / k!; agrees with g_ij p since D_ij is locally nilpotent."""
    op = PolarizationOp(DELTA, i, j)
    total = p
    term = p
    k = 1
    while True:
        term = apply_polarization(op, term, ctx)
        if not term:
            return total
        term = term.mul_ground(QQ(1, k))
        total += term
        k += 1


def _check_multidegree(p: Poly, weight: Sequence[int], ctx: MatrixContext):
    want = {i + 1: e for i, e in enumerate(weight) if e}
    found = multidegree(p, ctx.space, ctx.grading)
    if found != want:
        raise MultidegreeError(f"multidegree {found} does not match weight {tuple(weight)}")


def is_hwv(p: Poly, weight: Sequence[int], ctx: MatrixContext, method: str = DELTA,
           workers: int = 1) -> bool:
    """True iff ``p`` is a highest weight vector of the given weight.

    The weight is taken as given (not sorted), so tr(x2^2) tested against
    (0, 2) fails on D_12 rather than on its multidegree.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    if not p:
        return True
    _check_multidegree(p, weight, ctx)
    kinds = [DELTA, G] if method == "both" else [method]
    ops = [PolarizationOp(kind, i, j) for kind in kinds for i, j in upper_pairs(ctx.d)]

    def killed(op: PolarizationOp) -> bool:
        image = apply_polarization(op, p, ctx)
        return not (image if op.kind == DELTA else image - p)

    if workers <= 1:
        results = [killed(op) for op in ops]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(killed, ops))
    for op, ok in zip(ops, results):
        if not ok:
            logger.debug(f"[glaction] {op} does not kill the candidate of weight {tuple(weight)}")
            return False
    return True


# ── occurrence rewriting on trace atoms ──────────────────────────────────

Position = Tuple[int, int, int]


def _factors(mono) -> List:
    return [atom for atom, e in mono for _ in range(e)]


def _positions(factors: List, letter: int) -> List[Position]:
    out = []
    for f, atom in enumerate(factors):
        for u, unit in enumerate(atom):
            for a, i in enumerate(unit_letters(unit)):
                if i == letter:
                    out.append((f, u, a))
    return out


def _rebuild(factors: List, changes: Dict[Position, int]) -> AtomPoly:
    """Product of the factors with the letters at ``changes`` replaced."""
    sign = 1
    result = AtomPoly.constant(1)
    for f, atom in enumerate(factors):
        word = []
        for u, unit in enumerate(atom):
            letters = [changes.get((f, u, a), i) for a, i in enumerate(unit_letters(unit))]
            if unit[0] == "x":
                word.append(("x", letters[0]))
                continue
            s, new = standard_unit(letters)
            if new is None:
                return AtomPoly()
            sign *= s
            word.append(new)
        canon = canonical_atom(tuple(word))
        if canon is None:
            return AtomPoly()
        result = result * AtomPoly.atom(canon)
    return AtomPoly({m: c * sign for m, c in result.items()})


def linearize(expr, i: int, new: int):
    """Image of ``expr`` under the derivation x_i -> x_new (one occurrence at a time).

    tr(x1^2) linearizes in x1 to 2 tr(x1 x2); u(x1,x2) linearizes in x2
    to 2 v(x1,x2,x3).
    """
    if i == new:
        raise ValueError("linearization needs a fresh letter")
    poly = reduce_to_atoms(expr)
    out = AtomPoly()
    for mono, c in poly.items():
        factors = _factors(mono)
        for pos in _positions(factors, i):
            out = out.add(_rebuild(factors, {pos: new}), c)
    return atoms_to_expr(out)


def _row_fillings(positions: List[Position], content: Dict[int, int]):
    """Every way to relabel the occurrences with exactly ``content`` letters."""
    letters = [q for q in sorted(content) for _ in range(content[q])]
    if len(letters) != len(positions):
        raise MultidegreeError(f"{len(positions)} occurrences cannot carry content {content}")
    for perm in set(permutations(letters)):
        yield dict(zip(positions, perm))


def tableau_vector(hwv_expr, tableau: Tableau):
    """Polarize a highest weight vector along one semistandard tableau.

    Each x_i is replaced by the sum of x_q over the entries q of row i,
    keeping only the part where every q appears as often as it does in
    that row.
    """
    poly = reduce_to_atoms(hwv_expr)
    out = AtomPoly()
    for mono, c in poly.items():
        factors = _factors(mono)
        per_row = []
        for r in range(len(tableau.rows)):
            per_row.append(list(_row_fillings(_positions(factors, r + 1), tableau.content(r))))
        for combo in product(*per_row):
            changes: Dict[Position, int] = {}
            for part in combo:
                changes.update(part)
            out = out.add(_rebuild(factors, changes), c)
    return atoms_to_expr(out)


def tableau_basis(hwv_expr, lam: Sequence[int], d: int) -> List:
    """One vector per semistandard tableau of shape lambda in 1..d; a basis of W_d(lambda)."""
    from matrices.numcheck import numeric_hwv_screen

    lam = Partition(lam)
    found = multidegree_of(hwv_expr)
    want = {i + 1: e for i, e in enumerate(lam) if e}
    if found is None or {k: v for k, v in found.items() if v} != want:
        raise MultidegreeError(f"expression has multidegree {found}, not {lam.label()}")
    if not numeric_hwv_screen(hwv_expr, max(d, len(lam))):
        raise ValueError(f"expression is not a highest weight vector of weight {lam.label()}")
    tableaux = ssyt_enumerate(lam, d)
    basis = [tableau_vector(hwv_expr, t) for t in tableaux]
    if len(basis) != weyl_dim(lam, d):
        raise TableauError(f"{len(basis)} tableaux for {lam.label()} at d={d}, expected {weyl_dim(lam, d)}")
    logger.debug(f"[glaction] tableau basis of {lam.label()} at d={d}: {len(basis)} vectors")
    return basis


def hwv_ansatz_solve(terms: Sequence, lam: Sequence[int], ctx: MatrixContext,
                     workers: int = 1) -> List[List[int]]:
    """Coefficient vectors z with sum z_k terms_k fixed by every g_ij, i < j.

    Every term must have multidegree lambda. The answer is a primitive
    integer basis of the solution space.
    """
    lam = Partition(lam)
    polys = [expand(t, ctx, workers) for t in terms]
    for k, p in enumerate(polys):
        if p:
            _check_multidegree(p, lam, ctx)
        else:
            logger.debug(f"[glaction] ansatz term {k} vanishes identically")
    compressor = RowCompressor(len(polys))

    def moved(pair: Tuple[int, int]) -> List[Poly]:
        op = PolarizationOp(G, *pair)
        return [apply_polarization(op, p, ctx) - p for p in polys]

    pairs = upper_pairs(ctx.d)
    if workers <= 1:
        images = [moved(pair) for pair in pairs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            images = list(executor.map(moved, pairs))
    for diffs in images:
        if compressor.full:
            break
        columns: Dict[Tuple[int, ...], Dict[int, object]] = {}
        for k, diff in enumerate(diffs):
            for monom, coeff in diff.iterterms():
                columns.setdefault(monom, {})[k] = coeff
        for monom in sorted(columns):
            row = [columns[monom].get(k, 0) for k in range(len(polys))]
            compressor.add(row)
            if compressor.full:
                break
    solutions = compressor.nullspace()
    logger.info(f"[glaction] ansatz of {len(polys)} terms for {lam.label()}: "
                f"rank {compressor.rank}, {len(solutions)} solutions")
    return solutions

