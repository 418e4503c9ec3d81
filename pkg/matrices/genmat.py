"""Generic traceless 3x3 matrices with polynomial entries.

In diagonal-first mode x_1 = diag(a, b, -a-b) in two fresh variables;
every other matrix has eight free entries and x_33 = -(x_11 + x_22).
Since every traceless x_1 with distinct eigenvalues is conjugate to a
diagonal one, zero-testing of conjugation invariants is unaffected.
Full-generic mode gives every matrix eight free entries.
"""

import logging
from itertools import permutations
from typing import Dict, List, Sequence

from core.mpoly import Poly, VarId, VarSpace
from core.partitions import Partition, perm_sign
from matrices.base import GenericMatrix, MatrixBackend, N

logger = logging.getLogger(__name__)

DIAGONAL_FIRST = "diagonal-first"
FULL_GENERIC = "full-generic"
MODES = (DIAGONAL_FIRST, FULL_GENERIC)
MODE_ALIASES = {'diag': DIAGONAL_FIRST, 'full': FULL_GENERIC,
                DIAGONAL_FIRST: DIAGONAL_FIRST, FULL_GENERIC: FULL_GENERIC}

MAX_STANDARD = 5
MAX_WORD = 8

FREE_POSITIONS = [(p, q) for p in range(1, N + 1) for q in range(1, N + 1) if (p, q) != (N, N)]


class ContextError(ValueError):
    """Raised for an invalid matrix context or request."""


def _variables(d: int, mode: str) -> List[VarId]:
    out = []
    for i in range(1, d + 1):
        if i == 1 and mode == DIAGONAL_FIRST:
            out += [VarId.entry(1, 1, 1), VarId.entry(1, 2, 2)]
        else:
            out += [VarId.entry(i, p, q) for p, q in FREE_POSITIONS]
    return out


class MatrixContext(MatrixBackend):
    """d generic traceless matrices over Q[entries]."""
    name = "symbolic"

    def __init__(self, d: int, mode: str = DIAGONAL_FIRST):
        if d < 2:
            raise ContextError(f"need at least 2 matrices, got d={d}")
        if mode not in MODE_ALIASES:
            raise ContextError(f"unknown mode {mode!r}, expected one of {MODES}")
        super().__init__(d)
        self.mode = MODE_ALIASES[mode]
        self.space = VarSpace(_variables(d, self.mode))
        self._matrices = [self._build(i) for i in range(1, d + 1)]
        logger.debug(f"[genmat] d={d} {self.mode}: {len(self.space)} variables")

    def _build(self, i: int) -> GenericMatrix:
        space = self.space
        if i == 1 and self.mode == DIAGONAL_FIRST:
            a = space.gen(VarId.entry(1, 1, 1))
            b = space.gen(VarId.entry(1, 2, 2))
            z = space.zero
            return GenericMatrix(((a, z, z), (z, b, z), (z, z, -a - b)))
        rows = []
        for p in range(1, N + 1):
            row = []
            for q in range(1, N + 1):
                if (p, q) == (N, N):
                    row.append(-space.gen(VarId.entry(i, 1, 1)) - space.gen(VarId.entry(i, 2, 2)))
                else:
                    row.append(space.gen(VarId.entry(i, p, q)))
            rows.append(tuple(row))
        m = GenericMatrix(tuple(rows))
        if m.trace():
            raise ContextError(f"matrix x{i} is not traceless")
        return m

    def matrix(self, i: int) -> GenericMatrix:
        self._check_index(i)
        return self._matrices[i - 1]

    @property
    def zero(self) -> Poly:
        return self.space.zero

    @property
    def one(self) -> Poly:
        return self.space.one

    def scalar(self, value) -> Poly:
        return self.space.const(value)

    @property
    def variable_count(self) -> int:
        return len(self.space)

    @staticmethod
    def grading(var: VarId) -> int:
        return var.matrix

    def entry(self, i: int, p: int, q: int) -> Poly:
        """Entry (p, q) of x_i, 1-based."""
        return self.matrix(i)[(p - 1, q - 1)]

    def variables_of(self, i: int) -> List[VarId]:
        return [v for v in self.space.variables if v.matrix == i]


def make_context(d: int, mode: str = DIAGONAL_FIRST) -> MatrixContext:
    return MatrixContext(d, mode)


def trace_of_word(ctx: MatrixContext, word: Sequence[int]) -> Poly:
    if not word:
        raise ContextError("empty word")
    if len(word) > MAX_WORD:
        raise ContextError(f"word of length {len(word)} exceeds {MAX_WORD}")
    return ctx.trace_of_word(word)


def standard_poly_matrix(ctx: MatrixContext, k: int, args: Sequence[int]) -> GenericMatrix:
    if not 2 <= k <= MAX_STANDARD:
        raise ContextError(f"standard polynomial degree {k} outside 2..{MAX_STANDARD}")
    if len(args) != k:
        raise ContextError(f"s_{k} needs {k} arguments, got {len(args)}")
    for i in args:
        ctx._check_index(i)
    return ctx.standard(tuple(args))


def literal_standard(ctx: MatrixContext, args: Sequence[int]) -> GenericMatrix:
    """s_k as the plain alternating sum over all k! orderings."""
    result = ctx.zero_matrix()
    for perm in permutations(range(len(args))):
        prod = ctx.identity()
        for j in perm:
            prod = ctx.mul(prod, ctx.matrix(args[j]))
        result = ctx.add(result, prod, perm_sign(perm))
    return result


def canonical_hwv_trace(ctx: MatrixContext, lam: Sequence[int]) -> Poly:
    """tr(s_{k1}(x_1..x_{k1}) ... s_{kp}(x_1..x_{kp})), k_j the column lengths of lambda."""
    lam = Partition(lam)
    if len(lam) > ctx.d:
        raise ContextError(f"{lam.label()} has more than d={ctx.d} rows")
    units = []
    for k in lam.columns():
        if k > MAX_STANDARD:
            raise ContextError(f"column of length {k} exceeds {MAX_STANDARD}")
        units.append(("x", 1) if k == 1 else ("s", tuple(range(1, k + 1))))
    return ctx.trace_atom(tuple(units))


def entry_map(ctx: MatrixContext, source: int, target: int) -> Dict[VarId, Poly]:
    """Each free entry variable of x_target paired with the same entry of x_source."""
    return {v: ctx.entry(source, v.row, v.col) for v in ctx.variables_of(target)}
