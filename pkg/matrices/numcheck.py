"""Randomized numeric oracle: integer sample points and evaluation ranks.

A ``SamplePoint`` is a backend whose matrices are concrete integer 3x3
matrices, so every trace is an integer and every check is exact. Nothing
here is a proof: the oracle screens transcriptions and gates the exact
symbolic runs.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from catalog.evaluate import evaluate_atoms, multidegree_of, numeric_eval, reduce_to_atoms
from core.exactnum import rank
from matrices.base import GenericMatrix, MatrixBackend, N

logger = logging.getLogger(__name__)

DEFAULT_SEED = 1
DEFAULT_BOUND = 5
DEFAULT_TRIALS = 20

WordMonomial = Tuple[Tuple[int, ...], ...]


class SamplePoint(MatrixBackend):
    """d integer matrices with entries in [-bound, bound], traceless unless asked otherwise."""
    name = "numeric"

    def __init__(self, d: int, seed: int = DEFAULT_SEED, bound: int = DEFAULT_BOUND,
                 traceless: bool = True, matrices: Optional[List[GenericMatrix]] = None):
        super().__init__(d)
        self.seed = seed
        self.bound = bound
        self.traceless = traceless
        if matrices is not None:
            if len(matrices) != d:
                raise ValueError(f"expected {d} matrices, got {len(matrices)}")
            self._matrices = list(matrices)
        else:
            rng = random.Random(seed)
            self._matrices = [self._draw(rng) for _ in range(d)]

    def _draw(self, rng: random.Random) -> GenericMatrix:
        b = self.bound
        while True:
            rows = [[rng.randint(-b, b) for _ in range(N)] for _ in range(N)]
            if not self.traceless:
                break
            rows[2][2] = -(rows[0][0] + rows[1][1])
            if abs(rows[2][2]) <= b:
                break
        return GenericMatrix(tuple(tuple(r) for r in rows))

    def matrix(self, i: int) -> GenericMatrix:
        self._check_index(i)
        return self._matrices[i - 1]

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def scalar(self, value):
        return Fraction(value)

    def shifted(self, i: int, j: int) -> "SamplePoint":
        """The point with x_j replaced by x_i + x_j (the action of g_ij)."""
        self._check_index(i)
        self._check_index(j)
        mats = list(self._matrices)
        mats[j - 1] = self.add(self._matrices[j - 1], self._matrices[i - 1])
        return SamplePoint(self.d, self.seed, self.bound, self.traceless, matrices=mats)


def sample_points(d: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                  bound: int = DEFAULT_BOUND, traceless: bool = True) -> List[SamplePoint]:
    return [SamplePoint(d, seed + k, bound, traceless) for k in range(trials)]


def evaluate_monomial(monomial: WordMonomial, pt: SamplePoint) -> int:
    value = 1
    for word in monomial:
        value *= pt.trace_of_word(word)
    return value


def _evaluate_item(item, pt: SamplePoint):
    if isinstance(item, tuple):
        return evaluate_monomial(item, pt)
    return numeric_eval(item, pt)


def graded_dimension_estimate(generators: Sequence, d: int, trials: int = DEFAULT_TRIALS,
                              seed: int = DEFAULT_SEED, bound: int = DEFAULT_BOUND,
                              traceless: bool = True, workers: int = 1) -> int:
    """Rank of the (sample point x generator) evaluation matrix.

    ``generators`` are trace expressions or word monomials (tuples of letter
    words). The rank is a lower bound for the dimension of their span and
    equals it with overwhelming probability once there are enough points.
    """
    if not generators:
        return 0
    count = max(trials, len(generators) + 5)
    points = sample_points(d, count, seed, bound, traceless)
    rows: Dict[int, List] = {}

    def row(k: int):
        return [_evaluate_item(g, points[k]) for g in generators]

    if workers <= 1:
        rows = {k: row(k) for k in range(count)}
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(row, k): k for k in range(count)}
            for future in as_completed(futures):
                rows[futures[future]] = future.result()
    result = rank([rows[k] for k in range(count)], cols=len(generators))
    logger.debug(f"[numcheck] {len(generators)} generators at {count} points: rank {result}")
    return result


def vanishes(expr, d: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
             bound: int = DEFAULT_BOUND, traceless: bool = True) -> bool:
    """True if ``expr`` evaluates to 0 at every sample point."""
    atoms = reduce_to_atoms(expr)
    for pt in sample_points(d, trials, seed, bound, traceless):
        if evaluate_atoms(atoms, pt) != 0:
            return False
    return True


def numeric_hwv_screen(expr, d: int, trials: int = 3, seed: int = DEFAULT_SEED,
                       bound: int = DEFAULT_BOUND) -> bool:
    """g_ij-invariance of ``expr`` for all i < j <= d at a few sample points."""
    atoms = reduce_to_atoms(expr)
    for pt in sample_points(d, trials, seed, bound):
        base = evaluate_atoms(atoms, pt)
        for i in range(1, d + 1):
            for j in range(i + 1, d + 1):
                if evaluate_atoms(atoms, pt.shifted(i, j)) != base:
                    logger.debug(f"[numcheck] g_{i}{j} moves the value at seed {pt.seed}")
                    return False
    return True


# ── spanning sets of trace monomials ─────────────────────────────────────

def cyclic_words(content: Sequence[int], traceless: bool = True) -> List[Tuple[int, ...]]:
    """Necklaces (least rotations) of words whose letter multiplicities are ``content``."""
    letters = [i + 1 for i, e in enumerate(content) for _ in range(e)]
    if not letters or (traceless and len(letters) == 1):
        return []
    seen = set()
    for perm in set(permutations(letters)):
        seen.add(min(perm[k:] + perm[:k] for k in range(len(perm))))
    return sorted(seen)


def _sub_contents(alpha: Sequence[int]):
    ranges = [range(a + 1) for a in alpha]

    def rec(k: int, acc: List[int]):
        if k == len(ranges):
            if any(acc):
                yield tuple(acc)
            return
        for e in ranges[k]:
            yield from rec(k + 1, acc + [e])

    yield from rec(0, [])


def trace_monomials(multidegree: Sequence[int], traceless: bool = True) -> List[WordMonomial]:
    """Products of traces of words with total letter multiplicities ``multidegree``.

    These span the multidegree component of the trace algebra.
    """
    alpha = tuple(multidegree)
    words = []
    for content in _sub_contents(alpha):
        words.extend(cyclic_words(content, traceless))
    words.sort(key=lambda w: (len(w), w))

    def content_of(word):
        c = [0] * len(alpha)
        for i in word:
            c[i - 1] += 1
        return c

    contents = [content_of(w) for w in words]
    out: List[WordMonomial] = []

    def rec(start: int, left: List[int], acc: List[Tuple[int, ...]]):
        if not any(left):
            out.append(tuple(acc))
            return
        for k in range(start, len(words)):
            c = contents[k]
            if all(x <= y for x, y in zip(c, left)):
                rec(k, [y - x for x, y in zip(c, left)], acc + [words[k]])

    if any(alpha):
        rec(0, list(alpha), [])
    return out


def degree_monomials(degree: int, d: int, traceless: bool = True) -> List[WordMonomial]:
    """All trace monomials of total degree ``degree`` in d letters."""
    out: List[WordMonomial] = []

    def rec(k: int, left: int, acc: List[int]):
        if k == d - 1:
            out.extend(trace_monomials(acc + [left], traceless))
            return
        for e in range(left, -1, -1):
            rec(k + 1, left - e, acc + [e])

    rec(0, degree, [])
    return out


def multidegrees(total: int, d: int) -> List[Tuple[int, ...]]:
    out = []

    def rec(k: int, left: int, acc: List[int]):
        if k == d - 1:
            out.append(tuple(acc + [left]))
            return
        for e in range(left, -1, -1):
            rec(k + 1, left - e, acc + [e])

    rec(0, total, [])
    return out


def c33_oracle(max_degree: int = 4, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
               bound: int = DEFAULT_BOUND, workers: int = 1) -> Dict[Tuple[int, ...], int]:
    """Estimated dimension of every multidegree component of C_33 up to ``max_degree``."""
    out = {}
    for total in range(max_degree + 1):
        for alpha in multidegrees(total, 3):
            if total == 0:
                out[alpha] = 1
                continue
            monomials = trace_monomials(alpha, traceless=False)
            out[alpha] = graded_dimension_estimate(monomials, 3, trials, seed, bound,
                                                   traceless=False, workers=workers)
    logger.info(f"[numcheck] C33 oracle through degree {max_degree}: {len(out)} multidegrees")
    return out


def multidegree_matches(expr, lam: Sequence[int]) -> bool:
    found = multidegree_of(expr)
    if found is None:
        return False
    want = {i + 1: e for i, e in enumerate(lam) if e}
    return {k: v for k, v in found.items() if v} == want
