"""Relations among catalog highest weight vectors.

For a weight lambda the catalog lists candidates w_1..w_m, highest weight
vectors of the symmetric algebra on the generators. A relation of weight
lambda is a combination sum c_k w_k that vanishes on traceless generic
matrices. The combinations form the kernel of the coefficient matrix
(rows = monomials in the matrix entries, columns = candidates).

The search runs at d = number of rows of lambda; the multiplicity of the
module of relations does not change for larger d.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from catalog.evaluate import expand
from catalog.expr import linear_combination
from catalog.parser import CatalogSyntaxError, parse_expr
from catalog.store import CatalogMissingError, CatalogStore
from core.exactnum import RowCompressor, normalize, rank
from core.mpoly import Poly
from core.partitions import Partition, weyl_dim
from core.settings import load_config
from matrices.genmat import MatrixContext, make_context

logger = logging.getLogger(__name__)


class RelationError(RuntimeError):
    """Raised when a computed relation basis is inconsistent with the expected count or does not vanish."""


# Coefficients as printed, one list of vectors per weight. For (4,2,2) the
# two vectors only need to lie in the computed span.
PRINTED_RELATIONS: Dict[Partition, List[List[int]]] = {
    Partition((4, 1, 1, 1)): [[12, -15, -20]],
    Partition((3, 2, 2)): [[2, -1, 2, 0]],
    Partition((3, 2, 1, 1)): [[-6, 0, 10, -15, 0, 40]],
    Partition((2, 2, 2, 1)): [[12, 1]],
    Partition((2, 2, 1, 1, 1)): [[0, 1, 0]],
    Partition((2, 1, 1, 1, 1, 1)): [[2, -5]],
    Partition((3, 1, 1, 1, 1)): [],
    Partition((4, 3, 1)): [[-6, -18, 3, 0, 3, 0, -8]],
    # 4 * (1, -15, 3, 21/4, -5/2, 5/2, -3, 0, 2) and 2 * (0, -36, 6, 27/2, -6, 6, -9, 1, 6)
    Partition((4, 2, 2)): [[4, -60, 12, 21, -10, 10, -12, 0, 8],
                           [0, -72, 12, 27, -12, 12, -18, 2, 12]],
    Partition((3, 3, 2)): [[6, 2, -3, -3]],
}

RELATION_WEIGHTS = {
    7: [Partition(p) for p in ((4, 1, 1, 1), (3, 2, 2), (3, 2, 1, 1), (2, 2, 2, 1),
                                (2, 2, 1, 1, 1), (2, 1, 1, 1, 1, 1), (3, 1, 1, 1, 1))],
    8: [Partition(p) for p in ((4, 3, 1), (4, 2, 2), (3, 3, 2))],
}

# tr(x1^3)u(x2,x3) and its five companions; the hwv of weight (3,2,2) inside
# W(3) x W(2,2) is the combination (1,-2,-2,1,-1,1).
ANSATZ_322 = [
    "tr(x1^3)u(x2,x3)",
    "tr(x1^2x2)v(x3,x1,x2)",
    "tr(x1^2x3)v(x2,x1,x3)",
    "tr(x1x2^2)u(x1,x3)",
    "tr(x1(x2x3+x3x2))v(x1,x2,x3)",
    "tr(x1x3^2)u(x1,x2)",
]
ANSATZ_322_SOLUTION = [1, -2, -2, 1, -1, 1]


@dataclass
class RelationReport:
    lam: Partition
    d: int
    degree: int
    candidates: int
    nullspace: List[List[int]] = field(default_factory=list)
    printed: Optional[List[List[int]]] = None
    matched_printed: Optional[bool] = None
    rank: int = 0
    monomials: int = 0
    numeric_rank: Optional[int] = None
    mode: str = ""
    verified: bool = False
    wall_ms: int = 0
    errors: List[str] = field(default_factory=list)

    @property
    def nullity(self) -> int:
        return len(self.nullspace)

    @property
    def passed(self) -> bool:
        return self.verified and not self.errors and self.matched_printed is not False

    def to_dict(self) -> dict:
        return {
            'lambda': self.lam.label(),
            'd': self.d,
            'degree': self.degree,
            'candidates': self.candidates,
            'nullspace': [list(v) for v in self.nullspace],
            'printed': self.printed,
            'matched_paper': self.matched_printed,
            'rank': self.rank,
            'numeric_rank': self.numeric_rank,
            'matrix': [self.monomials, self.candidates],
            'mode': self.mode,
            'verified': self.verified,
            'errors': list(self.errors),
            'passed': self.passed,
            'wall_ms': self.wall_ms,
        }


def span_contains(basis: List[List[int]], vectors: List[List[int]], cols: int) -> bool:
    """True if every vector lies in the row span of ``basis``."""
    if not vectors:
        return True
    if not basis:
        return all(not any(v) for v in vectors)
    return rank(basis + vectors, cols=cols) == rank(basis, cols=cols)


def matches_printed(nullspace: List[List[int]], printed: List[List[int]], cols: int) -> bool:
    """Printed vectors span exactly the computed kernel (up to scaling for a single vector)."""
    if len(printed) != len(nullspace):
        return False
    if len(printed) == 1:
        a, b = normalize(nullspace[0]), normalize(printed[0])
        return a == b or a == [-x for x in b]
    return span_contains(nullspace, printed, cols)


class RelationFinder:
    def __init__(self, config_path: str = "config.yaml", store: Optional[CatalogStore] = None,
                 mode: Optional[str] = None, workers: Optional[int] = None):
        self.config = load_config(config_path)
        self.store = store or CatalogStore(config_path)
        self.mode = mode or self.config['matrices']['mode']
        self.workers = workers or int(self.config.get('workers', 1))
        num = self.config['numcheck']
        self.seed, self.bound, self.trials = int(num['seed']), int(num['bound']), int(num['trials'])
        self._contexts: Dict[tuple, MatrixContext] = {}

    def context(self, d: int, mode: Optional[str] = None) -> MatrixContext:
        key = (d, mode or self.mode)
        if key not in self._contexts:
            self._contexts[key] = make_context(d, key[1])
        return self._contexts[key]

    def _candidates(self, lam: Partition, degree: int, d: int):
        if lam.size != degree:
            raise ValueError(f"{lam.label()} has size {lam.size}, not degree {degree}")
        if len(lam) > d:
            raise ValueError(f"{lam.label()} has {len(lam)} rows, more than d={d}")
        entries = self.store.group(lam)
        if not entries:
            raise CatalogMissingError(f"no catalog entries for {lam.label()}")
        for e in entries:
            if not e.parses:
                raise CatalogSyntaxError(f"{e.label} does not parse: {e.error}")
        return entries

    def _expand_all(self, exprs: Sequence, ctx: MatrixContext) -> List[Poly]:
        """Expand candidates in parallel, ordered by submission index."""
        if self.workers <= 1 or len(exprs) == 1:
            return [expand(e, ctx) for e in exprs]
        results: Dict[int, Poly] = {}
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            futures = {executor.submit(expand, e, ctx): k for k, e in enumerate(exprs)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
        return [results[k] for k in range(len(exprs))]

    def _numeric_rank(self, exprs: Sequence, d: int) -> int:
        from matrices.numcheck import graded_dimension_estimate

        return graded_dimension_estimate(exprs, d, self.trials, self.seed, self.bound,
                                         workers=self.workers)

    def _vanishes(self, expr, d: int) -> bool:
        from matrices.numcheck import vanishes

        return vanishes(expr, d, self.trials, self.seed, self.bound)

    def find_relations(self, lam: Sequence[int], degree: int, d: int) -> RelationReport:
        """Kernel of the candidate expansion matrix, every vector re-verified."""
        start = time.time()
        lam = Partition(lam)
        entries = self._candidates(lam, degree, d)
        exprs = [e.expr for e in entries]
        report = RelationReport(lam=lam, d=d, degree=degree, candidates=len(entries), mode=self.mode)
        printed = PRINTED_RELATIONS.get(lam)
        if printed is not None:
            report.printed = [list(v) for v in printed]

        report.numeric_rank = self._numeric_rank(exprs, d)
        if report.numeric_rank == len(exprs):
            # independent at integer points, hence independent
            report.rank = report.numeric_rank
            report.verified = True
            logger.info(f"[relfinder] {lam.label()} d={d}: {len(exprs)} candidates, "
                        f"numerically independent, no relations")
        else:
            self._exact(report, exprs, d)

        if printed is not None and report.verified:
            report.matched_printed = matches_printed(report.nullspace, report.printed, len(exprs))
            if not report.matched_printed:
                logger.error(f"[relfinder] {lam.label()}: nullspace {report.nullspace} "
                             f"does not match printed {report.printed}")
        report.wall_ms = int((time.time() - start) * 1000)
        logger.info(f"[relfinder] {lam.label()} d={d}: nullity {report.nullity} in {report.wall_ms} ms")
        return report

    def _exact(self, report: RelationReport, exprs: Sequence, d: int):
        ctx = self.context(d)
        polys = self._expand_all(exprs, ctx)
        columns: Dict[tuple, Dict[int, object]] = {}
        for k, p in enumerate(polys):
            for monom, coeff in p.iterterms():
                columns.setdefault(monom, {})[k] = coeff
        report.monomials = len(columns)
        logger.info(f"[relfinder] {report.lam.label()} d={d}: {len(exprs)} candidates, "
                    f"{len(columns)} monomials")
        compressor = RowCompressor(len(exprs))
        for monom in sorted(columns):
            compressor.add([columns[monom].get(k, 0) for k in range(len(exprs))])
            if compressor.full:
                break
        report.rank = compressor.rank
        report.nullspace = [normalize(v) for v in compressor.nullspace()]

        report.verified = True
        for vec in report.nullspace:
            total = ctx.zero
            for c, p in zip(vec, polys):
                if c:
                    total += p * c
            combo = linear_combination(zip(vec, exprs))
            if total or not self._vanishes(combo, d):
                msg = f"vector {vec} does not vanish"
                logger.error(f"[relfinder] {report.lam.label()}: {msg}")
                report.errors.append(msg)
                report.verified = False

    def verify_relation(self, lam: Sequence[int], degree: int, d: int, coeffs: Sequence[int]) -> bool:
        """True iff sum coeffs_k w_k vanishes; a numeric screen decides the nonzero case."""
        lam = Partition(lam)
        entries = self._candidates(lam, degree, d)
        if len(coeffs) != len(entries):
            raise ValueError(f"{len(coeffs)} coefficients for {len(entries)} candidates of {lam.label()}")
        if not any(coeffs):
            return True
        combo = linear_combination(zip(coeffs, (e.expr for e in entries)))
        if not self._vanishes(combo, d):
            logger.info(f"[relfinder] {lam.label()} {list(coeffs)}: nonzero at a sample point")
            return False
        zero = not expand(combo, self.context(d), self.workers)
        logger.info(f"[relfinder] {lam.label()} {list(coeffs)}: exact expansion "
                    f"{'vanishes' if zero else 'is nonzero'}")
        return zero

    def no_low_degree_relations_check(self, d: int = 3, max_degree: int = 6) -> dict:
        """No relations below degree 7: kernel series for d = 3, catalog groups at their minimal d."""
        from core.hilbert import kernel_series, resolve_variant

        out = {'d': d, 'max_degree': max_degree, 'kernel_zero': None, 'groups': {}, 'errors': []}
        if d == 3:
            hcfg = self.config['hilbert']
            variant = resolve_variant(hcfg['variant'], max(max_degree, 1))
            out['kernel_zero'] = kernel_series(max_degree, variant).vanishes_below(max_degree + 1)
        for degree in range(4, max_degree + 1):
            for lam in self.store.weights(degree):
                try:
                    report = self.find_relations(lam, degree, max(d, len(lam)))
                    out['groups'][lam.label()] = report.nullity
                except ValueError as e:
                    logger.error(f"[relfinder] {lam.label()}: {e}")
                    out['errors'].append(f"{lam.label()}: {e}")
        out['passed'] = (out['kernel_zero'] is not False and not out['errors']
                         and all(n == 0 for n in out['groups'].values()))
        return out

    def relation_basis(self, lam: Sequence[int], degree: int, d: int) -> List:
        """Polarize each relation along every semistandard tableau; dim W_d(lambda) relations each."""
        from core.glaction import tableau_basis

        lam = Partition(lam)
        report = self.find_relations(lam, degree, d)
        if not report.nullspace:
            return []
        entries = self.store.group(lam)
        ctx = self.context(d)
        basis = []
        for vec in report.nullspace:
            relation = linear_combination(zip(vec, (e.expr for e in entries)))
            basis.extend(tableau_basis(relation, lam, d))
        expected = report.nullity * weyl_dim(lam, d)
        if len(basis) != expected:
            raise RelationError(f"{len(basis)} basis relations for {lam.label()}, expected {expected}")
        nonzero = [k for k, p in enumerate(self._expand_all(basis, ctx)) if p]
        if nonzero:
            raise RelationError(f"basis relations {nonzero} of {lam.label()} do not vanish")
        logger.info(f"[relfinder] {lam.label()} d={d}: {len(basis)} basis relations")
        return basis

    def relation_dimension(self, degree: int, d: int) -> int:
        """sum over weights with at most d rows of nullity times dim W_d(lambda)."""
        total = 0
        for lam in RELATION_WEIGHTS[degree]:
            if len(lam) <= d:
                total += self.find_relations(lam, degree, len(lam)).nullity * weyl_dim(lam, d)
        return total

    def solve_ansatz_322(self) -> List[List[int]]:
        from core.glaction import hwv_ansatz_solve

        terms = [parse_expr(t) for t in ANSATZ_322]
        return hwv_ansatz_solve(terms, (3, 2, 2), self.context(3), self.workers)


_default_finder: Optional[RelationFinder] = None


def default_finder() -> RelationFinder:
    global _default_finder
    if _default_finder is None:
        _default_finder = RelationFinder()
    return _default_finder


def find_relations(lam: Sequence[int], degree: int, d: int) -> RelationReport:
    return default_finder().find_relations(lam, degree, d)


def verify_relation(lam: Sequence[int], degree: int, d: int, coeffs: Sequence[int]) -> bool:
    return default_finder().verify_relation(lam, degree, d, coeffs)


def no_low_degree_relations_check(d: int = 3, max_degree: int = 6) -> dict:
    return default_finder().no_low_degree_relations_check(d, max_degree)


def relation_basis(lam: Sequence[int], degree: int, d: int) -> List:
    return default_finder().relation_basis(lam, degree, d)
