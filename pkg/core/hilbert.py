"""Hilbert series of the trace algebra of three 3x3 matrices and of its traceless part.

H(C33) = p/q with p a symmetric polynomial given by its expansion in the
elementary symmetric polynomials e1, e2, e3 and q a product of 22 factors
(1 - t^a). Removing tr(X1), tr(X2), tr(X3) multiplies by (1-t1)(1-t2)(1-t3),
which cancels three of the factors of q. The symmetric algebra on the
generating modules has a product formula; its difference with H(C0) is the
Hilbert series of the ideal of relations.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from core.characters import generator_modules, schur
from core.mpoly import (Poly, Series, VarId, elementary, series_expand_rational, series_space)
from core.partitions import Decomp, Partition, is_symmetric, schur_decompose

logger = logging.getLogger(__name__)

D = 3
DEFAULT_ORDER = 8
MAX_ORDER = 12

# (coefficient, e1 exponent, e2 exponent, e3 exponent)
Term = Tuple[int, int, int, int]

NUMERATOR_TERMS: List[Term] = [
    (1, 0, 0, 0), (-1, 0, 1, 0), (1, 0, 0, 1), (1, 1, 0, 1), (1, 0, 2, 0),
    (1, 2, 0, 1), (-1, 0, 1, 1), (-2, 1, 1, 1), (1, 0, 0, 2), (1, 0, 2, 1),
    (-1, 2, 1, 1), (2, 2, 0, 2), (1, 3, 0, 2), (1, 0, 2, 2), (-1, 2, 1, 2),
    (-1, 1, 0, 3), (-2, 1, 2, 2),
    # the printed "2e_2e_2e_3^3" sits here, see NUMERATOR_VARIANTS
    (-1, 0, 3, 2), (1, 3, 0, 3), (2, 2, 1, 3), (-2, 1, 0, 4), (-1, 2, 0, 4),
    (1, 1, 2, 3), (1, 0, 1, 4), (-1, 0, 3, 3), (-2, 0, 2, 5), (1, 1, 2, 4),
    (2, 1, 1, 5), (-1, 0, 0, 6), (-1, 0, 2, 5), (1, 1, 0, 6), (-1, 0, 1, 6),
    (-1, 2, 0, 6), (-1, 0, 0, 7), (1, 1, 0, 7), (-1, 0, 0, 8),
]

VERBATIM = "verbatim"
CORRECTED = "corrected"
FUNCTIONAL = "functional"
AUTO = "auto"

NUMERATOR_VARIANTS: Dict[str, Term] = {
    VERBATIM: (2, 0, 2, 3),     # 2 e2^2 e3^3, the literal reading
    CORRECTED: (2, 1, 1, 3),    # 2 e1 e2 e3^3
    FUNCTIONAL: (2, 0, 1, 3),   # 2 e2 e3^3, the partner of -2 e1 e3^4
}

# t^{(8,8,8)} p(1/t) = -p(t): the exponent of e3 in the top degree
FUNCTIONAL_DEGREE = 8

EXPECTED_KERNEL = {
    7: {Partition((3, 2, 2)): 1},
    8: {Partition((4, 3, 1)): 1, Partition((4, 2, 2)): 2, Partition((3, 3, 2)): 1},
}


class HilbertError(ValueError):
    """Raised when a series fails a positivity or decomposition requirement."""


def numerator_terms(variant: str = FUNCTIONAL) -> List[Term]:
    if variant not in NUMERATOR_VARIANTS:
        raise ValueError(f"unknown numerator variant {variant!r}, expected one of {list(NUMERATOR_VARIANTS)}")
    return NUMERATOR_TERMS[:17] + [NUMERATOR_VARIANTS[variant]] + NUMERATOR_TERMS[17:]


def numerator(variant: str = FUNCTIONAL) -> Poly:
    space = series_space(D)
    e1, e2, e3 = (elementary(space, k) for k in (1, 2, 3))
    p = space.zero
    for c, a, b, k in numerator_terms(variant):
        p += space.const(c) * e1 ** a * e2 ** b * e3 ** k
    return p


def _t(i: int) -> Poly:
    return series_space(D).gen(VarId.series(i))


def _factor(exponents: Tuple[int, int, int]) -> Poly:
    space = series_space(D)
    mono = space.one
    for i, e in enumerate(exponents, start=1):
        mono = mono * _t(i) ** e
    return space.one - mono


def denominator_factors(traceless: bool = False) -> List[Tuple[Poly, int]]:
    """The factors of q with multiplicities; ``traceless`` drops the three (1 - t_i)."""
    out: List[Tuple[Poly, int]] = []
    for i in range(D):
        for power in (1, 2, 3):
            if traceless and power == 1:
                continue
            exps = [0, 0, 0]
            exps[i] = power
            out.append((_factor(tuple(exps)), 1))
    for i in range(D):
        for j in range(i + 1, D):
            for a, b, mult in ((1, 1, 2), (2, 1, 1), (1, 2, 1)):
                exps = [0, 0, 0]
                exps[i], exps[j] = a, b
                out.append((_factor(tuple(exps)), mult))
    out.append((_factor((1, 1, 1)), 1))
    return out


def _check_order(order: int):
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"series order {order} outside 0..{MAX_ORDER}")


def c33_series(order: int = DEFAULT_ORDER, variant: str = FUNCTIONAL) -> Series:
    _check_order(order)
    return series_expand_rational(numerator(variant), denominator_factors(), order)


def c0_series(order: int = DEFAULT_ORDER, variant: str = FUNCTIONAL) -> Series:
    """H(C0) = (1-t1)(1-t2)(1-t3) H(C33); every coefficient must be nonnegative."""
    _check_order(order)
    series = series_expand_rational(numerator(variant), denominator_factors(traceless=True), order)
    for monom, coeff in series.body.iterterms():
        if coeff < 0:
            raise HilbertError(f"negative coefficient {coeff} at t^{monom} in H(C0), variant {variant}")
    return series


def generator_monomials(d: int = D) -> List[Tuple[Tuple[int, ...], int]]:
    """(exponent, multiplicity) for every monomial of the generating modules' characters."""
    out: Dict[Tuple[int, ...], int] = {}
    for lam in generator_modules(d):
        for monom, coeff in schur(lam, d).iterterms():
            out[monom] = out.get(monom, 0) + int(coeff)
    return sorted(out.items())


def symalg_series(order: int = DEFAULT_ORDER) -> Series:
    """prod over generator monomials t^a of 1/(1 - t^a)^m."""
    _check_order(order)
    space = series_space(D)
    factors = [(_factor(a), m) for a, m in generator_monomials(D) if sum(a) <= order]
    return series_expand_rational(space.one, factors, order)


@dataclass
class KernelSeries:
    order: int
    variant: str
    pieces: Dict[int, Poly] = field(default_factory=dict)
    decomps: Dict[int, Decomp] = field(default_factory=dict)

    def dimension(self, k: int) -> int:
        return self.decomps[k].dimension(D)

    def vanishes_below(self, k: int) -> bool:
        return all(not self.pieces[j] for j in range(min(k, self.order + 1)))

    def to_dict(self) -> dict:
        return {
            'order': self.order,
            'variant': self.variant,
            'h': {str(k): self.decomps[k].to_json() for k in sorted(self.decomps)},
            'dimensions': {str(k): self.dimension(k) for k in sorted(self.decomps)},
        }


def kernel_series(order: int = DEFAULT_ORDER, variant: str = FUNCTIONAL) -> KernelSeries:
    """Degree by degree H(S) - H(C0), each piece expanded in Schur functions."""
    difference = symalg_series(order) - c0_series(order, variant)
    result = KernelSeries(order=order, variant=variant)
    for k in range(order + 1):
        piece = difference.piece(k)
        result.pieces[k] = piece
        try:
            result.decomps[k] = schur_decompose(piece, D)
        except ValueError as e:
            raise HilbertError(f"degree {k} of the kernel series: {e}")
    logger.info(f"[hilbert] kernel series to order {order} ({variant}): "
                + ", ".join(f"h{k}={result.decomps[k]}" for k in range(order + 1) if result.pieces[k]))
    return result


def functional_equation_defect(variant: str) -> List[Tuple[Tuple[int, int, int], int, int]]:
    """Pairs violating t^(8,8,8) p(1/t) = -p(t).

    In the e-basis the map sends e1^a e2^b e3^c to e1^b e2^a e3^(8-a-b-c),
    so every coefficient must be minus the coefficient of its partner.
    Returns (monomial, coefficient, partner coefficient) per violation.
    """
    coeffs: Dict[Tuple[int, int, int], int] = {}
    for c, a, b, k in numerator_terms(variant):
        coeffs[(a, b, k)] = coeffs.get((a, b, k), 0) + c
    bad = []
    keys = set(coeffs)
    keys |= {(b, a, FUNCTIONAL_DEGREE - a - b - k) for a, b, k in coeffs}
    for a, b, k in sorted(keys):
        partner = (b, a, FUNCTIONAL_DEGREE - a - b - k)
        here, there = coeffs.get((a, b, k), 0), coeffs.get(partner, 0)
        if here != -there:
            bad.append(((a, b, k), here, there))
    return bad


@dataclass
class VariantReport:
    variant: str
    symmetric: bool = False
    nonnegative: bool = False
    low_degree_zero: bool = False
    kernel_matches: bool = False
    oracle_matches: Optional[bool] = None
    defects: int = 0
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [self.symmetric, self.nonnegative, self.low_degree_zero, self.kernel_matches]
        if self.oracle_matches is not None:
            checks.append(self.oracle_matches)
        return all(checks)

    def to_dict(self) -> dict:
        return {'variant': self.variant, 'symmetric': self.symmetric, 'nonnegative': self.nonnegative,
                'low_degree_zero': self.low_degree_zero, 'kernel_matches': self.kernel_matches,
                'oracle_matches': self.oracle_matches, 'functional_defects': self.defects,
                'errors': list(self.errors), 'passed': self.passed}


def check_variant(variant: str, order: int = DEFAULT_ORDER,
                  oracle: Optional[Dict[Tuple[int, ...], int]] = None) -> VariantReport:
    report = VariantReport(variant=variant, defects=len(functional_equation_defect(variant)))
    try:
        c33 = c33_series(order, variant)
        report.symmetric = all(is_symmetric(c33.piece(k), D) for k in range(order + 1))
        c0_series(order, variant)
        report.nonnegative = True
        kernel = kernel_series(order, variant)
        report.low_degree_zero = kernel.vanishes_below(7)
        report.kernel_matches = all(dict(kernel.decomps[k]) == want
                                    for k, want in EXPECTED_KERNEL.items() if k <= order)
        if oracle is not None:
            report.oracle_matches = all(int(c33.coefficient(alpha)) == dim for alpha, dim in oracle.items())
    except ValueError as e:
        logger.error(f"[hilbert] variant {variant}: {e}")
        report.errors.append(str(e))
    return report


def choose_variant(order: int = DEFAULT_ORDER, oracle: Optional[Dict[Tuple[int, ...], int]] = None
                   ) -> Tuple[str, List[VariantReport]]:
    """The passing variant with the fewest functional-equation defects."""
    reports = [check_variant(v, order, oracle) for v in NUMERATOR_VARIANTS]
    passing = [r for r in reports if r.passed] or reports
    chosen = min(passing, key=lambda r: (r.defects, list(NUMERATOR_VARIANTS).index(r.variant)))
    logger.info(f"[hilbert] numerator variant {chosen.variant}: "
                + "; ".join(f"{r.variant} passed={r.passed} defects={r.defects}" for r in reports))
    return chosen.variant, reports


def resolve_variant(variant: str = AUTO, order: int = DEFAULT_ORDER) -> str:
    if variant == AUTO:
        return choose_variant(order)[0]
    numerator_terms(variant)
    return variant


def kernel_dimension(k: int, order: int = DEFAULT_ORDER, variant: str = FUNCTIONAL) -> int:
    """dim of the degree-k relations of C0 at d = 3, from the kernel series."""
    return kernel_series(max(order, k), variant).dimension(k)
