"""Generator and relation counts as functions of the number of matrices d."""

from fractions import Fraction
from math import comb
from typing import Dict, List

import pandas as pd

from core.characters import GENERATORS
from core.partitions import Partition, weyl_dim

DEGREE7_RELATIONS = [Partition.parse(s) for s in (
    "4,1,1,1", "3,2,2", "3,2,1,1", "2,2,2,1", "2,2,1,1,1", "2,1,1,1,1,1")]
# (4,2,2) carries two copies of the relation module
DEGREE8_RELATIONS = {Partition.parse("4,3,1"): 1, Partition.parse("4,2,2"): 2, Partition.parse("3,3,2"): 1}


def g_closed(k: int, d: int) -> int:
    """Dimension of the degree-k generators, closed form."""
    forms = {
        1: Fraction(d),
        2: Fraction((d + 1) * d, 2),
        3: Fraction(d * (d * d + 2), 3),
        4: Fraction((d + 1) * d * (d - 1) * (5 * d - 6), 24),
        5: Fraction(d * (d - 1) * (d - 2) * (3 * d * d + 4 * d + 6), 30),
        6: Fraction((d + 2) * (d + 1) * d * (d - 1) * (d * d - 3 * d + 4), 48),
    }
    return int(forms[k])


def g_total_closed(d: int) -> int:
    return int(Fraction(d * (5 * d ** 5 + 19 * d ** 4 - 5 * d ** 3 + 65 * d ** 2 + 636), 240))


def g_dimsum(k: int, d: int) -> int:
    return sum(weyl_dim(lam, d) for lam in GENERATORS if lam.size == k)


def generator_dims_closed(d: int) -> Dict[Partition, int]:
    """Binomial closed forms for the eleven generator modules.

    W(3^2) is C(d+2,4)C(d+1,2)/3; the coefficient 3 sometimes quoted for it
    overshoots by a factor of 9 (90 instead of 10 at d = 3).
    """
    values = [
        d,
        comb(d + 1, 2),
        comb(d + 2, 3),
        comb(d, 3),
        int(Fraction(d, 2) * comb(d + 1, 3)),
        3 * comb(d + 1, 4),
        6 * comb(d + 2, 5),
        d * comb(d + 1, 4),
        comb(d, 5),
        comb(d + 2, 4) * comb(d + 1, 2) // 3,
        10 * comb(d + 2, 6),
    ]
    return dict(zip(GENERATORS, values))


def r7_formula(d: int) -> Fraction:
    return Fraction(2 * (d + 1) * d * (d - 1) * (d - 2) * (41 * d ** 3 - 86 * d ** 2 + 114 * d - 360), 5040)


def r7_dimsum(d: int) -> int:
    return sum(weyl_dim(lam, d) for lam in DEGREE7_RELATIONS)


def r8_dimsum(d: int = 3) -> int:
    return sum(m * weyl_dim(lam, d) for lam, m in DEGREE8_RELATIONS.items())


def counts(d: int) -> dict:
    """g_1..g_6 (closed form and dimension sum), g, r7 both ways, r8 for d = 3."""
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    out = {'d': d}
    for k in range(1, 7):
        out[f'g{k}'] = g_closed(k, d)
        out[f'g{k}_dimsum'] = g_dimsum(k, d)
    out['g'] = g_total_closed(d)
    out['g_dimsum'] = sum(weyl_dim(lam, d) for lam in GENERATORS)
    formula = r7_formula(d)
    out['r7_formula'] = int(formula) if formula.denominator == 1 else str(formula)
    out['r7_dimsum'] = r7_dimsum(d)
    out['r7_agree'] = formula == out['r7_dimsum']
    if d == 3:
        out['r8'] = r8_dimsum(3)
    return out


def count_table(ds: List[int]) -> pd.DataFrame:
    return pd.DataFrame([counts(d) for d in ds]).set_index('d')
