import pytest

from core.hilbert import (AUTO, CORRECTED, EXPECTED_KERNEL, FUNCTIONAL, NUMERATOR_VARIANTS, VERBATIM,
                          c0_series, c33_series, check_variant, choose_variant, denominator_factors,
                          functional_equation_defect, kernel_dimension, kernel_series, numerator,
                          numerator_terms, resolve_variant, symalg_series)
from core.partitions import Partition, is_symmetric


@pytest.fixture(scope="module")
def kernel():
    return kernel_series(8, FUNCTIONAL)


def test_numerator_is_symmetric_with_constant_one():
    for variant in NUMERATOR_VARIANTS:
        p = numerator(variant)
        assert is_symmetric(p, 3)
        assert p.get((0, 0, 0), 0) == 1
    assert len(numerator_terms()) == 37
    with pytest.raises(ValueError):
        numerator_terms("misprint")


def test_denominator_has_22_factors():
    assert sum(m for _, m in denominator_factors()) == 22
    assert sum(m for _, m in denominator_factors(traceless=True)) == 19


@pytest.mark.parametrize("alpha,dim", [
    ((0, 0, 0), 1),
    ((1, 0, 0), 1),
    ((2, 0, 0), 2),
    ((1, 1, 0), 2),
    ((3, 0, 0), 3),
    ((1, 1, 1), 6),
])
def test_c33_low_coefficients(alpha, dim):
    assert c33_series(4).coefficient(alpha) == dim


def test_c33_series_is_symmetric_in_every_degree():
    series = c33_series(6)
    for k in range(7):
        assert is_symmetric(series.piece(k), 3)


def test_traceless_series():
    c0 = c0_series(4)
    assert c0.coefficient((1, 0, 0)) == 0
    assert c0.coefficient((2, 0, 0)) == 1
    assert c0.coefficient((1, 1, 0)) == 1
    assert c0.coefficient((1, 1, 1)) == 2


def test_symmetric_algebra_series():
    s = symalg_series(4)
    assert s.coefficient((1, 0, 0)) == 0
    assert s.coefficient((2, 0, 0)) == 1
    assert s.coefficient((1, 1, 1)) == 2


def test_series_order_range():
    with pytest.raises(ValueError):
        c33_series(13)
    with pytest.raises(ValueError):
        symalg_series(-1)


def test_kernel_starts_in_degree_seven(kernel):
    assert kernel.vanishes_below(7)
    assert kernel.pieces[7]


def test_kernel_decomposition(kernel):
    for k, want in EXPECTED_KERNEL.items():
        assert dict(kernel.decomps[k]) == want
    assert kernel.dimension(7) == 3
    assert kernel.dimension(8) == 30
    assert kernel.to_dict()['dimensions'] == {str(k): kernel.dimension(k) for k in range(9)}
    assert kernel.to_dict()['h']['8'] == {"4,3,1": 1, "4,2,2": 2, "3,3,2": 1}


def test_kernel_dimension():
    assert kernel_dimension(7) == 3
    assert kernel_dimension(6, order=6) == 0


def test_functional_equation_defects():
    defects = {v: functional_equation_defect(v) for v in NUMERATOR_VARIANTS}
    # e1 e2 e3^3 is its own partner, so its coefficient would have to vanish
    assert ((1, 1, 3), 2, 2) in defects[CORRECTED]
    assert ((0, 2, 3), 2, 0) in defects[VERBATIM]
    assert not any(m in ((0, 1, 3), (1, 0, 4)) for m, _, _ in defects[FUNCTIONAL])
    assert len(defects[FUNCTIONAL]) < len(defects[CORRECTED]) < len(defects[VERBATIM])


def test_variants_agree_through_degree_eight():
    base = c33_series(8, FUNCTIONAL)
    for variant in (VERBATIM, CORRECTED):
        other = c33_series(8, variant)
        for k in range(9):
            assert other.piece(k) == base.piece(k)


def test_check_variant_with_oracle():
    good = check_variant(FUNCTIONAL, 4, oracle={(1, 1, 1): 6, (2, 0, 0): 2})
    assert good.passed
    assert good.oracle_matches
    bad = check_variant(FUNCTIONAL, 4, oracle={(1, 1, 1): 8})
    assert bad.oracle_matches is False
    assert not bad.passed
    assert bad.to_dict()['functional_defects'] == good.defects


def test_automatic_choice():
    chosen, reports = choose_variant(8)
    assert chosen == FUNCTIONAL
    assert [r.variant for r in reports] == list(NUMERATOR_VARIANTS)
    assert all(r.passed for r in reports)
    assert resolve_variant(AUTO, 8) == FUNCTIONAL
    assert resolve_variant(CORRECTED) == CORRECTED
    with pytest.raises(ValueError):
        resolve_variant("misprint")


def test_expected_kernel_keys():
    assert EXPECTED_KERNEL[7] == {Partition((3, 2, 2)): 1}
