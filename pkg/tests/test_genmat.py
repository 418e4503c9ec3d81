import pytest

from matrices import BACKEND_MAP, MatrixContext, get_backend
from matrices.genmat import (ContextError, DIAGONAL_FIRST, FULL_GENERIC, canonical_hwv_trace,
                             entry_map, literal_standard, make_context, standard_poly_matrix,
                             trace_of_word)
from matrices.numcheck import SamplePoint


def test_context_validation():
    with pytest.raises(ContextError):
        make_context(1)
    with pytest.raises(ContextError):
        make_context(3, "sparse")
    assert make_context(2, "diag").mode == DIAGONAL_FIRST
    assert make_context(2, "full").mode == FULL_GENERIC


def test_variable_counts(ctx3, ctx3_full):
    assert ctx3.variable_count == 2 + 2 * 8
    assert ctx3_full.variable_count == 3 * 8


def test_matrices_are_traceless(ctx3, ctx3_full):
    for ctx in (ctx3, ctx3_full):
        for i in range(1, 4):
            assert not ctx.matrix(i).trace()


def test_diagonal_first_matrix(ctx3):
    assert not ctx3.entry(1, 1, 2)
    assert not ctx3.entry(1, 3, 1)
    assert ctx3.entry(2, 1, 2)
    with pytest.raises(IndexError):
        ctx3.matrix(4)


def test_trace_is_cyclic(ctx3_full):
    assert trace_of_word(ctx3_full, (1, 2, 3)) == trace_of_word(ctx3_full, (2, 3, 1))
    assert trace_of_word(ctx3_full, (1, 2, 3)) != trace_of_word(ctx3_full, (1, 3, 2))
    with pytest.raises(ContextError):
        trace_of_word(ctx3_full, ())
    with pytest.raises(ContextError):
        trace_of_word(ctx3_full, (1,) * 9)


def test_cayley_hamilton_for_traceless_matrices(ctx3_full):
    # tr(x^4) = tr(x^2)^2 / 2 for a traceless 3x3 matrix
    t4 = trace_of_word(ctx3_full, (1, 1, 1, 1))
    t2 = trace_of_word(ctx3_full, (1, 1))
    assert 2 * t4 == t2 ** 2


def test_standard_polynomials(ctx3_full):
    s3 = standard_poly_matrix(ctx3_full, 3, (1, 2, 3))
    assert s3 == literal_standard(ctx3_full, (1, 2, 3))
    s2 = standard_poly_matrix(ctx3_full, 2, (1, 2))
    commutator = ctx3_full.add(ctx3_full.mul(ctx3_full.matrix(1), ctx3_full.matrix(2)),
                               ctx3_full.mul(ctx3_full.matrix(2), ctx3_full.matrix(1)), -1)
    assert s2 == commutator
    assert not s2.trace()
    assert ctx3_full.is_zero_matrix(ctx3_full.standard((1, 1, 2)))
    with pytest.raises(ContextError):
        standard_poly_matrix(ctx3_full, 6, (1, 2, 3, 1, 2, 3))
    with pytest.raises(ContextError):
        standard_poly_matrix(ctx3_full, 3, (1, 2))


def test_canonical_hwv_trace(ctx3):
    assert canonical_hwv_trace(ctx3, (2,)) == trace_of_word(ctx3, (1, 1))
    s3 = standard_poly_matrix(ctx3, 3, (1, 2, 3))
    assert canonical_hwv_trace(ctx3, (1, 1, 1)) == s3.trace()
    with pytest.raises(ContextError):
        canonical_hwv_trace(ctx3, (1, 1, 1, 1))


def test_entry_map(ctx3):
    mapping = entry_map(ctx3, 1, 2)
    assert len(mapping) == 8
    assert all(v.matrix == 2 for v in mapping)


def test_backend_registry():
    assert set(BACKEND_MAP) == {'symbolic', 'numeric'}
    assert isinstance(get_backend('symbolic', 2, mode=FULL_GENERIC), MatrixContext)
    assert get_backend('numeric', 3, seed=4).d == 3
    with pytest.raises(ValueError):
        get_backend('floating', 3)


def test_product_cache_is_bounded():
    bounded, reference = SamplePoint(2, seed=3), SamplePoint(2, seed=3)
    bounded.max_cache = 5
    words = [(1, 2, 1, 2), (2, 2, 1), (1, 1, 1, 2, 2), (2, 1, 2, 1, 1), (1, 2, 2, 2)]
    for word in words + words:
        assert bounded.trace_of_word(word) == reference.trace_of_word(word)
        assert bounded.cache_info()['products'] <= 5
    assert reference.cache_info()['products'] > 5
    bounded.clear_cache()
    assert bounded.cache_info() == {'products': 0, 'standard': 0}
