import pytest

from catalog.evaluate import expand, reduce_to_atoms
from catalog.parser import parse_expr
from core.glaction import (DELTA, G, MultidegreeError, PolarizationOp, apply_polarization, exp_delta,
                           hwv_ansatz_solve, is_hwv, linearize, tableau_basis, upper_pairs)
from core.relfinder import ANSATZ_322, ANSATZ_322_SOLUTION
from matrices.genmat import canonical_hwv_trace
from matrices.numcheck import graded_dimension_estimate


def test_polarization_op_validation():
    with pytest.raises(ValueError):
        PolarizationOp("h", 1, 2)
    with pytest.raises(ValueError):
        PolarizationOp(DELTA, 2, 1)
    assert str(PolarizationOp(G, 1, 3)) == "g_13"
    assert upper_pairs(3) == [(1, 2), (1, 3), (2, 3)]


def test_exponential_of_derivation_is_the_substitution(ctx3_full):
    p = expand(parse_expr("tr(x2^3)tr(x1x2) + tr(x1x2^2x3)"), ctx3_full)
    for i, j in upper_pairs(3):
        assert exp_delta(p, i, j, ctx3_full) == apply_polarization(PolarizationOp(G, i, j), p, ctx3_full)


def test_derivation_moves_one_occurrence(ctx3):
    p = expand(parse_expr("tr(x2^2)"), ctx3)
    image = apply_polarization(PolarizationOp(DELTA, 1, 2), p, ctx3)
    assert image == expand(parse_expr("2tr(x1x2)"), ctx3)


@pytest.mark.parametrize("method", [DELTA, G, "both"])
def test_is_hwv(ctx3, method):
    assert is_hwv(expand(parse_expr("tr(x1^2)"), ctx3), (2,), ctx3, method)
    assert is_hwv(expand(parse_expr("u(x1,x2)"), ctx3), (2, 2), ctx3, method)
    assert not is_hwv(expand(parse_expr("tr(x2^2)"), ctx3), (0, 2), ctx3, method)
    assert not is_hwv(expand(parse_expr("tr(x1x2)"), ctx3), (1, 1), ctx3, method)


def test_canonical_traces_are_hwv(ctx3):
    for lam in [(3,), (1, 1, 1), (2, 1, 1), (3, 1, 1), (2, 2, 1), (3, 3)]:
        assert is_hwv(canonical_hwv_trace(ctx3, lam), lam, ctx3, workers=2), lam


def test_is_hwv_checks_multidegree(ctx3):
    with pytest.raises(MultidegreeError):
        is_hwv(expand(parse_expr("tr(x1^2)"), ctx3), (1, 1), ctx3)
    with pytest.raises(ValueError):
        is_hwv(expand(parse_expr("tr(x1^2)"), ctx3), (2,), ctx3, method="exp")
    assert is_hwv(ctx3.zero, (4, 2), ctx3)


def test_linearize():
    assert reduce_to_atoms(linearize(parse_expr("tr(x1^2)"), 1, 2)) == reduce_to_atoms(parse_expr("2tr(x1x2)"))
    with pytest.raises(ValueError):
        linearize(parse_expr("tr(x1^2)"), 1, 1)


def test_linearize_u_gives_v(ctx3):
    image = linearize(parse_expr("u(x1,x2)"), 2, 3)
    assert expand(image, ctx3) == expand(parse_expr("2v(x1,x2,x3)"), ctx3)


@pytest.mark.parametrize("text,lam,d", [("tr(x1^2)", (2,), 3), ("u(x1,x2)", (2, 2), 3),
                                        ("tr(x1^3)", (3,), 2)])
def test_tableau_basis_spans_the_module(text, lam, d):
    basis = tableau_basis(parse_expr(text), lam, d)
    assert graded_dimension_estimate(basis, d) == len(basis)


def test_tableau_basis_size():
    assert len(tableau_basis(parse_expr("tr(x1^2)"), (2,), 3)) == 6
    assert len(tableau_basis(parse_expr("u(x1,x2)"), (2, 2), 3)) == 6


def test_tableau_basis_rejects_bad_input():
    with pytest.raises(MultidegreeError):
        tableau_basis(parse_expr("tr(x1^2)"), (1, 1), 3)
    with pytest.raises(ValueError):
        tableau_basis(parse_expr("tr(x1x2)"), (1, 1), 3)


def test_ansatz_recovers_u(ctx2):
    terms = [parse_expr("tr(x1^2)^2"), parse_expr("tr(x1^3x2)")]
    with pytest.raises(MultidegreeError):
        hwv_ansatz_solve(terms, (4,), ctx2)
    solutions = hwv_ansatz_solve([parse_expr("tr(x1^2)tr(x2^2)"), parse_expr("tr(x1x2)^2")], (2, 2), ctx2)
    assert solutions == [[1, -1]]


@pytest.mark.slow
def test_ansatz_for_weight_322(ctx3):
    terms = [parse_expr(t) for t in ANSATZ_322]
    assert hwv_ansatz_solve(terms, (3, 2, 2), ctx3, workers=2) == [ANSATZ_322_SOLUTION]
