import copy

import pytest

from catalog.expr import linear_combination
from catalog.models import RELATION_REPORT_FIELDS
from catalog.parser import CatalogSyntaxError
from catalog.store import CatalogMissingError, parse_catalog
from core.partitions import Partition
from core.relfinder import (ANSATZ_322_SOLUTION, PRINTED_RELATIONS, RELATION_WEIGHTS, RelationFinder,
                            RelationReport, matches_printed, span_contains)
from matrices.numcheck import vanishes

P = Partition

NULLITY_7 = {P((4, 1, 1, 1)): 1, P((3, 2, 2)): 1, P((3, 2, 1, 1)): 1, P((2, 2, 2, 1)): 1,
             P((2, 2, 1, 1, 1)): 1, P((2, 1, 1, 1, 1, 1)): 1, P((3, 1, 1, 1, 1)): 0}
NULLITY_8 = {P((4, 3, 1)): 1, P((4, 2, 2)): 2, P((3, 3, 2)): 1}


@pytest.fixture(scope="module")
def finder(config_path, store):
    return RelationFinder(config_path, store=store, workers=2)


def test_span_helpers():
    assert span_contains([[1, 0, 1]], [[2, 0, 2]], 3)
    assert not span_contains([[1, 0, 1]], [[0, 1, 0]], 3)
    assert span_contains([], [[0, 0]], 2)
    assert not span_contains([], [[1, 0]], 2)
    assert matches_printed([[2, -1, 2, 0]], [[-2, 1, -2, 0]], 4)
    assert matches_printed([[1, 2, 0], [0, 1, 1]], [[1, 3, 1], [1, 1, -1]], 3)
    assert not matches_printed([[1, 0]], [[1, 0], [0, 1]], 2)
    assert not matches_printed([[1, 2]], [[2, 1]], 2)


def test_printed_data_shapes(store):
    for lam, vectors in PRINTED_RELATIONS.items():
        n = len(store.group(lam))
        assert all(len(v) == n for v in vectors), lam.label()
    assert set(RELATION_WEIGHTS[7]) == set(NULLITY_7)
    assert set(RELATION_WEIGHTS[8]) == set(NULLITY_8)


def test_report_serialization():
    report = RelationReport(lam=P((3, 2, 2)), d=3, degree=7, candidates=4, nullspace=[[2, -1, 2, 0]],
                            printed=[[2, -1, 2, 0]], matched_printed=True, verified=True, monomials=10)
    out = report.to_dict()
    assert out['lambda'] == "(3,2^2)"
    assert out['matrix'] == [10, 4]
    assert set(RELATION_REPORT_FIELDS) <= set(out)
    assert out['passed']
    assert report.nullity == 1
    report.errors.append("vector does not vanish")
    assert not report.passed


def test_candidates_are_checked(finder):
    with pytest.raises(ValueError):
        finder.find_relations((3, 2, 2), 8, 3)
    with pytest.raises(ValueError):
        finder.find_relations((3, 2, 1, 1), 7, 3)
    with pytest.raises(CatalogMissingError):
        finder.find_relations((5, 1), 6, 2)


@pytest.mark.parametrize("lam", list(PRINTED_RELATIONS))
def test_printed_vectors_vanish_numerically(store, lam):
    exprs = [e.expr for e in store.group(lam)]
    for vector in PRINTED_RELATIONS[lam]:
        assert vanishes(linear_combination(zip(vector, exprs)), len(lam), trials=5), (lam.label(), vector)
    if not PRINTED_RELATIONS[lam]:
        assert not vanishes(linear_combination(zip([1] * len(exprs), exprs)), len(lam), trials=5)


def test_unparsed_candidates_are_rejected(config_path, store):
    broken = copy.copy(store)
    broken.entries = parse_catalog("version 1\nentry 2,2 w1 verbatim\n  (u(x1,x2)\n")
    finder = RelationFinder(config_path, store=broken)
    with pytest.raises(CatalogSyntaxError):
        finder.find_relations((2, 2), 4, 2)


def test_independent_group_has_no_relations(finder):
    report = finder.find_relations((2, 2), 4, 2)
    assert report.verified
    assert report.nullspace == []
    assert report.numeric_rank == 1
    assert report.matched_printed is None
    assert report.passed


def test_relation_of_weight_322(finder):
    report = finder.find_relations((3, 2, 2), 7, 3)
    assert report.nullspace == [[2, -1, 2, 0]]
    assert report.rank == 3
    assert report.matched_printed
    assert report.passed


def test_verify_relation(finder):
    assert finder.verify_relation((3, 2, 2), 7, 3, [2, -1, 2, 0])
    assert not finder.verify_relation((3, 2, 2), 7, 3, [1, 1, 1, 1])
    assert finder.verify_relation((3, 2, 2), 7, 3, [0, 0, 0, 0])
    with pytest.raises(ValueError):
        finder.verify_relation((3, 2, 2), 7, 3, [2, -1, 2])


def test_no_relations_below_degree_seven(finder):
    result = finder.no_low_degree_relations_check(3, 6)
    assert result['kernel_zero'] is True
    assert result['passed']
    assert set(result['groups']) >= {"(4)", "(2^2)", "(3,1^3)"}


def test_relation_dimension_at_d3(finder):
    assert finder.relation_dimension(7, 3) == 3


@pytest.mark.slow
def test_relation_basis_of_weight_322(finder):
    assert len(finder.relation_basis((3, 2, 2), 7, 3)) == 3
    with pytest.raises(ValueError):
        finder.relation_basis((3, 2, 2), 7, 2)


@pytest.mark.slow
def test_ansatz_322(finder):
    assert finder.solve_ansatz_322() == [ANSATZ_322_SOLUTION]


@pytest.mark.slow
def test_relation_of_weight_4111_at_d4(finder):
    report = finder.find_relations((4, 1, 1, 1), 7, 4)
    assert report.nullspace == [[12, -15, -20]]
    assert report.passed


@pytest.mark.slow
@pytest.mark.parametrize("lam", [P((3, 2, 1, 1)), P((2, 2, 2, 1)), P((3, 1, 1, 1, 1)),
                                 P((2, 2, 1, 1, 1)), P((2, 1, 1, 1, 1, 1))])
def test_degree7_relations_in_more_rows(finder, lam):
    report = finder.find_relations(lam, 7, len(lam))
    assert report.nullity == NULLITY_7[lam]
    assert report.passed


@pytest.mark.slow
@pytest.mark.parametrize("lam", list(NULLITY_8))
def test_degree8_relations(finder, lam):
    report = finder.find_relations(lam, 8, 3)
    assert report.nullity == NULLITY_8[lam]
    assert report.matched_printed
    assert report.passed
