import random

import pytest
from sympy.polys.domains import QQ

from core.mpoly import (Series, SeriesError, VarId, VarSpace, VariableKindError, coefficient_vector,
                        derive, elementary, evaluate_at_one, geometric_inverse, homogeneous_part,
                        multidegree, multihomogeneous_component, permute_variables, poly_arith,
                        series_expand_rational, series_space, substitute, truncate)


@pytest.fixture
def space():
    return VarSpace([VarId.entry(i, 1, 1) for i in (1, 2)] + [VarId.entry(3, 1, 2)])


def _random_poly(space, rng, terms=4, degree=3):
    p = space.zero
    for _ in range(terms):
        mono = space.one
        for g in space.ring.gens:
            mono = mono * g ** rng.randint(0, degree)
        p += mono * QQ(rng.randint(-5, 5), rng.randint(1, 4))
    return p


def test_variable_kinds_do_not_mix():
    with pytest.raises(VariableKindError):
        VarSpace([VarId.entry(1, 1, 1), VarId.series(1)])


def test_polynomials_from_different_spaces_do_not_combine(space):
    t = series_space(2).gen(VarId.series(1))
    x = space.gen(VarId.entry(1, 1, 1))
    with pytest.raises(VariableKindError):
        poly_arith(x, t, "add")
    with pytest.raises(VariableKindError):
        space.check(t)


def test_ring_axioms_randomized(space):
    rng = random.Random(3)
    for _ in range(100):
        a, b, c = (_random_poly(space, rng) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a - a == space.zero
        assert a * space.one == a


def test_substitute_and_derive(space):
    x, y, z = (space.gen(v) for v in space.variables)
    p = x ** 2 * y + z
    moved = substitute(p, space, {VarId.entry(2, 1, 1): y + x})
    assert moved == x ** 2 * (y + x) + z
    # derivation y -> x
    assert derive(p, space, {VarId.entry(2, 1, 1): x}) == x ** 3
    assert derive(p, space, {}) == space.zero


def test_multidegree_and_components(space):
    x, y, z = (space.gen(v) for v in space.variables)
    grading = lambda v: v.matrix
    assert multidegree(x ** 2 * y, space, grading) == {1: 2, 2: 1}
    assert multidegree(x ** 2 * y + x, space, grading) is None
    p = x ** 2 * y + x * y + z
    assert multihomogeneous_component(p, space, grading, {1: 1, 2: 1}) == x * y


def test_truncate_and_homogeneous_part():
    sp = series_space(2)
    t1, t2 = sp.ring.gens
    p = 1 + t1 + t1 * t2 + t2 ** 3
    assert truncate(p, 2) == 1 + t1 + t1 * t2
    assert homogeneous_part(p, 2) == t1 * t2


def test_permute_and_elementary():
    sp = series_space(3)
    t1, t2, t3 = sp.ring.gens
    assert permute_variables(t1 ** 2 * t3, [1, 0, 2]) == t2 ** 2 * t3
    assert elementary(sp, 2) == t1 * t2 + t1 * t3 + t2 * t3
    assert evaluate_at_one(elementary(sp, 2)) == 3


def test_geometric_series():
    sp = series_space(1)
    t, = sp.ring.gens
    inv = geometric_inverse(sp.one - t, 4)
    assert inv == 1 + t + t ** 2 + t ** 3 + t ** 4
    with pytest.raises(SeriesError):
        geometric_inverse(2 - t, 4)


def test_rational_expansion_counts_monomials():
    # 1/(1-t1)(1-t2) has every coefficient 1
    sp = series_space(2)
    t1, t2 = sp.ring.gens
    s = series_expand_rational(sp.one, [(sp.one - t1, 1), (sp.one - t2, 1)], 3)
    assert s.coefficient((2, 1)) == 1
    assert len(s.to_dict()) == 10
    # 1/(1-t)^2 has coefficients k+1
    one = series_space(1)
    t, = one.ring.gens
    s = series_expand_rational(one.one, [(one.one - t, 2)], 5)
    assert [s.coefficient((k,)) for k in range(6)] == [1, 2, 3, 4, 5, 6]


def test_series_arithmetic_truncates():
    sp = series_space(1)
    t, = sp.ring.gens
    a = Series(1 + t, 3)
    b = Series(1 + t ** 2, 2)
    prod = a * b
    assert prod.order == 2
    assert prod.body == 1 + t + t ** 2
    with pytest.raises(ValueError):
        prod.piece(3)


def test_coefficient_vector(space):
    x, y, _ = (space.gen(v) for v in space.variables)
    monoms, rows = coefficient_vector([x + y, 2 * x])
    assert len(monoms) == 2
    as_dict = dict(zip(monoms, rows))
    assert as_dict[(1, 0, 0)] == [1, 2]
    assert as_dict[(0, 1, 0)] == [1, 0]
