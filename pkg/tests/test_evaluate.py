import random
from fractions import Fraction

import pytest

from ncvanish.evaluate import (
    CPoly,
    MatTuple,
    ResourceCapError,
    classify_point,
    direct_sum,
    eval_poly,
    eval_poly_vector,
    pi_test,
    random_tuple,
    random_vector,
    standard_poly,
    weyl_pair,
)
from ncvanish.linalg import QMatrix, QVector
from ncvanish.poly import NcPoly, commutator, parse

from conftest import random_poly


def test_evaluation_is_a_homomorphism():
    rng = random.Random(3)
    for _ in range(40):
        d = rng.randint(1, 3)
        n = rng.randint(1, 3)
        X = random_tuple(rng, n, d)
        f = random_poly(rng, d, 3)
        g = random_poly(rng, d, 3)
        assert eval_poly(f + g, X) == eval_poly(f, X) + eval_poly(g, X)
        assert eval_poly(f * g, X) == eval_poly(f, X) @ eval_poly(g, X)
    one = parse("1", 2)
    assert eval_poly(one, random_tuple(rng, 3, 2)) == QMatrix.identity(3)


def test_eval_poly_vector_matches_full_product():
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(1, 4)
        X = random_tuple(rng, n, 2)
        v = random_vector(rng, n)
        f = random_poly(rng, 2, 4, terms=5)
        assert eval_poly_vector(f, X, v) == eval_poly(f, X) @ v


def test_direct_sum_blocks():
    rng = random.Random(15)
    A = random_tuple(rng, 2, 2)
    B = random_tuple(rng, 3, 2)
    S = direct_sum(A, B)
    assert S.n == 5 and S.d == 2
    f = parse("x1*x2 + x2 - 1", 2)
    val = eval_poly(f, S)
    va, vb = eval_poly(f, A), eval_poly(f, B)
    for i in range(2):
        for j in range(2):
            assert val.entries[i][j] == va.entries[i][j]
        for j in range(3):
            assert val.entries[i][2 + j] == 0
    for i in range(3):
        for j in range(2):
            assert val.entries[2 + i][j] == 0
        for j in range(3):
            assert val.entries[2 + i][2 + j] == vb.entries[i][j]


def test_weyl_pair_commutation_defect():
    f = parse("1", 2) - commutator(NcPoly.var(1, 2), NcPoly.var(2, 2))
    for n in (2, 3, 5):
        val = eval_poly(f, weyl_pair(n))
        assert val == Fraction(n) * QMatrix.unit(n, n - 1, n - 1)


def test_standard_poly():
    s2 = standard_poly(2)
    assert s2 == commutator(NcPoly.var(1, 2), NcPoly.var(2, 2))
    s3 = standard_poly(3)
    assert s3.d == 3
    assert len(list(s3.support())) == 6
    with pytest.raises(ValueError):
        standard_poly(9)
    with pytest.raises(ValueError):
        standard_poly(0)


def test_pi_test_small_cases():
    s2 = standard_poly(2)
    assert pi_test(s2, 1)  # 1x1 matrices commute
    assert not pi_test(s2, 2)
    assert pi_test(NcPoly.zero(2), 3)
    assert not pi_test(parse("1", 1), 1)


def test_pi_test_resource_cap():
    with pytest.raises(ResourceCapError):
        pi_test(standard_poly(4), 3, max_ops=10)


def test_mat_tuple_json_round_trip(tmp_path):
    rng = random.Random(21)
    X = random_tuple(rng, 3, 2)
    path = tmp_path / "point.json"
    X.save(str(path))
    Y = MatTuple.load(str(path))
    assert X == Y
    assert hash(X) == hash(Y)
    assert MatTuple.from_json(X.to_json()) == X


def test_mat_tuple_validation():
    with pytest.raises(ValueError):
        MatTuple([])  # needs at least one matrix
    with pytest.raises(ValueError):
        MatTuple([QMatrix.identity(2), QMatrix.identity(3)])  # mismatched sizes
    with pytest.raises(ValueError):
        MatTuple([QMatrix.zeros(2, 3)])  # square only


def test_random_tuple_seeded_determinism():
    a = random_tuple(random.Random(99), 3, 2)
    b = random_tuple(random.Random(99), 3, 2)
    assert a == b


def test_classify_point_memberships():
    # X1 = 0 kills f = x1; g = x2 evaluates to something invertible
    zero = QMatrix.zeros(2, 2)
    point = MatTuple([zero, QMatrix.identity(2)])
    f = [parse("x1", 2)]
    g = parse("x2", 2)
    pc = classify_point(f, g, point)
    assert pc.in_zero
    assert pc.in_det_zero
    assert pc.in_trace_zero
    assert not pc.in_directional or pc.g_value is not None
    assert pc.f_values[0] == zero
    assert pc.g_value == QMatrix.identity(2)
    assert tuple(pc.f_ranks) == (0,)
    assert pc.g_rank == 2


def test_classify_point_directional_vectors():
    # f(X) v = 0 with explicit direction vectors
    point = MatTuple([QMatrix([[0, 1], [0, 0]]), QMatrix.identity(2)])
    f = [parse("x1", 2)]
    g = parse("x2", 2)
    u = QVector([1, 0])
    v = QVector([1, 0])
    pc = classify_point(f, g, point, u=u, v=v)
    assert pc.in_directional
    assert not pc.in_zero
    assert pc.in_det_zero


def test_cpoly_arithmetic_and_substitution():
    x = CPoly.variable(0)
    y = CPoly.variable(1)
    p = x * y + 2 * x + CPoly.constant(Fraction(3))
    assert p.total_degree() == 2
    assert set(p.variables()) == {0, 1}
    val = p.substitute(0, CPoly.constant(Fraction(1, 2))).substitute(
        1, CPoly.constant(Fraction(4))
    )
    assert val.constant_value() == Fraction(1, 2) * 4 + 2 * Fraction(1, 2) + 3
    assert (p - p).is_zero()
    assert CPoly.constant(Fraction(0)).is_zero()
