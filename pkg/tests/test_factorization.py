import random
from fractions import Fraction

import pytest

from ncvanish.evaluate import eval_poly
from ncvanish.factorization import (
    AssocNo,
    AssocUnknown,
    AssocYes,
    DetZeroNo,
    DetZeroUnknown,
    DetZeroYes,
    detzero_inclusion,
    factor,
    stable_assoc,
    two_factor_splits,
)
from ncvanish.poly import NcPoly, commutator, parse

from conftest import random_nonzero_poly


def mat2_mul(A, B):
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(2)), NcPoly.zero(A[0][0].d)) for j in range(2))
        for i in range(2)
    )


def diag(p):
    one, zero = NcPoly.one(p.d), NcPoly.zero(p.d)
    return ((p, zero), (zero, one))


# ---------------------------------------------------------------------------
# two-factor splits


def test_splits_of_cubic_with_two_orders():
    splits, complete = two_factor_splits(parse("x1*x2*x1 + x1", 2))
    assert complete
    pairs = {(str(g), str(h)) for g, h in splits}
    assert pairs == {("x1", "1 + x2*x1"), ("1 + x1*x2", "x1")}
    for g, h in splits:
        assert g * h == parse("x1*x2*x1 + x1", 2)


def test_splits_of_square():
    splits, complete = two_factor_splits(parse("x1*x1", 2))
    assert complete
    assert [(str(g), str(h)) for g, h in splits] == [("x1", "x1")]


def test_splits_reject_degenerate_inputs():
    with pytest.raises(ValueError):
        two_factor_splits(NcPoly.zero(2))
    with pytest.raises(ValueError):
        two_factor_splits(parse("3", 2))
    with pytest.raises(ValueError):
        two_factor_splits(parse("2*x1*x2", 2))  # monic inputs only


def test_splits_verified_by_multiplication_random():
    rng = random.Random(73)
    for _ in range(25):
        d = rng.randint(1, 2)
        p = random_nonzero_poly(rng, d, 2)
        q = random_nonzero_poly(rng, d, 2)
        prod = (p * q).monic() if not (p * q).is_zero() else None
        if prod is None or prod.degree < 1:
            continue
        splits, _complete = two_factor_splits(prod)
        for g, h in splits:
            assert g * h == prod


# ---------------------------------------------------------------------------
# complete factorization


def test_factor_two_inequivalent_factorizations():
    opts = factor(parse("x1*x2*x1 + x1", 2))
    got = [(o.unit, tuple(str(f) for f in o.factors)) for o in opts]
    assert got == [
        (Fraction(1), ("x1", "1 + x2*x1")),
        (Fraction(1), ("1 + x1*x2", "x1")),
    ]
    for o in opts:
        assert all(e.exhaustive for e in o.evidence)


def test_factor_irreducible():
    f = parse("1", 2) - commutator(NcPoly.var(1, 2), NcPoly.var(2, 2))
    opts = factor(f)
    assert len(opts) == 1
    assert opts[0].factors == (f,)
    assert opts[0].evidence[0].exhaustive


def test_factor_pulls_out_unit():
    opts = factor(parse("3*x1*x2 + 3", 2))
    assert len(opts) == 1
    assert opts[0].unit == Fraction(3)
    assert [str(f) for f in opts[0].factors] == ["1 + x1*x2"]


def test_factor_constant_is_unit_only():
    opts = factor(parse("3/2", 2))
    assert len(opts) == 1
    assert opts[0].unit == Fraction(3, 2)
    assert opts[0].factors == ()


def test_factor_zero_rejected():
    with pytest.raises(ValueError):
        factor(NcPoly.zero(2))


def test_factor_unique_for_product_of_distinct_atoms():
    f = (parse("x1", 2) + NcPoly.one(2)) * (parse("x2", 2) + NcPoly.one(2))
    opts = factor(f)
    assert len(opts) == 1
    assert [str(g) for g in opts[0].factors] == ["1 + x1", "1 + x2"]


def test_factor_respects_degree_cap():
    f = parse("x1*x2*x1 + x1", 2)
    opts = factor(f, max_degree=1)
    assert len(opts) == 1
    assert opts[0].factors == (f,)
    assert not opts[0].evidence[0].exhaustive


def test_factor_products_reassemble_random():
    rng = random.Random(79)
    for _ in range(15):
        d = rng.randint(1, 2)
        f = random_nonzero_poly(rng, d, 2)
        if f.degree < 1:
            continue
        for o in factor(f, max_degree=6):
            total = NcPoly.constant(o.unit, d)
            for factor_poly in o.factors:
                total = total * factor_poly
            assert total == f


# ---------------------------------------------------------------------------
# stable associativity


def test_assoc_rotation_pair():
    p = parse("x1*x2 + 1", 2)
    q = parse("x2*x1 + 1", 2)
    res = stable_assoc(p, q)
    assert isinstance(res, AssocYes)
    # re-check the 2x2 identity P diag(q,1) Q == diag(p,1) from scratch
    left = mat2_mul(mat2_mul(res.p_mat, diag(q)), res.q_mat)
    assert left == diag(p)
    one, zero = NcPoly.one(2), NcPoly.zero(2)
    ident = ((one, zero), (zero, one))
    assert mat2_mul(res.p_mat, res.p_inv) == ident
    assert mat2_mul(res.p_inv, res.p_mat) == ident
    assert mat2_mul(res.q_mat, res.q_inv) == ident
    assert mat2_mul(res.q_inv, res.q_mat) == ident


def test_assoc_reflexive_and_scalar():
    p = parse("x1*x2 + 1", 2)
    assert isinstance(stable_assoc(p, p), AssocYes)
    res = stable_assoc(p, Fraction(3) * p)
    assert isinstance(res, AssocYes)
    left = mat2_mul(mat2_mul(res.p_mat, diag(Fraction(3) * p)), res.q_mat)
    assert left == diag(p)


def test_assoc_no_with_separating_point():
    res = stable_assoc(parse("x1", 2), parse("x2*x1 + 1", 2))
    assert isinstance(res, AssocNo)
    vanishing = parse("x1", 2) if res.vanishing == "p" else parse("x2*x1 + 1", 2)
    other = parse("x2*x1 + 1", 2) if res.vanishing == "p" else parse("x1", 2)
    assert (eval_poly(vanishing, res.point) @ res.vector).is_zero()
    assert not (eval_poly(other, res.point) @ res.vector).is_zero()


def test_assoc_no_for_swapped_products_without_units():
    res = stable_assoc(parse("x1*x2", 2), parse("x2*x1", 2))
    assert isinstance(res, AssocNo)


def test_assoc_unknown_when_search_disabled():
    res = stable_assoc(
        parse("x1*x2 + 1", 2),
        parse("x2*x1 + 1", 2),
        chain_depth=0,
        n_max=2,
        samples_per_size=3,
        seed=0,
    )
    assert isinstance(res, AssocUnknown)
    assert res.chain_depth == 0


def test_assoc_input_validation():
    with pytest.raises(ValueError):
        stable_assoc(parse("x1", 1), parse("x1", 2))
    with pytest.raises(ValueError):
        stable_assoc(parse("3", 2), parse("x1", 2))


def test_assoc_chains_through_longer_rotations():
    # x1*x2*x1 + 1 rotates to x1*x1*x2 + 1 in one move, x2*x1*x1 + 1 in two
    p = parse("x1*x2*x1 + 1", 2)
    q = parse("x2*x1*x1 + 1", 2)
    res = stable_assoc(p, q)
    assert isinstance(res, AssocYes)
    left = mat2_mul(mat2_mul(res.p_mat, diag(q)), res.q_mat)
    assert left == diag(p)


# ---------------------------------------------------------------------------
# determinantal zero set inclusion


def test_detzero_yes_by_factor_matching():
    res = detzero_inclusion([parse("x1*x2 + 1", 2)], parse("x2*x1 + 1", 2), seed=0)
    assert isinstance(res, DetZeroYes)
    assert res.generator_index == 0
    for a, b, cert in res.matching:
        assert isinstance(cert, AssocYes)


def test_detzero_no_by_refuted_factor():
    # f vanishes at X1 = 0 while g = 1 + x2*x1 stays invertible there
    res = detzero_inclusion([parse("x1*x2*x1 + x1", 2)], parse("x2*x1 + 1", 2), seed=0)
    assert isinstance(res, DetZeroNo)
    assert [str(f) for f in res.g_factors] == ["1 + x2*x1"]
    (refutation,) = res.refutations
    j, f_factors, refuted, certs = refutation
    assert j == 0
    assert refuted in f_factors
    assert len(certs) == len(res.g_factors)
    for cert in certs:
        assert isinstance(cert, AssocNo)


def test_detzero_unknown_when_search_disabled():
    res = detzero_inclusion(
        [parse("x1*x2 + 1", 2)],
        parse("x2*x1 + 1", 2),
        chain_depth=0,
        n_max=1,
        samples_per_size=2,
        seed=0,
    )
    assert isinstance(res, DetZeroUnknown)


def test_detzero_input_validation():
    with pytest.raises(ValueError):
        detzero_inclusion([], parse("x1", 2))
    with pytest.raises(ValueError):
        detzero_inclusion([parse("3", 2)], parse("x1", 2))
    with pytest.raises(ValueError):
        detzero_inclusion([parse("x1", 2)], parse("3", 2))


def test_detzero_self_inclusion_random():
    rng = random.Random(83)
    done = 0
    while done < 10:
        f = random_nonzero_poly(rng, 2, 2)
        if f.degree < 1:
            continue
        res = detzero_inclusion([f], f, seed=0)
        assert isinstance(res, DetZeroYes)
        done += 1
