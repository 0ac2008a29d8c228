import random

import numpy as np
import pytest

from ncvanish.evaluate import eval_poly, weyl_pair
from ncvanish.linalg import rank
from ncvanish.lowrank import (
    FMatTuple,
    SearchConfig,
    eval_poly_float,
    exactify,
    float_of_exact,
    lowrank_objective,
    lowrank_search,
    rank_profile,
    reference_poly,
    reference_witnesses,
    trace_witness_search,
    verify_reference_witnesses,
)
from ncvanish.poly import NcPoly, commutator, parse


def defect_poly() -> NcPoly:
    return parse("1", 2) - commutator(NcPoly.var(1, 2), NcPoly.var(2, 2))


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(target_rank=-1)
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(tolerance=0.0)
    with pytest.raises(ValueError):
        SearchConfig(max_den=0)


def test_fmat_tuple_validation():
    with pytest.raises(ValueError):
        FMatTuple([np.array([[np.nan]])])
    with pytest.raises(ValueError):
        FMatTuple([np.array([[np.inf]])])
    with pytest.raises(ValueError):
        FMatTuple([np.zeros((2, 3))])
    with pytest.raises(ValueError):
        FMatTuple([])


def test_float_evaluation_matches_exact():
    rng = random.Random(3)
    from ncvanish.evaluate import random_tuple

    from conftest import random_poly

    for _ in range(20):
        X = random_tuple(rng, 3, 2)
        f = random_poly(rng, 2, 3)
        exact = eval_poly(f, X)
        approx = eval_poly_float(f, float_of_exact(X))
        expected = np.array([[float(e) for e in row] for row in exact.entries])
        assert np.allclose(approx, expected, atol=1e-9)


def test_objective_zero_at_known_rank_one_value():
    # the commutation-defect value at the canonical pair is n*E_nn, rank one
    f = defect_poly()
    X = float_of_exact(weyl_pair(4))
    assert lowrank_objective(f, X, 1) < 1e-20
    assert lowrank_objective(f, X, 0) > 1.0


def test_lowrank_search_finds_rank_zero_point():
    cfg = SearchConfig(target_rank=0, restarts=2, seed=0)
    res = lowrank_search(parse("x1", 1), 2, cfg)
    assert res.objective < cfg.tolerance
    assert res.exact is not None
    point, r = res.exact
    assert r == 0
    assert eval_poly(parse("x1", 1), point).entries == ((0, 0), (0, 0))


def test_lowrank_search_constant_cannot_drop_rank():
    cfg = SearchConfig(target_rank=1, restarts=2, seed=0, max_iters=200)
    res = lowrank_search(parse("1", 2), 2, cfg)
    assert res.objective == pytest.approx(1.0)
    assert res.exact is None


def test_lowrank_search_commutation_defect_small():
    # 3x3 already admits an exact rank-one point for the defect polynomial
    cfg = SearchConfig(target_rank=1, restarts=6, seed=0)
    res = lowrank_search(defect_poly(), 3, cfg)
    assert res.objective < cfg.tolerance
    assert res.exact is not None
    point, r = res.exact
    assert r <= 1
    assert rank(eval_poly(defect_poly(), point)) == r


def test_lowrank_search_deterministic():
    cfg = SearchConfig(target_rank=1, restarts=3, seed=7)
    a = lowrank_search(defect_poly(), 3, cfg)
    b = lowrank_search(defect_poly(), 3, cfg)
    assert a.objective == b.objective
    assert a.restart == b.restart
    assert a.iterations == b.iterations
    assert (a.exact is None) == (b.exact is None)
    if a.exact is not None:
        assert a.exact[0] == b.exact[0]
        assert a.exact[1] == b.exact[1]


def test_lowrank_search_input_validation():
    with pytest.raises(ValueError):
        lowrank_search(parse("x1", 1), 0, SearchConfig())


def test_exactify_from_float_of_exact_point():
    f = defect_poly()
    w = float_of_exact(weyl_pair(4))
    out = exactify(f, list(w.matrices), SearchConfig(target_rank=1))
    assert out is not None
    point, r = out
    assert r == 1
    assert point == weyl_pair(4)


def test_exactify_rejects_far_from_low_rank():
    # identity matrices leave the constant polynomial at full rank
    f = parse("1", 2)
    mats = [np.eye(3), np.eye(3)]
    assert exactify(f, mats, SearchConfig(target_rank=1)) is None


def test_rank_profile_of_defect_polynomial():
    prof = rank_profile(defect_poly(), range(2, 4), samples=5, seed=0)
    assert prof == {2: 1, 3: 1}


def test_rank_profile_of_constant_is_full():
    prof = rank_profile(parse("1", 2), range(1, 4), samples=3, seed=0)
    assert prof == {1: 1, 2: 2, 3: 3}


def test_rank_profile_of_single_variable_hits_zero():
    prof = rank_profile(parse("x1", 2), range(1, 4), samples=3, seed=0)
    assert prof == {1: 0, 2: 0, 3: 0}


def test_rank_profile_monotone_in_samples():
    # adding samples can only lower the observed minimum rank
    f = defect_poly()
    small = rank_profile(f, range(2, 5), samples=3, seed=0)
    big = rank_profile(f, range(2, 5), samples=12, seed=0)
    for n in range(2, 5):
        assert big[n] <= small[n]


def test_rank_profile_determinism():
    f = defect_poly()
    assert rank_profile(f, range(2, 5), samples=6, seed=3) == rank_profile(
        f, range(2, 5), samples=6, seed=3
    )


def test_reference_witnesses_have_rank_one():
    f = reference_poly()
    for point in reference_witnesses():
        val = eval_poly(f, point)
        assert rank(val) == 1


def test_verify_reference_witnesses_report():
    report = verify_reference_witnesses()
    assert report["ranks"] == {3: 1, 4: 1}
    assert report["identity_on_2x2"] is True


def test_trace_witness_zero_point_for_single_variable():
    cfg = SearchConfig(seed=0)
    point = trace_witness_search([parse("x1", 1)], parse("1", 1), 1, cfg)
    assert point is not None
    assert eval_poly(parse("x1", 1), point).trace() == 0
    assert eval_poly(parse("1", 1), point).trace() != 0


def test_trace_witness_product_vs_variable():
    cfg = SearchConfig(seed=0)
    point = trace_witness_search([parse("x1*x2", 2)], parse("x1", 2), 1, cfg)
    assert point is not None
    assert eval_poly(parse("x1*x2", 2), point).trace() == 0
    assert eval_poly(parse("x1", 2), point).trace() != 0


def test_trace_witness_square_needs_two_dimensions():
    cfg = SearchConfig(seed=0)
    point = trace_witness_search([parse("x1*x1", 2)], parse("x2", 2), 2, cfg)
    assert point is not None
    assert eval_poly(parse("x1*x1", 2), point).trace() == 0
    assert eval_poly(parse("x2", 2), point).trace() != 0


def test_trace_witness_none_when_impossible():
    # tr(1) = n never vanishes, so no witness can separate {1} from anything
    cfg = SearchConfig(seed=0, restarts=2, max_iters=100)
    assert trace_witness_search([parse("1", 1)], parse("x1", 1), 1, cfg) is None


def test_float_of_exact_round_trip_values():
    X = weyl_pair(3)
    F = float_of_exact(X)
    for qm, fm in zip(X.matrices, F.matrices):
        expected = np.array([[float(e) for e in row] for row in qm.entries])
        assert np.array_equal(fm, expected)
