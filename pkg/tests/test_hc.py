import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hcsim.binom import PValueRecord
from hcsim.hc import NoAdmissibleIndex, compute_hc, discriminating_set

from oracles import hc_naive

pvals = st.lists(st.floats(0, 1, allow_nan=False), min_size=2, max_size=60)


def test_uniform_grid_scores_zero():
    n = 40
    res = compute_hc([i / n for i in range(1, n + 1)], 0.5, "star")
    assert res.score == pytest.approx(0.0, abs=1e-12)


def test_hand_example_star():
    res = compute_hc([0.9, 0.3, 0.01, 0.2], 0.5, "star")
    assert res.score == pytest.approx(1.2, abs=1e-12)
    assert (res.i_star, res.threshold) == (2, 0.2)


def test_hand_example_dagger_drops_small_pvalue():
    # 0.01 < 1/4 is inadmissible; 0.2 < 1/4 too, so no rank survives
    with pytest.raises(NoAdmissibleIndex):
        compute_hc([0.01, 0.2, 0.3, 0.9], 0.5, "dagger")
    res = compute_hc([0.3, 0.4, 0.5, 0.9], 0.5, "dagger")
    # z_1 = 2(0.25 - 0.3)/sqrt(0.1875) < 0, z_2 = 4(0.5 - 0.4) = 0.4
    assert res.i_star == 2 and res.threshold == 0.4
    assert res.score == pytest.approx(0.4, abs=1e-12)


def test_may_be_negative():
    res = compute_hc([0.9, 0.95], 1.0, "star")
    assert res.score == pytest.approx(math.sqrt(2) * (0.5 - 0.9) / 0.5, abs=1e-12)
    assert res.i_star == 1


@pytest.mark.parametrize("pv, alpha", [([], 0.3), ([0.1, 0.2], 0.3), ([0.1], 1.0)])
def test_no_candidate_rank(pv, alpha):
    with pytest.raises(ValueError):
        compute_hc(pv, alpha, "star")


@pytest.mark.parametrize("kwargs", [dict(alpha=0.0), dict(alpha=1.5), dict(variant="plus")])
def test_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        compute_hc([0.1, 0.5, 0.7], **kwargs)


def test_ties_pick_smallest_rank():
    # z_1 = z_2 = 0 exactly
    res = compute_hc([0.25, 0.5, 0.9, 0.95], 0.5, "star")
    assert res.score == 0.0 and res.i_star == 1


@given(pvals, st.sampled_from([0.3, 0.5, 1.0]), st.sampled_from(["star", "dagger"]))
def test_matches_naive(pv, alpha, variant):
    want = hc_naive(pv, alpha, variant)
    if want is None:
        with pytest.raises(ValueError):
            compute_hc(pv, alpha, variant)
        return
    got = compute_hc(pv, alpha, variant)
    assert got.score == pytest.approx(want[0], abs=1e-12)
    assert got.i_star == want[1] and got.threshold == want[2]


@given(pvals, st.randoms())
def test_order_invariant(pv, rnd):
    shuffled = list(pv)
    rnd.shuffle(shuffled)
    try:
        a = compute_hc(pv, 0.5, "star")
    except ValueError:
        return
    assert compute_hc(shuffled, 0.5, "star") == a


@given(pvals)
def test_star_dominates_dagger(pv):
    try:
        dagger = compute_hc(pv, 0.5, "dagger")
    except ValueError:
        return
    assert compute_hc(pv, 0.5, "star").score >= dagger.score


def _records(pis, excess):
    # x - n_w p_w equals ``excess`` with n_w = 10
    return [PValueRecord(f"t{k}", 5 + e, 10, 0.5, p) for k, (p, e) in enumerate(zip(pis, excess))]


def test_discriminating_set_threshold_and_direction():
    recs = _records([0.01, 0.2, 0.3, 0.9], [3, -2, 1, 0])
    delta = discriminating_set(recs, compute_hc([r.pi for r in recs], 0.5, "star"))
    assert delta.terms == ("t0", "t1")
    assert delta.directions == (1, -1)
    assert delta.to_csv().splitlines()[0] == "term,pi,direction"


def test_discriminating_set_all_tied():
    recs = _records([1.0] * 5, [0] * 5)
    delta = discriminating_set(recs, compute_hc([1.0] * 5, 0.5, "star"))
    assert len(delta) == 5 and set(delta.directions) == {0}


def test_threshold_is_order_statistic():
    rng = np.random.default_rng(3)
    for _ in range(50):
        pv = rng.random(200)
        res = compute_hc(pv, 0.3, "star")
        assert res.threshold == np.sort(pv)[res.i_star - 1]
