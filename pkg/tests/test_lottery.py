from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfhe.lottery import (Attitude, HfheParams, Lottery, LotteryError, classify_attitude, distort, h2,
                          h_lambda, h_q)

COIN = Lottery.from_pairs([[100, 0.5], [0, 0.5]])
MIXED = Lottery.from_pairs([[60, 0.5], [-40, 0.5]])


def dec_h2(ys, ps, lp, lm):
    """Term-by-term evaluation in Decimal arithmetic."""
    ys = [Decimal(str(y)) for y in ys]
    mu = sum(p * y for p, y in zip(ps, ys))
    gain = [max(y, Decimal(0)) for y in ys]
    loss = [min(y, Decimal(0)) for y in ys]
    mg = sum(p * g for p, g in zip(ps, gain))
    ml = sum(p * v for p, v in zip(ps, loss))
    dg = sum(p * abs(g - mg) for p, g in zip(ps, gain))
    dl = sum(p * abs(v - ml) for p, v in zip(ps, loss))
    return mu + (2 * Decimal(str(lp)) - 1) * dg + (2 * Decimal(str(lm)) - 1) * dl


def dec_distort(ps, q):
    getcontext().prec = 40
    w = [Decimal(str(p)) ** Decimal(str(q)) for p in ps]
    s = sum(w)
    return [v / s for v in w]


@pytest.mark.parametrize("lam, expected", [(0.5, 50), (1.0, 100), (0.0, 0)])
def test_h_lambda_coin(lam, expected):
    assert h_lambda(COIN, lam) == pytest.approx(expected, abs=1e-12)


def test_h_lambda_rejects_negative_outcomes():
    with pytest.raises(LotteryError, match="lottery not nonnegative; use h2"):
        h_lambda(MIXED, 0.3)


def test_h2_examples():
    assert h2(MIXED, HfheParams(0.5, 0.5)) == pytest.approx(10, abs=1e-12)
    assert h2(MIXED, HfheParams(0.30, 0.69)) == pytest.approx(5.6, abs=1e-12)
    for lm in (0.0, 0.4, 0.69, 1.0):
        assert h2(COIN, HfheParams(0.3, lm)) == pytest.approx(30, abs=1e-12)


def test_distort_examples():
    assert distort([0.8, 0.2], 1).tolist() == [0.8, 0.2]
    assert np.allclose(distort([1 / 3] * 3, 2.4), 1 / 3, atol=1e-15)
    w = distort([0.8, 0.2], 0.7)
    oracle = [float(v) for v in dec_distort([0.8, 0.2], 0.7)]
    assert w == pytest.approx(oracle, abs=1e-14)
    assert w[0] == pytest.approx(0.72520, abs=1e-5)


def test_distort_rejects_nonpositive_q():
    with pytest.raises(LotteryError, match="q must be positive"):
        distort([0.5, 0.5], 0)


def test_h_q_two_step_oracle():
    ys, ps = [60, -40], [0.8, 0.2]
    w = dec_distort(ps, 0.7)
    oracle = float(dec_h2(ys, w, 0.30, 0.69))
    assert h_q(Lottery(ys, ps), HfheParams(0.30, 0.69, 0.7)) == pytest.approx(oracle, abs=1e-12)


def test_h_q_identities(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        lot = Lottery(rng.normal(0, 10, n), rng.dirichlet(np.ones(n)))
        prm = HfheParams(*rng.random(2))
        assert h_q(lot, prm) == pytest.approx(h2(lot, prm), abs=1e-12)
        uni = Lottery.uniform(lot.outcomes)
        prm_q = HfheParams(prm.lambda_plus, prm.lambda_minus, float(rng.uniform(0.2, 3)))
        assert h_q(uni, prm_q) == pytest.approx(h2(uni, prm), abs=1e-12)


def test_classify_examples():
    att = classify_attitude(MIXED, 0.30, 0.69)
    assert att.attitude is Attitude.AVERSE
    assert att.m == pytest.approx(2 / 3) and att.k == pytest.approx(5 / 6)
    assert att.threshold == pytest.approx(0.373333333333, abs=1e-10)
    assert classify_attitude(MIXED, 0.5, 0.5).attitude is Attitude.NEUTRAL
    assert classify_attitude(COIN, 0.7, 0.1).attitude is Attitude.SEEKING


def test_classify_one_sided_and_degenerate():
    neg = Lottery.from_pairs([[-10, 0.5], [-30, 0.5]])
    assert classify_attitude(neg, 0.9, 0.3).attitude is Attitude.AVERSE
    assert classify_attitude(neg, 0.1, 0.8).attitude is Attitude.SEEKING
    assert classify_attitude(neg, 0.1, 0.8).m is None
    assert classify_attitude(COIN, 0.3, 0.9).attitude is Attitude.AVERSE
    sure = Lottery([5.0], [1.0])
    att = classify_attitude(sure, 0.1, 0.9)
    assert att.attitude is Attitude.NEUTRAL and att.m is None
    assert h2(sure, HfheParams(0.1, 0.9)) == 5.0


@pytest.mark.parametrize("pairs", [[[1, 0.5], [2, 0.6]], [[1, -0.1], [2, 1.1]], [], [[1, np.nan]]])
def test_invalid_lotteries(pairs):
    with pytest.raises(LotteryError):
        Lottery.from_pairs(pairs)


def test_params_validation():
    with pytest.raises(LotteryError):
        HfheParams(1.2, 0.5)
    with pytest.raises(LotteryError):
        HfheParams(0.3, 0.5, q=0)


lotteries = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.floats(-100, 100, allow_nan=False), min_size=n, max_size=n),
    st.lists(st.floats(0.01, 1), min_size=n, max_size=n)))


def _lottery(data):
    ys, ws = data
    p = np.array(ws) / sum(ws)
    p[-1] = 1 - p[:-1].sum()
    return Lottery(ys, np.clip(p, 0, 1))


@settings(max_examples=200, deadline=None)
@given(lotteries, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_h2_monotone_in_lambdas(data, lp, lm, bump):
    lot = _lottery(data)
    base = h2(lot, HfheParams(lp, lm))
    assert h2(lot, HfheParams(max(lp, bump), lm)) >= base - 1e-9
    assert h2(lot, HfheParams(lp, max(lm, bump))) >= base - 1e-9


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.01, 1), min_size=1, max_size=8), st.floats(0.05, 5))
def test_distort_is_ranked_distribution(ws, q):
    p = np.array(ws) / sum(ws)
    w = distort(p, q)
    assert abs(w.sum() - 1) <= 1e-12
    order = np.argsort(p, kind="stable")
    assert np.all(np.diff(w[order]) >= -1e-15)


@settings(max_examples=300, deadline=None)
@given(lotteries, st.floats(0, 1), st.floats(0, 1))
def test_classification_matches_functional(data, lp, lm):
    lot = _lottery(data)
    att = classify_attitude(lot, lp, lm)
    gap = h2(lot, HfheParams(lp, lm)) - lot.mean()
    if att.attitude is Attitude.AVERSE:
        assert gap < 1e-9
    elif att.attitude is Attitude.SEEKING:
        assert gap > -1e-9
