import math

import numpy as np
import pytest

from hfhe.backtest import BacktestError
from hfhe.metrics import (MetricConfig, MetricError, ave_roi, basic_stats, diversification, evaluate,
                          is_flagged, max_drawdown, rachev, sortino)


def test_basic_stats():
    mean, vol, sh = basic_stats([0.01, 0.02, 0.03])
    assert mean == pytest.approx(0.02, abs=1e-15)
    assert vol == pytest.approx(math.sqrt(2 / 3) / 100, abs=1e-15)
    assert sh == pytest.approx(2.4495, abs=1e-4)
    assert sh == pytest.approx(math.sqrt(6), abs=1e-12)
    _, vol, sh = basic_stats([0.01] * 5)
    assert vol == 0 and is_flagged(sh) and sh > 0
    assert basic_stats([0.02, -0.02])[2] == 0
    with pytest.raises(MetricError):
        basic_stats([0.01])


def test_max_drawdown():
    assert max_drawdown([0.1, -0.2, 0.05]) == pytest.approx(-0.2, abs=1e-15)
    assert max_drawdown([0.01, 0.02, 0.0]) == 0
    assert max_drawdown([-0.5]) == -0.5
    with pytest.raises(BacktestError, match="wealth annihilated"):
        max_drawdown([0.1, -1.0])


def test_max_drawdown_zero_iff_running_max(rng):
    for _ in range(50):
        R = rng.normal(0.001, 0.01, 20)
        W = np.concatenate([[1], np.cumprod(1 + R)])
        own_max = np.all(W == np.maximum.accumulate(W))
        assert (max_drawdown(R) == 0) == own_max
        assert max_drawdown(R) <= 0


def test_sortino():
    assert sortino([0.02, -0.01]) == pytest.approx(0.005 / math.sqrt(0.00005), abs=1e-12)
    assert sortino([0.02, -0.01]) == pytest.approx(0.70711, abs=1e-5)
    assert is_flagged(sortino([0.01, 0.02]))
    assert sortino([0.01, -0.01]) == 0


def test_rachev():
    R = [-0.03, -0.01, 0.01, 0.02, 0.05]
    assert rachev(R, 0.2, 0.2) == pytest.approx(0.05 / 0.03, abs=1e-12)
    assert rachev([-0.02, -0.01, 0.01, 0.02], 0.25, 0.25) == pytest.approx(1.0)
    assert is_flagged(rachev([0.01, 0.02, 0.03]))
    with pytest.raises(MetricError):
        rachev(R, 0, 0.1)


def test_rachev_tail_counts():
    # ceil(0.05 * 100) = 5 elements per tail
    R = np.arange(1, 101) / 1000 - 0.05
    top, bottom = np.sort(R)[-5:].mean(), np.sort(R)[:5].mean()
    assert rachev(R) == pytest.approx(top / -bottom, abs=1e-12)


def test_rachev_antisymmetry(rng):
    for _ in range(30):
        R = rng.normal(0, 0.01, int(rng.integers(5, 60)))
        a = float(rng.choice([0.05, 0.1, 0.2]))
        assert rachev(R, a, a) * rachev(-R, a, a) == pytest.approx(1.0, rel=1e-12)


def test_ave_roi():
    assert ave_roi([0.1] * 5, 2) == pytest.approx(0.21, abs=1e-12)
    assert ave_roi([0.0] * 5, 2) == 0
    assert ave_roi([0.1, -0.1], 2) == pytest.approx(-0.01, abs=1e-12)
    with pytest.raises(MetricError, match="too short"):
        ave_roi([0.1], 2)


def test_diversification():
    nhi, count = diversification([[0.5, 0.5, 0, 0]])
    assert nhi == pytest.approx(2 / 3, abs=1e-12) and count == 2
    assert diversification(np.full((7, 4), 0.25)) == pytest.approx((1.0, 4.0))
    assert diversification([[0, 1.0, 0], [1.0, 0, 0]]) == (0.0, 1.0)
    nhi, count = diversification([[1.0]])
    assert math.isnan(nhi) and count == 1
    with pytest.raises(MetricError):
        diversification(np.empty((0, 3)))


def test_nhi_range(rng):
    X = rng.dirichlet(np.ones(5) * 0.3, 500)
    for x in X:
        nhi, _ = diversification([x])
        assert 0 <= nhi <= 1


def test_permutation_invariance(rng):
    R = rng.normal(0.0005, 0.01, 300)
    W = np.full((3, 4), 0.25)
    a = evaluate(R, W, MetricConfig(delta_tau=20))
    b = evaluate(rng.permutation(R), W, MetricConfig(delta_tau=20))
    for key in ("exp_ret", "vol", "sharpe", "sortino", "rachev"):
        assert getattr(a, key) == pytest.approx(getattr(b, key), rel=1e-12, abs=1e-15)


def test_evaluate_report():
    R = [0.01, -0.02, 0.015, 0.005]
    rep = evaluate(R, [[0.5, 0.5]], MetricConfig(delta_tau=2))
    vals = rep.values()
    assert list(vals) == ["exp_ret", "vol", "sharpe", "max_dd", "sortino", "rachev", "ave_roi", "nhi",
                          "ave_count"]
    assert vals["nhi"] == 1.0 and vals["ave_count"] == 2
    assert vals["vol"] >= 0 and vals["max_dd"] <= 0
    assert math.isnan(evaluate(R, [[0.5, 0.5]]).ave_roi)  # shorter than the default horizon
