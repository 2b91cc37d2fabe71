"""Out-of-sample performance measures.

Ratios whose denominator vanishes (Sharpe, Sortino, Rachev) come back as a
signed ``inf`` (``nan`` for 0/0); :func:`is_flagged` tells them apart from
ordinary values.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .backtest import wealth_path

SELECT_TOL = 1e-6


class MetricError(ValueError):
    pass


def _series(R, min_len: int = 1) -> np.ndarray:
    R = np.asarray(R, dtype=float).ravel()
    if R.size < min_len:
        raise MetricError(f"series too short: need at least {min_len} returns, got {R.size}")
    return R


def _ratio(num: float, den: float) -> float:
    if den > 0:
        return num / den
    if num == 0:
        return math.nan
    return math.copysign(math.inf, num)


def is_flagged(value: float) -> bool:
    return not math.isfinite(value)


def basic_stats(R, r_f: float = 0.0) -> tuple[float, float, float]:
    """``(mean, population std, Sharpe)``."""
    R = _series(R, 2)
    mean = float(R.mean())
    vol = float(R.std())
    if vol <= 1e-15 * max(1.0, abs(mean)):
        vol = 0.0
    return mean, vol, _ratio(mean - r_f, vol)


def max_drawdown(R) -> float:
    W = wealth_path(_series(R))
    peak = np.maximum.accumulate(W)
    return float(((W - peak) / peak).min())


def sortino(R, r_f: float = 0.0) -> float:
    R = _series(R, 1)
    ex = R - r_f
    downside = math.sqrt(float(np.mean(np.minimum(ex, 0.0) ** 2)))
    return _ratio(float(ex.mean()), downside)


def rachev(R, alpha: float = 0.05, beta: float = 0.05, r_f: float = 0.0) -> float:
    """Mean of the top ``ceil(alpha T)`` excess returns over minus the mean of
    the bottom ``ceil(beta T)``.

    With no loss in the lower tail the ratio is flagged (``inf``); an all-loss
    series simply gives a negative numerator.
    """
    if not (0 < alpha <= 1 and 0 < beta <= 1):
        raise MetricError("tail levels must lie in (0, 1]")
    ex = np.sort(_series(R, 1) - r_f)
    T = ex.size
    ka = max(1, math.ceil(alpha * T - 1e-9))
    kb = max(1, math.ceil(beta * T - 1e-9))
    upper = float(ex[-ka:].mean())
    lower = -float(ex[:kb].mean())
    return _ratio(upper, lower)


def ave_roi(R, delta_tau: int = 250) -> float:
    """Mean of ``W_t / W_{t - delta_tau} - 1`` over every full horizon."""
    R = _series(R)
    if delta_tau < 1:
        raise MetricError("delta_tau must be >= 1")
    if R.size < delta_tau:
        raise MetricError(f"series too short for delta_tau={delta_tau}: {R.size} returns")
    W = wealth_path(R)
    return float(np.mean(W[delta_tau:] / W[:-delta_tau] - 1.0))


def diversification(weights_per_window, n: int | None = None) -> tuple[float, float]:
    """``(NHI, ave#)``: normalized Herfindahl index and selected-asset count,
    both averaged over windows."""
    X = np.atleast_2d(np.asarray(weights_per_window, dtype=float))
    if X.size == 0:
        raise MetricError("no weight vectors")
    n = X.shape[1] if n is None else n
    count = float((X > SELECT_TOL).sum(axis=1).mean())
    if n == 1:
        return math.nan, count
    hi = (X ** 2).sum(axis=1)
    nhi = np.clip((1.0 - hi) / (1.0 - 1.0 / n), 0.0, 1.0)
    return float(nhi.mean()), count


@dataclass(frozen=True)
class MetricConfig:
    r_f: float = 0.0
    alpha: float = 0.05
    beta: float = 0.05
    delta_tau: int = 250


@dataclass(frozen=True)
class MetricsReport:
    exp_ret: float
    vol: float
    sharpe: float
    max_dd: float
    sortino: float
    rachev: float
    ave_roi: float
    nhi: float
    ave_count: float
    config: MetricConfig = MetricConfig()

    def values(self) -> dict[str, float]:
        d = asdict(self)
        d.pop("config")
        return d


def evaluate(returns, weights_per_window, cfg: MetricConfig = MetricConfig()) -> MetricsReport:
    R = _series(returns, 2)
    mean, vol, sh = basic_stats(R, cfg.r_f)
    # a series shorter than the horizon has no ROI sample
    roi = ave_roi(R, cfg.delta_tau) if R.size >= cfg.delta_tau else math.nan
    nhi, count = diversification(weights_per_window)
    return MetricsReport(mean, vol, sh, max_drawdown(R), sortino(R, cfg.r_f),
                         rachev(R, cfg.alpha, cfg.beta, cfg.r_f), roi, nhi, count, cfg)
