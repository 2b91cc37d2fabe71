"""Portfolio objective evaluators.

Every function here is a pure evaluator; the optimization direction
belongs to :mod:`hfhe.solvers`. Scenario matrices may be passed either as
:class:`~hfhe.data_io.ScenarioMatrix` or as a plain ``T x n`` array.

The ``*_from_returns`` variants take portfolio returns with scenarios on
the last axis, so a batch of candidate portfolios ``(k, T)`` is evaluated
in one call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_io import ScenarioMatrix

WEIGHT_SUM_TOL = 1e-9
WEIGHT_NEG_TOL = 1e-12


@dataclass(frozen=True)
class PtParams:
    alpha: float = 0.88
    beta: float = 2.25

    def __post_init__(self):
        if not self.alpha <= 1:
            raise ValueError(f"alpha must be <= 1, got {self.alpha}")
        if not self.beta >= 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")


def returns_matrix(sm) -> np.ndarray:
    if isinstance(sm, ScenarioMatrix):
        return sm.returns
    r = np.asarray(sm, dtype=float)
    return r[:, None] if r.ndim == 1 else r


def check_weights(x, n: int | None = None) -> np.ndarray:
    """Validate a long-only, fully invested weight vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("weights must be a vector")
    if n is not None and x.size != n:
        raise ValueError(f"dimension mismatch: {x.size} weights for {n} assets")
    if abs(x.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights sum to {x.sum()!r}, not 1")
    if np.any(x < -WEIGHT_NEG_TOL):
        raise ValueError("negative weight: short selling is not allowed")
    return x


def portfolio_returns(sm, x) -> np.ndarray:
    r = returns_matrix(sm)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != r.shape[1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} weights for {r.shape[1]} assets")
    return r @ x if x.ndim == 1 else x @ r.T


def hfhe_from_returns(R, lambda_plus: float, lambda_minus: float) -> np.ndarray | float:
    R = np.asarray(R, dtype=float)
    Rp = np.maximum(R, 0.0)
    Rm = np.minimum(R, 0.0)
    dev_p = np.abs(Rp - Rp.mean(axis=-1, keepdims=True)).mean(axis=-1)
    dev_m = np.abs(Rm - Rm.mean(axis=-1, keepdims=True)).mean(axis=-1)
    out = R.mean(axis=-1) + (2 * lambda_plus - 1) * dev_p + (2 * lambda_minus - 1) * dev_m
    return float(out) if out.ndim == 0 else out


def hfhe_objective(sm, x, lambda_plus: float = 0.30, lambda_minus: float = 0.69) -> float:
    """HF/HE value of the portfolio return distribution (equally likely scenarios)."""
    return hfhe_from_returns(portfolio_returns(sm, x), lambda_plus, lambda_minus)


def hfhe_grad_returns(R, lambda_plus: float, lambda_minus: float) -> np.ndarray:
    """A (sub)gradient of :func:`hfhe_from_returns` with respect to ``R`` (a vector)."""
    R = np.asarray(R, dtype=float)
    T = R.size
    out = np.full(T, 1.0 / T)
    for part, coef in ((np.maximum(R, 0.0), 2 * lambda_plus - 1),
                       (np.minimum(R, 0.0), 2 * lambda_minus - 1)):
        s = np.sign(part - part.mean())
        out += np.where(part != 0, coef * (s - s.mean()) / T, 0.0)
    return out


def pt_from_returns(R, pt: PtParams = PtParams()) -> np.ndarray | float:
    R = np.asarray(R, dtype=float)
    a = np.abs(R)
    # 0**alpha is taken as 0
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(a > 0, a**pt.alpha, 0.0)
    out = np.where(R < 0, -pt.beta * v, v).mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def pt_grad_returns(R, pt: PtParams = PtParams()) -> np.ndarray:
    """Gradient of :func:`pt_from_returns` with respect to ``R``; 0 where ``R = 0``."""
    R = np.asarray(R, dtype=float)
    a = np.abs(R)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(a > 0, pt.alpha * a ** (pt.alpha - 1), 0.0)
    return np.where(R < 0, pt.beta * slope, slope) / R.size


def pt_objective(sm, x, pt: PtParams = PtParams()) -> float:
    """Prospect-theory value, reference point 0."""
    return pt_from_returns(portfolio_returns(sm, x), pt)


def mad_from_returns(R) -> np.ndarray | float:
    R = np.asarray(R, dtype=float)
    out = np.abs(R - R.mean(axis=-1, keepdims=True)).mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def mad(sm, x) -> float:
    """Mean absolute deviation of the portfolio return from its mean."""
    return mad_from_returns(portfolio_returns(sm, x))


def mean_mad_from_returns(R, risk_weight: float) -> np.ndarray | float:
    """``-mean + risk_weight * MAD``, the Mean-MAD criterion (to minimize)."""
    R = np.asarray(R, dtype=float)
    return -R.mean(axis=-1) + risk_weight * mad_from_returns(R)


def covariance(sm) -> np.ndarray:
    """Population (1/T) covariance matrix of asset returns."""
    r = returns_matrix(sm)
    if r.shape[0] < 2:
        raise ValueError("covariance needs at least 2 scenarios")
    centered = r - r.mean(axis=0)
    cov = centered.T @ centered / r.shape[0]
    return 0.5 * (cov + cov.T)


def ew(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one asset")
    return np.full(n, 1.0 / n)
