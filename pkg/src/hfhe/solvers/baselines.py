"""Minimum-variance and minimum-MAD portfolios."""

from __future__ import annotations

import time

import numpy as np

from ..objectives import mad_from_returns, returns_matrix
from .models import build_min_mad_lp
from .problem import LpProblem, SolveReport, SolverError, Status
from .simplex import solve_lp


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = 1}`` (sort based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.flatnonzero(u - css / idx > 0)[-1]
    tau = css[rho] / (rho + 1)
    return np.maximum(v - tau, 0.0)


def solve_min_variance(Sigma, tol: float = 1e-9, max_iter: int = 100_000) -> SolveReport:
    """Long-only minimum variance by projected gradient with a fixed step.

    The step ``1 / (2 * max_i sum_j |sigma_ij|)`` is the inverse of a bound
    on the gradient's Lipschitz constant. Stops once the gradient mapping
    norm drops to ``tol``.
    """
    t0 = time.perf_counter()
    S = np.asarray(Sigma, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise SolverError("covariance matrix must be square")
    if not np.allclose(S, S.T, rtol=0, atol=1e-12 * max(1.0, np.abs(S).max())):
        raise SolverError("covariance matrix is not symmetric")
    n = S.shape[0]
    x = np.full(n, 1.0 / n)
    lip = 2.0 * np.abs(S).sum(axis=1).max()
    if lip == 0:
        return SolveReport(Status.OPTIMAL, x=x, objective=0.0, wall_time=time.perf_counter() - t0)
    step = 1.0 / lip
    status = Status.ITERATION_LIMIT
    it = 0
    for it in range(1, max_iter + 1):
        x_new = project_simplex(x - step * 2.0 * (S @ x))
        gmap = np.linalg.norm(x - x_new) / step
        x = x_new
        if gmap <= tol:
            status = Status.OPTIMAL
            break
    return SolveReport(status, x=x, objective=float(x @ S @ x), iterations=it,
                       wall_time=time.perf_counter() - t0, info={"gradient_mapping": gmap})


def _dual_min_mad_lp(r: np.ndarray) -> LpProblem:
    """``max g  s.t.  g <= sum_t pi_t a_tk  (all k),  |pi_t| <= 1/T``.

    Its row multipliers are the minimum-MAD weights; it has ``n`` rows
    instead of ``2T + 1``.
    """
    T, n = r.shape
    a = r - r.mean(axis=0)
    c = np.zeros(T + 1)
    c[T] = -1.0
    A_le = np.hstack([-a.T, np.ones((n, 1))])
    lb = np.concatenate([np.full(T, -1.0 / T), [-np.inf]])
    ub = np.concatenate([np.full(T, 1.0 / T), [np.inf]])
    return LpProblem(c, A_le=A_le, b_le=np.zeros(n), lb=lb, ub=ub,
                     blocks={"pi": slice(0, T), "gamma": slice(T, T + 1)})


def solve_min_mad(sm, method: str = "dual") -> SolveReport:
    """Minimum-MAD portfolio.

    ``method="primal"`` solves the linearized ``(x, d)`` model directly;
    ``"dual"`` solves its LP dual and reads the weights off the row
    multipliers, which is far cheaper when ``T >> n``.
    """
    r = returns_matrix(sm)
    if method == "primal":
        rep = solve_lp(build_min_mad_lp(r))
        if rep.optimal:
            rep.info["mad"] = mad_from_returns(r @ rep.x)
        return rep
    if method != "dual":
        raise ValueError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    rep = solve_lp(_dual_min_mad_lp(r))
    if not rep.optimal:
        return rep
    x = np.maximum(-rep.info["duals_le"], 0.0)
    x /= x.sum()
    value = -rep.objective
    return SolveReport(Status.OPTIMAL, x=x, objective=value, iterations=rep.iterations,
                       wall_time=time.perf_counter() - t0,
                       info={"mad": mad_from_returns(r @ x), "method": "dual"})
