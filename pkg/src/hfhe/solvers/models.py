"""LP / MILP model builders for the portfolio problems."""

from __future__ import annotations

import numpy as np

from ..objectives import returns_matrix
from .problem import LpProblem, MilpProblem


class RegimeError(ValueError):
    pass


def build_min_mad_lp(sm) -> LpProblem:
    """Linearized minimum-MAD problem over ``(x, d)``.

    ``d_t >= +/- sum_k (r_kt - mu_k) x_k``, budget row, long only.
    """
    r = returns_matrix(sm)
    T, n = r.shape
    a = r - r.mean(axis=0)
    c = np.concatenate([np.zeros(n), np.full(T, 1.0 / T)])
    eye = np.eye(T)
    A_le = np.vstack([np.hstack([a, -eye]), np.hstack([-a, -eye])])
    b_le = np.zeros(2 * T)
    A_eq = np.concatenate([np.ones(n), np.zeros(T)])[None, :]
    return LpProblem(c, A_eq, [1.0], A_le, b_le,
                     blocks={"x": slice(0, n), "d": slice(n, n + T)})


def choose_big_m(sm) -> float:
    """``2 * max|r| + 1``.

    For x on the simplex ``|R_t(x)| <= max_k |r_kt|``, so every deviation
    variable and every gap between a deviation and its mean stays strictly
    below this value.
    """
    r = returns_matrix(sm)
    return 2.0 * float(np.abs(r).max(initial=0.0)) + 1.0


def build_hfhe_milp(sm, lambda_plus: float, lambda_minus: float, big_m: float | None = None,
                    literal: bool = False) -> MilpProblem:
    """Big-M mixed-integer model of the HF/HE portfolio problem.

    Variables, in order: ``x (n) | d+ (T) | d- (T) | z+ (T) | z- (T) |
    ybar (T) | ytil (T) | w (T)``. The objective is the negated HF/HE value,
    so minimizing it maximizes the functional.

    With ``e_t = d-_t - mean(d-)``, ``z-_t`` must reach ``-|e_t|``. ``ybar``
    selects ``e_t >= 0`` (then ``z-_t >= -e_t``), ``ytil`` selects
    ``e_t <= 0`` (then ``z-_t >= e_t``). ``literal=True`` instead gates the
    sign of ``z-_t`` itself, as the model is usually printed; that variant
    only captures ``min(e_t, 0)`` and misstates the loss-side term.
    """
    if not lambda_plus <= 0.5 <= lambda_minus:
        raise RegimeError("MILP valid only for lambda_plus <= 1/2 <= lambda_minus; use multistart")
    r = returns_matrix(sm)
    T, n = r.shape
    M = choose_big_m(r) if big_m is None else float(big_m)
    off = {"x": 0, "d_plus": n, "d_minus": n + T, "z_plus": n + 2 * T, "z_minus": n + 3 * T,
           "y_bar": n + 4 * T, "y_tilde": n + 5 * T, "w": n + 6 * T}
    N = n + 7 * T
    blocks = {k: slice(v, v + (n if k == "x" else T)) for k, v in off.items()}
    dp, dm, zp, zm = off["d_plus"], off["d_minus"], off["z_plus"], off["z_minus"]
    yb, yt, w = off["y_bar"], off["y_tilde"], off["w"]

    c = np.zeros(N)
    c[blocks["x"]] = -r.mean(axis=0)
    c[blocks["z_plus"]] = (1 - 2 * lambda_plus) / T
    c[blocks["z_minus"]] = (2 * lambda_minus - 1) / T

    le_rows, le_rhs = [], []
    eq_rows, eq_rhs = [], []

    def dev(base: int, t: int) -> np.ndarray:
        # coefficients of (v_t - mean(v)) for the block starting at base
        row = np.zeros(N)
        row[base:base + T] = -1.0 / T
        row[base + t] += 1.0
        return row

    for t in range(T):
        ep, em = dev(dp, t), dev(dm, t)
        # z+_t >= |d+_t - mean(d+)|
        row = -ep
        row[zp + t] -= 1
        le_rows.append(row); le_rhs.append(0.0)
        row = ep.copy()
        row[zp + t] -= 1
        le_rows.append(row); le_rhs.append(0.0)
        # ybar branch
        if literal:
            row = np.zeros(N)
            row[zm + t] = -1
        else:
            row = -em
        row[yb + t] += M
        le_rows.append(row); le_rhs.append(M)
        row = -em
        row[zm + t] -= 1
        row[yb + t] += M
        le_rows.append(row); le_rhs.append(M)
        # ytilde branch
        if literal:
            row = np.zeros(N)
            row[zm + t] = 1
        else:
            row = em.copy()
        row[yt + t] += M
        le_rows.append(row); le_rhs.append(M)
        row = em.copy()
        row[zm + t] -= 1
        row[yt + t] += M
        le_rows.append(row); le_rhs.append(M)
        # one branch per scenario
        row = np.zeros(N)
        row[yb + t] = row[yt + t] = 1
        eq_rows.append(row); eq_rhs.append(1.0)
        # d+_t - d-_t = R_t(x)
        row = np.zeros(N)
        row[dp + t], row[dm + t] = 1, -1
        row[:n] = -r[t]
        eq_rows.append(row); eq_rhs.append(0.0)
        # complementarity d+_t d-_t = 0 through w_t
        row = np.zeros(N)
        row[dp + t], row[w + t] = 1, -M
        le_rows.append(row); le_rhs.append(0.0)
        row = np.zeros(N)
        row[dm + t], row[w + t] = 1, M
        le_rows.append(row); le_rhs.append(M)

    row = np.zeros(N)
    row[:n] = 1
    eq_rows.append(row); eq_rhs.append(1.0)

    lb = np.zeros(N)
    ub = np.full(N, np.inf)
    lb[blocks["z_minus"]] = -np.inf
    ub[yb:] = 1.0
    lp = LpProblem(c, np.array(eq_rows), eq_rhs, np.array(le_rows), le_rhs, lb, ub, blocks)
    binaries = np.arange(yb, N)
    # complementarity first, then the z- branch selectors
    order = np.concatenate([np.arange(w, w + T), np.arange(yb, yb + T), np.arange(yt, yt + T)])
    return MilpProblem(lp, binaries, M, order,
                       context={"lambda_plus": lambda_plus, "lambda_minus": lambda_minus,
                                "returns": r, "literal": literal})


def deviation_split(r, x) -> tuple[np.ndarray, np.ndarray]:
    """Gain/loss deviations ``d+ = max(R, 0)``, ``d- = max(-R, 0)`` of the portfolio."""
    R = returns_matrix(r) @ np.asarray(x, dtype=float)
    return np.maximum(R, 0.0), np.maximum(-R, 0.0)


def in_f_set(r, x, d_plus, d_minus, tol: float = 1e-12) -> bool:
    """Membership in the set defined through ``max(R, 0)`` / ``max(-R, 0)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -tol) or abs(x.sum() - 1.0) > tol:
        return False
    fp, fm = deviation_split(r, x)
    return bool(np.all(np.abs(d_plus - fp) <= tol) and np.all(np.abs(d_minus - fm) <= tol))


def in_s_set(r, x, d_plus, d_minus, tol: float = 1e-12) -> bool:
    """Membership in the balance / complementarity / sign description."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -tol) or abs(x.sum() - 1.0) > tol:
        return False
    R = returns_matrix(r) @ x
    return bool(np.all(np.abs(d_plus - d_minus - R) <= tol)
                and np.all(np.abs(d_plus * d_minus) <= tol)
                and np.all(d_plus >= -tol) and np.all(d_minus >= -tol))


def hfhe_from_deviations(r, x, d_plus, d_minus, lambda_plus: float, lambda_minus: float) -> float:
    """HF/HE value written in the deviation variables (to be maximized)."""
    mu = returns_matrix(r).mean(axis=0) @ np.asarray(x, dtype=float)
    return float(mu + (2 * lambda_plus - 1) * np.abs(d_plus - d_plus.mean()).mean()
                 + (2 * lambda_minus - 1) * np.abs(d_minus - d_minus.mean()).mean())


def milp_point(milp: MilpProblem, x) -> np.ndarray:
    """Cheapest MILP-feasible completion of the weights ``x``.

    Scenarios with ``R_t(x) = 0`` go to the gain branch (``w_t = 1``).
    """
    lp, ctx = milp.lp, milp.context
    b = lp.blocks
    x = np.asarray(x, dtype=float)
    dp, dm = deviation_split(ctx["returns"], x)
    v = np.zeros(lp.n_vars)
    v[b["x"]] = x
    v[b["d_plus"]] = dp
    v[b["d_minus"]] = dm
    v[b["z_plus"]] = np.abs(dp - dp.mean())
    e = dm - dm.mean()
    if ctx.get("literal"):
        gain = e > 0
        v[b["z_minus"]] = np.where(gain, 0.0, e)
    else:
        gain = e >= 0
        v[b["z_minus"]] = -np.abs(e)
    v[b["y_bar"]] = gain
    v[b["y_tilde"]] = ~gain
    v[b["w"]] = dm == 0
    return v
