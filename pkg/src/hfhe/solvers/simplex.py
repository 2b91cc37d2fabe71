"""Dense two-phase bounded-variable tableau simplex.

Finite upper bounds are handled implicitly: a nonbasic variable that
reaches its upper bound is complemented (``y' = u - y``), so every
nonbasic variable always sits at zero in the current orientation.

Entering columns are picked by most negative reduced cost; after a run of
degenerate pivots the solver falls back to Bland's rule (lowest index
entering, lowest basic index leaving on ratio ties) until the objective
moves again, which rules out cycling.

Inequality right-hand sides are loosened by a tiny deterministic amount
while pivoting to keep degenerate models moving. The tableau is rebuilt
from the original data every few hundred pivots, and at the end the true
right-hand side is restored and any leftover infeasibility is removed with
dual simplex pivots.
"""

from __future__ import annotations

import time

import numpy as np

from .problem import LpProblem, SolveReport, Status

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
DEGENERATE_RUN = 30
REINVERT_EVERY = 100
PERTURB = 1e-7


class _Tableau:
    """Rows 0..m-1 hold constraints, row m the reduced costs; the last
    column is the rhs (``-objective`` in the cost row)."""

    def __init__(self, A: np.ndarray, b: np.ndarray, upper: np.ndarray, basis: np.ndarray):
        m, N = A.shape
        self.A0 = A
        self.b0 = b.copy()
        self.tab = np.zeros((m + 1, N + 1))
        self.tab[:m, :N] = A
        self.tab[:m, N] = b
        self.upper = upper
        self.flipped = np.zeros(N, dtype=bool)
        self.basis = basis.astype(int).copy()
        self.cost = np.zeros(N)
        self.m = m
        self.iterations = 0
        self._since_reinvert = 0

    @property
    def rhs(self) -> np.ndarray:
        return self.tab[: self.m, -1]

    def set_costs(self, c: np.ndarray):
        self.cost = c
        cost = np.zeros(self.tab.shape[1])
        cost[: c.size] = np.where(self.flipped, -c, c)
        # the constant from complemented variables lands in the rhs cell
        cost[-1] = -float(c[self.flipped] @ self.upper[self.flipped]) if self.flipped.any() else 0.0
        cb = cost[self.basis]
        self.tab[self.m] = cost - cb @ self.tab[: self.m]

    def pivot(self, r: int, j: int):
        tab = self.tab
        row = tab[r] / tab[r, j]
        col = tab[:, j].copy()
        col[r] = 0.0
        tab -= np.outer(col, row)
        tab[r] = row
        self.basis[r] = j
        self.iterations += 1
        self._since_reinvert += 1
        if self._since_reinvert >= REINVERT_EVERY:
            self.reinvert()

    def reinvert(self):
        """Rebuild the tableau as ``B^-1 [A | b]`` from the original data."""
        self._since_reinvert = 0
        sign = np.where(self.flipped, -1.0, 1.0)
        A = self.A0 * sign
        b = self.b0 - self.A0[:, self.flipped] @ self.upper[self.flipped]
        B = A[:, self.basis]
        try:
            sol = np.linalg.solve(B, np.column_stack([A, b]))
        except np.linalg.LinAlgError:
            return
        self.tab[: self.m] = sol
        self.set_costs(self.cost)

    def restore_rhs(self, b: np.ndarray):
        self.b0 = b.copy()
        self.reinvert()

    def dual_cleanup(self, allowed: np.ndarray, max_iter: int) -> Status:
        """Dual simplex pivots until the basic solution respects its bounds."""
        m = self.m
        while True:
            rhs = self.rhs
            ub = self.upper[self.basis[:m]]
            over = rhs - ub
            viol = np.maximum(-rhs, over)
            r = int(np.argmax(viol))
            if viol[r] <= FEAS_TOL:
                return Status.OPTIMAL
            if self.iterations >= max_iter:
                return Status.ITERATION_LIMIT
            if over[r] > -rhs[r]:
                self.complement_basic(r)
            row = self.tab[r, :-1]
            d = self.tab[m, :-1]
            cand = np.flatnonzero(allowed & (row < -PIVOT_TOL))
            if cand.size == 0:
                return Status.INFEASIBLE
            ratios = np.maximum(d[cand], 0.0) / -row[cand]
            best = ratios.min()
            j = cand[np.flatnonzero(ratios <= best + 1e-12)][0]
            self.pivot(r, j)

    def complement_nonbasic(self, j: int):
        u = self.upper[j]
        self.tab[:, -1] -= u * self.tab[:, j]
        self.tab[:, j] *= -1
        self.flipped[j] = ~self.flipped[j]

    def complement_basic(self, r: int):
        j = self.basis[r]
        u = self.upper[j]
        self.tab[r] *= -1
        self.tab[r, j] = 1.0
        self.tab[r, -1] += u
        self.flipped[j] = ~self.flipped[j]

    def values(self) -> np.ndarray:
        N = self.tab.shape[1] - 1
        y = np.zeros(N)
        y[self.basis] = self.rhs
        return np.where(self.flipped, self.upper - y, y)

    def run(self, allowed: np.ndarray, max_iter: int, bland_only: bool = False) -> Status:
        """Minimize with entering columns restricted to ``allowed`` (bool mask)."""
        m = self.m
        degenerate = 0
        upper = self.upper
        while True:
            if self.iterations >= max_iter:
                return Status.ITERATION_LIMIT
            d = self.tab[m, :-1]
            candidates = np.flatnonzero(allowed & (d < -FEAS_TOL))
            if candidates.size == 0:
                return Status.OPTIMAL
            if bland_only or degenerate >= DEGENERATE_RUN:
                j = candidates[0]
            else:
                j = candidates[np.argmin(d[candidates])]
            col = self.tab[:m, j]
            rhs = self.rhs
            theta = upper[j]
            leave, to_upper = -1, False

            down = np.flatnonzero(col > PIVOT_TOL)
            if down.size:
                ratios = rhs[down] / col[down]
                best = ratios.min()
                if best < theta:
                    theta = best
                    ties = down[ratios <= best + 1e-12 * max(1.0, abs(best))]
                    leave = ties[np.argmin(self.basis[ties])]
            up = np.flatnonzero((col < -PIVOT_TOL) & np.isfinite(upper[self.basis[:m]]))
            if up.size:
                ratios = (upper[self.basis[up]] - rhs[up]) / -col[up]
                best = ratios.min()
                if best < theta or (leave >= 0 and best == theta):
                    ties = up[ratios <= best + 1e-12 * max(1.0, abs(best))]
                    cand = ties[np.argmin(self.basis[ties])]
                    if best < theta or self.basis[cand] < self.basis[leave]:
                        theta, leave, to_upper = best, cand, True

            if not np.isfinite(theta):
                return Status.UNBOUNDED
            degenerate = degenerate + 1 if theta <= FEAS_TOL else 0
            if leave < 0:
                self.complement_nonbasic(j)
                self.iterations += 1
                continue
            if to_upper:
                self.complement_basic(leave)
            self.pivot(leave, j)


def _standard_form(lp: LpProblem):
    """Map ``v = offset + S y`` with ``0 <= y <= u``."""
    N = lp.n_vars
    lb, ub = lp.lb, lp.ub
    src, sign, upper = [], [], []
    offset = np.zeros(N)
    for j in range(N):
        lo, hi = lb[j], ub[j]
        if np.isfinite(lo) and np.isfinite(hi) and hi - lo <= 0:
            if hi < lo:
                return None
            offset[j] = lo
            continue
        if np.isfinite(lo):
            offset[j] = lo
            src.append(j)
            sign.append(1.0)
            upper.append(hi - lo)
        elif np.isfinite(hi):
            offset[j] = hi
            src.append(j)
            sign.append(-1.0)
            upper.append(np.inf)
        else:
            src += [j, j]
            sign += [1.0, -1.0]
            upper += [np.inf, np.inf]
    src = np.asarray(src, dtype=int)
    sign = np.asarray(sign)
    upper = np.asarray(upper, dtype=float)
    A_eq = lp.A_eq[:, src] * sign
    b_eq = lp.b_eq - lp.A_eq @ offset
    A_le = lp.A_le[:, src] * sign
    b_le = lp.b_le - lp.A_le @ offset
    c = lp.c[src] * sign
    return src, sign, upper, offset, A_eq, b_eq, A_le, b_le, c


def solve_lp(lp: LpProblem, max_iter: int = 200_000, bland_only: bool = False) -> SolveReport:
    """Two-phase simplex on a general-form LP.

    On optimality ``info["duals_eq"]`` and ``info["duals_le"]`` hold the row
    multipliers ``y`` with ``c - A^T y`` the reduced costs (``duals_le <= 0``).
    """
    t0 = time.perf_counter()
    sf = _standard_form(lp)
    if sf is None:
        return SolveReport(Status.INFEASIBLE, wall_time=time.perf_counter() - t0)
    src, sign, upper, offset, A_eq, b_eq, A_le, b_le, c = sf
    K = src.size
    m_eq, m_le = A_eq.shape[0], A_le.shape[0]
    m = m_eq + m_le

    if m == 0:
        if np.any((c < -FEAS_TOL) & ~np.isfinite(upper)):
            return SolveReport(Status.UNBOUNDED, wall_time=time.perf_counter() - t0)
        y = np.where(c < 0, upper, 0.0)
        rep = _report(lp, src, sign, offset, y, 0, t0)
        rep.info.update(duals_eq=np.zeros(0), duals_le=np.zeros(0))
        return rep

    # columns: structural y | slacks for <= rows | artificials
    b = np.concatenate([b_eq, b_le])
    flip = np.where(b < 0, -1.0, 1.0)
    rng = np.random.default_rng(m * 7919 + K)
    loosen = np.concatenate([np.zeros(m_eq),
                             PERTURB * (1.0 + np.abs(b_le)) * rng.uniform(1.0, 2.0, m_le)])
    art_rows = np.flatnonzero(np.concatenate([np.ones(m_eq, bool), b_le < 0]))
    n_art = art_rows.size
    ncols = K + m_le + n_art
    full = np.zeros((m, ncols))
    full[:m_eq, :K] = A_eq
    full[m_eq:, :K] = A_le
    full[m_eq:, K:K + m_le] = np.eye(m_le)
    full *= flip[:, None]
    b_true = b * flip
    b = (b + loosen) * flip
    basis = np.empty(m, dtype=int)
    basis[m_eq:] = K + np.arange(m_le)
    ident = np.empty(m, dtype=int)  # a +e_i column for each row, used for duals
    ident[m_eq:] = K + np.arange(m_le)
    for a, i in enumerate(art_rows):
        full[i, K + m_le + a] = 1.0
        basis[i] = ident[i] = K + m_le + a

    col_upper = np.concatenate([upper, np.full(m_le + n_art, np.inf)])
    tab = _Tableau(full, b, col_upper, basis)
    is_art = np.zeros(ncols, dtype=bool)
    is_art[K + m_le:] = True

    if n_art:
        c1 = np.zeros(ncols)
        c1[is_art] = 1.0
        tab.set_costs(c1)
        status = tab.run(~is_art, max_iter, bland_only)
        if status is Status.ITERATION_LIMIT:
            return SolveReport(status, iterations=tab.iterations, wall_time=time.perf_counter() - t0)
        infeas = -tab.tab[tab.m, -1]
        scale = max(1.0, float(np.abs(b).max()))
        if infeas > 1e-8 * scale:
            return SolveReport(Status.INFEASIBLE, iterations=tab.iterations,
                               wall_time=time.perf_counter() - t0, info={"infeasibility": infeas})
        # drive remaining artificials out of the basis
        for i in range(tab.m):
            if is_art[tab.basis[i]]:
                row = tab.tab[i, :ncols]
                cand = np.flatnonzero(~is_art & (np.abs(row) > PIVOT_TOL))
                if cand.size:
                    tab.pivot(i, cand[np.argmax(np.abs(row[cand]))])
                # otherwise the row is redundant and its artificial stays basic at zero

    c2 = np.zeros(ncols)
    c2[:K] = c
    tab.set_costs(c2)
    status = tab.run(~is_art, max_iter, bland_only)
    if status is Status.OPTIMAL:
        tab.restore_rhs(b_true)
        status = tab.dual_cleanup(~is_art, max_iter)
        if status is Status.OPTIMAL:
            # cleanup keeps dual feasibility; a final primal pass mops up round-off
            status = tab.run(~is_art, max_iter, bland_only)
    if status is not Status.OPTIMAL:
        return SolveReport(status, iterations=tab.iterations, wall_time=time.perf_counter() - t0)
    y = tab.values()
    rep = _report(lp, src, sign, offset, y[:K], tab.iterations, t0)
    d_ident = tab.tab[tab.m, ident]
    duals = -flip * np.where(tab.flipped[ident], -d_ident, d_ident)
    rep.info.update(duals_eq=duals[:m_eq], duals_le=duals[m_eq:])
    return rep


def _report(lp, src, sign, offset, y, iterations, t0) -> SolveReport:
    v = offset.copy()
    np.add.at(v, src, sign * y)
    x = v[lp.blocks["x"]].copy() if "x" in lp.blocks else None
    return SolveReport(Status.OPTIMAL, x=x, objective=float(lp.c @ v), values=v,
                       iterations=iterations, wall_time=time.perf_counter() - t0)
