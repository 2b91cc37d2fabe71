"""Multi-start pairwise-exchange local search over the portfolio simplex.

From each start, mass is moved between pairs of assets: a move takes
``min(step, x_j)`` from asset ``j`` and gives it to asset ``i``. At every
step size the best improving move is applied until none is left, then the
step is halved, from 0.25 down to 1e-6.

When the objective supplies a gradient, pairs are evaluated exactly in
order of first-order gain, in chunks of growing size, and the best
improving move of the first chunk that has one is applied. Every pair is
still checked before a step size is abandoned, so each returned point has
no improving pair move at the final step size.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .problem import SolveReport, Status

STEP_START = 0.25
STEP_MIN = 1e-6
IMPROVE_TOL = 1e-13
RANDOM_STARTS = 32
SCREEN = 48
PATTERN_EVERY = 16


@dataclass
class ReturnsObjective:
    """Objective that depends on the weights only through portfolio returns.

    ``fn`` maps portfolio returns ``(..., T)`` to values and ``grad`` (optional)
    maps a return vector ``(T,)`` to ``dF/dR``. Moves are evaluated by
    updating returns instead of recomputing ``X @ r.T``.
    """

    returns: np.ndarray
    fn: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, X):
        X = np.asarray(X, dtype=float)
        return self.fn(X @ self.returns.T)


def default_starts(n: int) -> int:
    return n + 1 + RANDOM_STARTS


def start_points(n: int, starts: int, seed: int) -> np.ndarray:
    """Equal weights, then the vertices, then seeded Dirichlet(1) draws."""
    pts = [np.full(n, 1.0 / n)]
    pts += list(np.eye(n))
    rng = np.random.default_rng(seed)
    extra = max(0, starts - len(pts))
    if extra:
        pts += list(rng.dirichlet(np.ones(n), size=extra))
    return np.array(pts[:starts])


class _Search:
    def __init__(self, objective, n: int, sign: float, max_moves: int, screen: int):
        self.obj = objective
        self.n = n
        self.sign = sign
        self.max_moves = max_moves
        self.screen = screen
        self.fast = isinstance(objective, ReturnsObjective)
        self.memo: dict[tuple[int, bytes], tuple[np.ndarray, float]] = {}
        self.evaluations = 0
        self.widenings = 0
        if self.fast:
            self.rT = np.ascontiguousarray(objective.returns.T)

    def value(self, x):
        if self.fast:
            return self.sign * float(self.obj.fn(self.obj.returns @ x))
        return self.sign * float(self.obj(x[None, :])[0])

    def eval_moves(self, x, ii, jj, amount, R):
        self.evaluations += ii.size
        if self.fast:
            Rc = R[None, :] + amount[:, None] * (self.rT[ii] - self.rT[jj])
            return self.sign * np.asarray(self.obj.fn(Rc), dtype=float)
        X = np.repeat(x[None, :], ii.size, axis=0)
        idx = np.arange(ii.size)
        X[idx, jj] -= amount
        X[idx, ii] += amount
        return self.sign * np.asarray(self.obj(X), dtype=float)

    def pattern(self, x, val, anchor):
        """Extrapolate along ``x - anchor`` with doubling lengths, up to the
        simplex boundary, while the value keeps improving."""
        d = x - anchor
        neg = d < 0
        if not neg.any():
            return x, val
        t_max = float(np.min(x[neg] / -d[neg]))
        best, t = None, 1.0
        while True:
            tt = min(t, t_max)
            y = np.maximum(x + tt * d, 0.0)
            y /= y.sum()
            v = self.value(y)
            if not v > val + IMPROVE_TOL * max(1.0, abs(val)):
                break
            best, val = y, v
            if tt == t_max:
                break
            t *= 2
        return (x, val) if best is None else (best, val)

    def run(self, x: np.ndarray):
        n = self.n
        val = self.value(x)
        R = self.obj.returns @ x if self.fast else None
        use_grad = self.fast and self.obj.grad is not None
        moves = 0
        visited = []
        level = 0
        step = STEP_START
        while step >= STEP_MIN and moves < self.max_moves:
            key = (level, x.tobytes())
            if key in self.memo:
                x, val = self.memo[key]
                break
            visited.append(key)
            anchor, since = x, 0
            while moves < self.max_moves:
                src = np.flatnonzero(x > 0)
                jj = np.repeat(src, n)
                ii = np.tile(np.arange(n), src.size)
                keep = ii != jj
                jj, ii = jj[keep], ii[keep]
                amount = np.minimum(step, x[jj])
                k = None
                if use_grad and ii.size > self.screen:
                    g = self.rT @ self.obj.grad(R)
                    score = self.sign * amount * (g[ii] - g[jj])
                    order = np.argsort(-score, kind="stable")
                else:
                    order = np.arange(ii.size)
                lo, size = 0, self.screen if use_grad else ii.size
                while k is None and lo < ii.size:
                    idx = order[lo:lo + size]
                    if lo > 0:
                        self.widenings += 1
                    vals = self.eval_moves(x, ii[idx], jj[idx], amount[idx], R)
                    b = int(np.argmax(vals))
                    if vals[b] > val + IMPROVE_TOL * max(1.0, abs(val)):
                        k = idx[b]
                    lo += size
                    size *= 4
                if k is None:
                    break
                j, i, a = jj[k], ii[k], amount[k]
                x = x.copy()
                if a >= x[j]:
                    x[i] += x[j]
                    x[j] = 0.0
                else:
                    x[j] -= a
                    x[i] += a
                val = self.value(x)
                moves += 1
                since += 1
                if since == PATTERN_EVERY:
                    x, val = self.pattern(x, val, anchor)
                    anchor, since = x, 0
                if self.fast:
                    R = self.obj.returns @ x
            step /= 2
            level += 1
        for key in visited:
            self.memo[key] = (x, val)
        return x, val, moves


def multistart(objective, n: int, starts: int | None = None, seed: int = 0,
               maximize: bool = True, max_moves: int = 100_000, screen: int = SCREEN) -> SolveReport:
    """Best local optimum over deterministic starts.

    Equal values keep the lower start index, so the result depends only on
    ``(objective, n, starts, seed)``.
    """
    t0 = time.perf_counter()
    starts = default_starts(n) if starts is None else int(starts)
    if starts < 1:
        raise ValueError("need at least one start")
    sign = 1.0 if maximize else -1.0
    search = _Search(objective, n, sign, max_moves, screen)
    best_x, best_val, best_idx = None, -np.inf, -1
    total_moves = 0
    for s, x0 in enumerate(start_points(n, starts, seed)):
        x, val, moves = search.run(x0)
        total_moves += moves
        if best_x is None or val > best_val + IMPROVE_TOL * max(1.0, abs(best_val)):
            best_x, best_val, best_idx = x, val, s
    return SolveReport(Status.OPTIMAL, x=best_x, objective=sign * best_val, starts=starts,
                       iterations=total_moves, wall_time=time.perf_counter() - t0,
                       info={"best_start": best_idx, "evaluations": search.evaluations,
                             "widenings": search.widenings})
