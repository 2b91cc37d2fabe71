"""Rolling-window out-of-sample backtest."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data_io import ScenarioMatrix, WindowSpec, rolling_windows
from .strategies import StrategySpec, clean_weights, solve_strategy


class BacktestError(RuntimeError):
    pass


@dataclass
class BacktestResult:
    strategy: StrategySpec
    windows: list[WindowSpec]
    weights: np.ndarray          # (n_windows, n)
    returns: np.ndarray          # out-of-sample series, length T - in_len
    wealth: np.ndarray           # length T - in_len + 1, starts at 1
    diagnostics: list[dict] = field(default_factory=list)


def wealth_path(returns) -> np.ndarray:
    """``W_0 = 1``, ``W_t = W_{t-1} (1 + R_t)``."""
    R = np.asarray(returns, dtype=float).ravel()
    if np.any(R <= -1):
        t = int(np.flatnonzero(R <= -1)[0])
        raise BacktestError(f"wealth annihilated at step {t + 1}")
    return np.concatenate([[1.0], np.cumprod(1.0 + R)])


def window_seed(seed: int, w: int) -> int:
    return int(np.random.SeedSequence([seed, w]).generate_state(1)[0])


def _hold(x: np.ndarray, r: np.ndarray, drift: bool) -> np.ndarray:
    if not drift:
        if np.all(x == x[0]):
            return r.mean(axis=1)  # equal weights: exactly the row means
        return r @ x
    out = np.empty(r.shape[0])
    h = x.copy()
    for t in range(r.shape[0]):
        out[t] = h @ r[t]
        h = h * (1.0 + r[t])
        h /= h.sum()
    return out


def run_backtest(sm: ScenarioMatrix, strat: StrategySpec, in_len: int = 500, step: int = 20,
                 seed: int = 0, drift: bool = False, log_path=None, progress=None) -> BacktestResult:
    """Optimize on each in-sample block, hold the weights over the following
    out-of-sample block, and concatenate the realized returns.

    By default the target weights are restored every day, so
    ``R_t = x . r_t``; ``drift=True`` holds the initial share counts instead.
    """
    r = sm.returns
    windows = rolling_windows(sm.T, in_len, step)
    weights = np.empty((len(windows), sm.n))
    pieces, diags = [], []
    log = open(log_path, "w") if log_path else None
    try:
        for w, win in enumerate(windows):
            try:
                rep = solve_strategy(r[win.in_slice], strat, seed=window_seed(seed, w))
            except Exception as exc:
                raise BacktestError(f"{strat.label}: window {w}: {exc}") from exc
            if not rep.optimal:
                raise BacktestError(f"{strat.label}: window {w}: solver status {rep.status.value}")
            x = clean_weights(rep.x)
            weights[w] = x
            pieces.append(_hold(x, r[win.out_slice], drift))
            rec = {"window": w, "in_start": win.in_start, "in_end": win.in_end,
                   "out_start": win.out_start, "out_end": win.out_end,
                   "status": rep.status.value, "objective": rep.objective,
                   "iterations": rep.iterations, "wall_time": rep.wall_time,
                   "weights": x.tolist()}
            diags.append(rec)
            if log:
                log.write(json.dumps(rec) + "\n")
                log.flush()
            if progress:
                progress(w, len(windows))
    finally:
        if log:
            log.close()
    R = np.concatenate(pieces)
    return BacktestResult(strat, windows, weights, R, wealth_path(R), diags)


def write_wealth_csv(result: BacktestResult, path, dates=None) -> None:
    path = Path(path)
    start = result.windows[0].out_start
    with path.open("w") as fh:
        fh.write("step,date,return,wealth\n")
        fh.write(f"0,,,{float(result.wealth[0])!r}\n")
        for t, (ret, w) in enumerate(zip(result.returns, result.wealth[1:]), start=1):
            d = dates[start + t - 1] if dates else ""
            fh.write(f"{t},{d},{float(ret)!r},{float(w)!r}\n")
