"""Seeded synthetic markets for tests and scale runs."""

from __future__ import annotations

import datetime as dt

import numpy as np

from .data_io import PriceTable, ScenarioMatrix


def synthetic_returns(n: int, T: int, seed: int = 0, df: float = 5.0) -> ScenarioMatrix:
    """One-factor daily returns with Student-t shocks.

    Betas in [0.5, 1.5], market vol about 1% a day, idiosyncratic vol
    between 0.8% and 2.5%, small positive drifts.
    """
    rng = np.random.default_rng(seed)
    scale = np.sqrt((df - 2) / df)
    market = 0.0003 + 0.01 * scale * rng.standard_t(df, size=T)
    beta = rng.uniform(0.5, 1.5, size=n)
    idio = rng.uniform(0.008, 0.025, size=n)
    drift = rng.normal(0.0002, 0.0002, size=n)
    eps = scale * rng.standard_t(df, size=(T, n)) * idio
    r = drift + market[:, None] * beta + eps
    r = np.clip(r, -0.5, 0.5)
    return ScenarioMatrix(r, [f"S{k + 1:02d}" for k in range(n)], business_days(T))


def synthetic_prices(n: int, T: int, seed: int = 0) -> PriceTable:
    """Prices whose simple returns are ``synthetic_returns(n, T - 1, seed)``."""
    sm = synthetic_returns(n, T - 1, seed)
    p = np.vstack([np.full(n, 100.0), 100.0 * np.cumprod(1.0 + sm.returns, axis=0)])
    return PriceTable(business_days(T), sm.tickers, p)


def business_days(T: int, start: str = "2000-01-03") -> list[str]:
    d = dt.date.fromisoformat(start)
    out = []
    while len(out) < T:
        if d.weekday() < 5:
            out.append(d.isoformat())
        d += dt.timedelta(days=1)
    return out
