"""Price ingestion, return scenarios and rolling-window index sets.

Prices are expected to be already adjusted for dividends and splits; no
corporate-action handling happens here.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


@dataclass(frozen=True)
class PriceTable:
    dates: list[str]
    tickers: list[str]
    prices: np.ndarray  # shape (T0, n)

    def __post_init__(self):
        prices = np.asarray(self.prices, dtype=float)
        if prices.ndim != 2 or prices.shape != (len(self.dates), len(self.tickers)):
            raise DataError(
                f"price matrix shape {prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        bad = np.argwhere(~(prices > 0))
        if bad.size:
            i, k = bad[0]
            raise DataError(f"non-positive price at row {i + 1}, column {self.tickers[k]}")
        for i in range(1, len(self.dates)):
            if not self.dates[i] > self.dates[i - 1]:
                raise DataError(f"dates not strictly increasing at row {i + 1}")
        object.__setattr__(self, "prices", prices)

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class ScenarioMatrix:
    """T x n asset returns; every row is an equally likely scenario."""

    returns: np.ndarray
    tickers: list[str] = field(default_factory=list)
    dates: list[str] = field(default_factory=list)

    def __post_init__(self):
        r = np.asarray(self.returns, dtype=float)
        if r.ndim == 1:
            r = r[:, None]
        if r.ndim != 2 or r.shape[0] < 1 or r.shape[1] < 1:
            raise DataError(f"returns must be a nonempty T x n matrix, got shape {r.shape}")
        if not np.all(np.isfinite(r)):
            raise DataError("returns contain non-finite entries")
        object.__setattr__(self, "returns", r)
        if not self.tickers:
            object.__setattr__(self, "tickers", [f"A{k + 1}" for k in range(r.shape[1])])
        elif len(self.tickers) != r.shape[1]:
            raise DataError("ticker count does not match number of columns")

    @property
    def T(self) -> int:
        return self.returns.shape[0]

    @property
    def n(self) -> int:
        return self.returns.shape[1]

    @property
    def scenario_prob(self) -> np.ndarray:
        return np.full(self.T, 1.0 / self.T)

    def rows(self, start: int, stop: int) -> "ScenarioMatrix":
        """Sub-matrix of rows ``start..stop-1`` (0-based, half open)."""
        dates = self.dates[start:stop] if self.dates else []
        return ScenarioMatrix(self.returns[start:stop], list(self.tickers), dates)


@dataclass(frozen=True)
class WindowSpec:
    """One rolling window, 0-based inclusive row indices into a ScenarioMatrix."""

    in_start: int
    in_end: int
    out_start: int
    out_end: int

    @property
    def in_slice(self) -> slice:
        return slice(self.in_start, self.in_end + 1)

    @property
    def out_slice(self) -> slice:
        return slice(self.out_start, self.out_end + 1)

    @property
    def out_len(self) -> int:
        return self.out_end - self.out_start + 1


def load_prices(path) -> PriceTable:
    """Read a ``date,TICKER1,...,TICKERn`` CSV file.

    Dates are kept as strings and compared lexicographically, so ISO-8601
    is required for the monotonicity check to be meaningful.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"price file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"empty price file: {path}") from None
        header = [h.strip() for h in header]
        if len(header) < 2:
            raise DataError("header must be 'date,<ticker1>,...'")
        tickers = header[1:]
        dates, rows = [], []
        for lineno, raw in enumerate(reader, start=1):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(header):
                raise DataError(
                    f"ragged row {lineno}: expected {len(header)} fields, got {len(raw)}"
                )
            vals = []
            for k, cell in enumerate(raw[1:]):
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(
                        f"non-numeric value {cell!r} at row {lineno}, column {tickers[k]}"
                    ) from None
                if not v > 0 or not math.isfinite(v):
                    raise DataError(f"non-positive price at row {lineno}, column {tickers[k]}")
                vals.append(v)
            dates.append(raw[0].strip())
            rows.append(vals)
    if not rows:
        raise DataError(f"no data rows in {path}")
    return PriceTable(dates, tickers, np.array(rows, dtype=float))


def save_prices(table: PriceTable, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["date"] + list(table.tickers))
        for d, row in zip(table.dates, table.prices):
            w.writerow([d] + [repr(float(v)) for v in row])


def to_returns(prices: PriceTable) -> ScenarioMatrix:
    """Simple returns r_kt = (p_kt - p_k,t-1) / p_k,t-1."""
    p = prices.prices
    if p.shape[0] < 2:
        raise DataError("insufficient observations: need at least 2 price rows")
    r = (p[1:] - p[:-1]) / p[:-1]
    return ScenarioMatrix(r, list(prices.tickers), list(prices.dates[1:]))


def rolling_windows(T: int, in_len: int, step: int) -> list[WindowSpec]:
    """In-sample blocks of ``in_len`` rows, each followed by up to ``step``
    out-of-sample rows. The final out-of-sample block may be short."""
    if in_len < 1 or step < 1:
        raise DataError("in_len and step must be >= 1")
    if T <= in_len:
        raise DataError(f"no out-of-sample data: T={T} <= in_len={in_len}")
    count = math.ceil((T - in_len) / step)
    windows = []
    for w in range(count):
        in_start = w * step
        in_end = in_start + in_len - 1
        out_end = min(in_end + step, T - 1)
        windows.append(WindowSpec(in_start, in_end, in_end + 1, out_end))
    return windows
