"""Half-Full/Half-Empty functionals on discrete lotteries.

A lottery is split into its gain part ``Y+ = max(Y, 0)`` and loss part
``Y- = min(Y, 0)``; the functional corrects the mean by weighting the
absolute deviations of each part around its own mean.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

PROB_TOL = 1e-12
CLASSIFY_TOL = 1e-10


class LotteryError(ValueError):
    pass


@dataclass(frozen=True)
class Lottery:
    outcomes: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.outcomes, dtype=float))
        p = np.atleast_1d(np.asarray(self.probs, dtype=float))
        if y.ndim != 1 or y.shape != p.shape or y.size == 0:
            raise LotteryError("outcomes and probs must be nonempty vectors of equal length")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(p))):
            raise LotteryError("lottery contains non-finite values")
        if np.any(p < 0):
            raise LotteryError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > PROB_TOL:
            raise LotteryError(f"probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "outcomes", y)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_pairs(cls, pairs) -> "Lottery":
        """Build from ``[[outcome, prob], ...]``."""
        arr = np.asarray(pairs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise LotteryError("expected a list of [outcome, probability] pairs")
        return cls(arr[:, 0], arr[:, 1])

    @classmethod
    def uniform(cls, outcomes) -> "Lottery":
        y = np.asarray(outcomes, dtype=float)
        return cls(y, np.full(y.size, 1.0 / y.size))

    def mean(self) -> float:
        return float(self.probs @ self.outcomes)

    def with_probs(self, probs) -> "Lottery":
        return Lottery(self.outcomes, probs)


@dataclass(frozen=True)
class HfheParams:
    lambda_plus: float = 0.30
    lambda_minus: float = 0.69
    q: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.lambda_plus <= 1.0:
            raise LotteryError(f"lambda_plus must lie in [0, 1], got {self.lambda_plus}")
        if not 0.0 <= self.lambda_minus <= 1.0:
            raise LotteryError(f"lambda_minus must lie in [0, 1], got {self.lambda_minus}")
        if not self.q > 0:
            raise LotteryError("q must be positive")


class Attitude(str, enum.Enum):
    AVERSE = "averse"
    SEEKING = "seeking"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class RiskAttitude:
    attitude: Attitude
    m: float | None  # None when the gain-part deviation is zero
    k: float | None
    threshold: float | None


def _part_deviations(y: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    """E|Y+ - mu+| and E|Y- - mu-| under weights ``p``."""
    yp = np.maximum(y, 0.0)
    ym = np.minimum(y, 0.0)
    dev_p = float(p @ np.abs(yp - p @ yp))
    dev_m = float(p @ np.abs(ym - p @ ym))
    return dev_p, dev_m


def h_lambda(lottery: Lottery, lam: float) -> float:
    """Single-parameter functional for nonnegative lotteries.

    ``mu + 2 * (lam * E[(Y-mu)+] + (1-lam) * E[(Y-mu)-])``; ``lam = 1/2``
    gives back the expected value.
    """
    if not 0.0 <= lam <= 1.0:
        raise LotteryError(f"lambda must lie in [0, 1], got {lam}")
    y, p = lottery.outcomes, lottery.probs
    if np.any(y < 0):
        raise LotteryError("lottery not nonnegative; use h2")
    mu = float(p @ y)
    up = float(p @ np.maximum(y - mu, 0.0))
    down = float(p @ np.minimum(y - mu, 0.0))
    return mu + 2.0 * (lam * up + (1.0 - lam) * down)


def _h2_weighted(y: np.ndarray, p: np.ndarray, lambda_plus: float, lambda_minus: float) -> float:
    dev_p, dev_m = _part_deviations(y, p)
    return float(p @ y) + (2 * lambda_plus - 1) * dev_p + (2 * lambda_minus - 1) * dev_m


def h2(lottery: Lottery, params: HfheParams) -> float:
    """Two-parameter functional for mixed lotteries; equals the certainty
    equivalent. ``params.q`` is ignored (see :func:`h_q`)."""
    return _h2_weighted(lottery.outcomes, lottery.probs, params.lambda_plus, params.lambda_minus)


def distort(probs, q: float) -> np.ndarray:
    """Power weighting ``p_i**q / sum_j p_j**q``.

    Zero-probability outcomes stay at zero weight for every ``q > 0``.
    """
    if not q > 0:
        raise LotteryError("q must be positive")
    p = np.asarray(probs, dtype=float)
    if q == 1.0:
        return p.copy()
    w = p**q
    return w / w.sum()


def h_q(lottery: Lottery, params: HfheParams) -> float:
    """Functional with every expectation taken under distorted weights."""
    w = distort(lottery.probs, params.q)
    return _h2_weighted(lottery.outcomes, w, params.lambda_plus, params.lambda_minus)


def classify_attitude(
    lottery: Lottery, lambda_plus: float, lambda_minus: float, tol: float = CLASSIFY_TOL
) -> RiskAttitude:
    """Risk attitude from the line ``lambda_plus = -m * lambda_minus + k``.

    Averse below the line, seeking above it. When the gain part has no
    spread the slope is undefined and the decision falls to ``lambda_minus``
    against 1/2.
    """
    dev_p, dev_m = _part_deviations(lottery.outcomes, lottery.probs)
    if dev_p == 0.0 and dev_m == 0.0:
        return RiskAttitude(Attitude.NEUTRAL, None, None, None)
    if dev_p == 0.0:
        return RiskAttitude(_compare(lambda_minus, 0.5, tol), None, None, None)
    m = dev_m / dev_p
    k = 0.5 * (1.0 + m)
    threshold = -m * lambda_minus + k
    return RiskAttitude(_compare(lambda_plus, threshold, tol), m, k, threshold)


def _compare(value: float, threshold: float, tol: float) -> Attitude:
    if value < threshold - tol:
        return Attitude.AVERSE
    if value > threshold + tol:
        return Attitude.SEEKING
    return Attitude.NEUTRAL
