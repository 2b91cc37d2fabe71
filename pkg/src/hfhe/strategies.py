"""Strategy specifications and the single-window optimizer behind them."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .objectives import (PtParams, covariance, ew, hfhe_from_returns, hfhe_grad_returns,
                         pt_from_returns, pt_grad_returns, returns_matrix)
from .solvers import RegimeError, SolveReport, SolverError, Status, build_hfhe_milp
from .solvers.baselines import solve_min_mad, solve_min_variance
from .solvers.branch_bound import solve_milp
from .solvers.local_search import ReturnsObjective, multistart

# the MILP is solved on dense tableaus with about 9T rows and 8T columns
MILP_MAX_SCENARIOS = 200


class Kind(str, enum.Enum):
    EW = "EW"
    MINV = "MinV"
    MINMAD = "MinMAD"
    PT = "PT"
    HFHE = "HFHE"


@dataclass(frozen=True)
class StrategySpec:
    """One portfolio rule.

    ``starts`` is the multistart start count; ``None`` means ``n + 1 + 32``.
    """

    kind: Kind
    lambda_plus: float = 0.30
    lambda_minus: float = 0.69
    alpha: float = 0.88
    beta: float = 2.25
    solver: str = "multistart"
    starts: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", parse_kind(self.kind))
        if self.solver not in ("multistart", "milp"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.solver == "milp":
            if self.kind is not Kind.HFHE:
                raise ValueError(f"solver 'milp' is only available for HFHE, not {self.kind.value}")
            if not self.lambda_plus <= 0.5 <= self.lambda_minus:
                raise RegimeError("MILP valid only for lambda_plus <= 1/2 <= lambda_minus; use multistart")
        if self.starts is not None and self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.kind is Kind.PT:
            PtParams(self.alpha, self.beta)

    @property
    def label(self) -> str:
        if self.kind is Kind.HFHE:
            return f"HF/HE {self.lambda_plus:.2f}-{self.lambda_minus:.2f}"
        return self.kind.value

    @property
    def slug(self) -> str:
        """File-name friendly label."""
        if self.kind is Kind.HFHE:
            return f"HFHE_{self.lambda_plus:.2f}_{self.lambda_minus:.2f}"
        return self.kind.value


def parse_kind(name) -> Kind:
    if isinstance(name, Kind):
        return name
    key = str(name).strip().replace("/", "").upper()
    for k in Kind:
        if k.value.upper() == key:
            return k
    raise ValueError(f"unknown strategy {name!r}; expected one of {[k.value for k in Kind]}")


def solve_strategy(sm, spec: StrategySpec, seed: int = 0) -> SolveReport:
    """Optimal weights of ``spec`` on the scenario block ``sm``."""
    r = returns_matrix(sm)
    n = r.shape[1]
    if spec.kind is Kind.EW or n == 1:
        x = ew(n)
        return SolveReport(Status.OPTIMAL, x=x, objective=0.0)
    if spec.kind is Kind.MINV:
        return solve_min_variance(covariance(r))
    if spec.kind is Kind.MINMAD:
        return solve_min_mad(r)
    if spec.kind is Kind.PT:
        pt = PtParams(spec.alpha, spec.beta)
        obj = ReturnsObjective(r, lambda R: pt_from_returns(R, pt), lambda R: pt_grad_returns(R, pt))
        return multistart(obj, n, starts=spec.starts, seed=seed)
    lp, lm = spec.lambda_plus, spec.lambda_minus
    if spec.solver == "milp":
        if r.shape[0] > MILP_MAX_SCENARIOS:
            raise SolverError(f"MILP model with T={r.shape[0]} scenarios exceeds the dense-tableau "
                              f"limit of {MILP_MAX_SCENARIOS}; use multistart")
        rep = solve_milp(build_hfhe_milp(r, lp, lm))
        if rep.optimal:
            rep.objective = rep.info["hfhe_value"]
        return rep
    obj = ReturnsObjective(r, lambda R: hfhe_from_returns(R, lp, lm),
                           lambda R: hfhe_grad_returns(R, lp, lm))
    return multistart(obj, n, starts=spec.starts, seed=seed)


def clean_weights(x) -> np.ndarray:
    """Clip round-off negatives and renormalize."""
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    return x / x.sum()
