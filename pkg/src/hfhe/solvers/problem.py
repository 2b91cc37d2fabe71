"""Problem containers and the common solve report."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


class SolverError(RuntimeError):
    pass


def _matrix(a, ncols: int) -> np.ndarray:
    if a is None:
        return np.zeros((0, ncols))
    a = np.asarray(a, dtype=float)
    return a.reshape(-1, ncols) if a.size else np.zeros((0, ncols))


@dataclass
class LpProblem:
    """``minimize c.v  s.t.  A_eq v = b_eq,  A_le v <= b_le,  lb <= v <= ub``.

    ``lb = -inf`` marks a free variable. ``blocks`` names contiguous
    variable groups (``x``, ``d``, ``d_plus`` ...).
    """

    c: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_le: np.ndarray | None = None
    b_le: np.ndarray | None = None
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None
    blocks: dict[str, slice] = field(default_factory=dict)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        N = self.c.size
        self.A_eq = _matrix(self.A_eq, N)
        self.A_le = _matrix(self.A_le, N)
        self.b_eq = np.zeros(0) if self.b_eq is None else np.asarray(self.b_eq, dtype=float).ravel()
        self.b_le = np.zeros(0) if self.b_le is None else np.asarray(self.b_le, dtype=float).ravel()
        self.lb = np.zeros(N) if self.lb is None else np.asarray(self.lb, dtype=float).ravel().copy()
        self.ub = np.full(N, np.inf) if self.ub is None else np.asarray(self.ub, dtype=float).ravel().copy()
        if self.b_eq.size != self.A_eq.shape[0] or self.b_le.size != self.A_le.shape[0]:
            raise ValueError("constraint matrix and right-hand side sizes disagree")
        if self.lb.size != N or self.ub.size != N:
            raise ValueError("bound vectors must match the number of variables")
        if np.any(np.isnan(self.lb)) or np.any(np.isnan(self.ub)) or np.any(self.lb == np.inf) or np.any(self.ub == -np.inf):
            raise ValueError("invalid variable bounds")
        for name, s in self.blocks.items():
            if not (0 <= s.start <= s.stop <= N):
                raise ValueError(f"block {name!r} out of range")

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_eq(self) -> int:
        return self.A_eq.shape[0]

    @property
    def n_le(self) -> int:
        return self.A_le.shape[0]


@dataclass
class MilpProblem:
    """An LP plus binary variables; ``context`` carries model data for reporting."""

    lp: LpProblem
    binaries: np.ndarray
    big_m: float
    branch_order: np.ndarray | None = None
    context: dict = field(default_factory=dict)

    def __post_init__(self):
        self.binaries = np.asarray(self.binaries, dtype=int)
        if self.branch_order is None:
            self.branch_order = self.binaries.copy()
        self.branch_order = np.asarray(self.branch_order, dtype=int)
        if set(self.branch_order.tolist()) != set(self.binaries.tolist()):
            raise ValueError("branch order must be a permutation of the binaries")
        if not self.big_m > 0:
            raise ValueError("big-M must be positive")

    @property
    def n_binaries(self) -> int:
        return self.binaries.size


@dataclass
class SolveReport:
    status: Status
    x: np.ndarray | None = None  # portfolio weights when the problem has an x block
    objective: float = float("nan")
    values: np.ndarray | None = None  # full variable vector (LP / MILP)
    iterations: int = 0
    nodes: int = 0
    starts: int = 0
    wall_time: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL
