"""Best-first branch-and-bound over the binaries of a :class:`MilpProblem`."""

from __future__ import annotations

import heapq
import time

import numpy as np

from .models import milp_point
from .problem import LpProblem, MilpProblem, SolveReport, Status
from .simplex import solve_lp

INT_TOL = 1e-6
PRUNE_TOL = 1e-9


def _node_lp(lp: LpProblem, lb: np.ndarray, ub: np.ndarray) -> LpProblem:
    return LpProblem(lp.c, lp.A_eq, lp.b_eq, lp.A_le, lp.b_le, lb, ub, lp.blocks)


def _pick_branch(values: np.ndarray, order: np.ndarray, groups: list[np.ndarray]) -> int | None:
    """Most fractional binary of the first group that has one; ties go to
    the lowest variable index."""
    for group in groups:
        frac = np.abs(values[group] - np.round(values[group]))
        if frac.max(initial=0.0) > INT_TOL:
            score = np.abs(values[group] - 0.5)
            best = score.min()
            hits = group[score <= best + 1e-12]
            return int(hits.min())
    return None


def solve_milp(milp: MilpProblem, node_limit: int = 1_000_000, heuristic: bool = True) -> SolveReport:
    """Exact solve of the big-M HF/HE model.

    Every relaxation's weights are completed to a MILP-feasible point by
    :func:`milp_point`, which keeps a good incumbent from the root on.
    ``info["hfhe_value"]`` is the maximized HF/HE value (minus the MILP
    objective).
    """
    t0 = time.perf_counter()
    lp = milp.lp
    bins = milp.binaries
    groups = _branch_groups(milp)

    best_val, best_v, best_key = np.inf, None, None

    def offer(v: np.ndarray):
        nonlocal best_val, best_v, best_key
        val = float(lp.c @ v)
        key = tuple(np.round(v[bins]).astype(int))
        if val < best_val - 1e-12 or (abs(val - best_val) <= 1e-12 and key < best_key):
            best_val, best_v, best_key = val, v, key

    heap = [(-np.inf, 0, lp.lb.copy(), lp.ub.copy())]
    seq = 1
    nodes = 0
    lp_iters = 0
    status = Status.OPTIMAL
    while heap:
        bound, _, lb, ub = heapq.heappop(heap)
        if bound >= best_val - PRUNE_TOL:
            continue
        if nodes >= node_limit:
            status = Status.ITERATION_LIMIT
            break
        nodes += 1
        rep = solve_lp(_node_lp(lp, lb, ub))
        lp_iters += rep.iterations
        if rep.status is Status.INFEASIBLE:
            continue
        if not rep.optimal:
            status = rep.status
            break
        if rep.objective >= best_val - PRUNE_TOL:
            continue
        v = rep.values
        if heuristic:
            x = np.maximum(v[lp.blocks["x"]], 0.0)
            offer(milp_point(milp, x / x.sum()))
        j = _pick_branch(v, milp.branch_order, groups)
        if j is None:
            offer(v)
            continue
        for val in (0.0, 1.0):
            lb2, ub2 = lb.copy(), ub.copy()
            lb2[j] = ub2[j] = val
            heapq.heappush(heap, (rep.objective, seq, lb2, ub2))
            seq += 1

    if best_v is None:
        st = Status.INFEASIBLE if status is Status.OPTIMAL else status
        return SolveReport(st, nodes=nodes, iterations=lp_iters, wall_time=time.perf_counter() - t0)
    x = best_v[lp.blocks["x"]].copy() if "x" in lp.blocks else None
    if x is not None:
        x = np.maximum(x, 0.0)
        x /= x.sum()
    return SolveReport(status, x=x, objective=best_val, values=best_v, nodes=nodes,
                       iterations=lp_iters, wall_time=time.perf_counter() - t0,
                       info={"hfhe_value": -best_val, "open_nodes": len(heap)})


def _branch_groups(milp: MilpProblem) -> list[np.ndarray]:
    """Complementarity binaries first, then the remaining ones in branch order."""
    b = milp.lp.blocks
    order = milp.branch_order
    if "w" in b and "y_bar" in b:
        w = np.arange(b["w"].start, b["w"].stop)
        rest = np.array([j for j in order if j not in set(w.tolist())], dtype=int)
        return [w, rest]
    return [order]
