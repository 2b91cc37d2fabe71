from .baselines import project_simplex, solve_min_mad, solve_min_variance
from .branch_bound import solve_milp
from .local_search import ReturnsObjective, multistart
from .models import RegimeError, build_hfhe_milp, build_min_mad_lp, choose_big_m, milp_point
from .problem import LpProblem, MilpProblem, SolveReport, SolverError, Status
from .simplex import solve_lp

__all__ = [
    "LpProblem", "MilpProblem", "RegimeError", "ReturnsObjective", "SolveReport", "SolverError",
    "Status", "build_hfhe_milp", "build_min_mad_lp", "choose_big_m", "milp_point", "multistart",
    "project_simplex", "solve_lp", "solve_milp", "solve_min_mad", "solve_min_variance",
]
