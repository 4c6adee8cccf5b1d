# ferry_planner/core/lp_solver.py

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ferry_planner.config import Config
from ferry_planner.core.simplex import NumericalInstabilityError, RevisedSimplex, SolverError
from ferry_planner.models.milp import MilpModel
from ferry_planner.models.solution import LpSolution

logger = logging.getLogger("ferry_planner.solver")

_HIGHS_STATUS = {0: "optimal", 1: "iteration_limit", 2: "infeasible", 3: "unbounded"}


class LpSolver:
    """
    LP relaxations behind one interface.
    Fixed columns are moved into the right-hand side first; the reduced
    problem goes to the native revised simplex or to HiGHS.
    """

    @staticmethod
    def pick_engine(engine: Optional[str], n_rows: int, n_cols: int) -> str:
        engine = (engine or Config.LP_ENGINE).lower()
        if engine == "auto":
            return "native" if n_rows + n_cols <= Config.NATIVE_LP_MAX_SIZE else "highs"
        if engine not in ("native", "highs"):
            raise SolverError(f"unknown LP engine '{engine}'")
        return engine

    @staticmethod
    def solve_lp(m: MilpModel, engine: Optional[str] = None, lower=None, upper=None,
                 feasibility_tol: Optional[float] = None) -> LpSolution:
        """Solve the relaxation of m (integrality dropped), optionally with overriding bounds."""
        if m.n_cols < 1:
            raise SolverError("model has no columns")
        return LpSolver.solve_arrays(
            m.matrix("csc"), m.senses, m.rhs, m.objective,
            m.lower if lower is None else lower,
            m.upper if upper is None else upper,
            engine=engine, feasibility_tol=feasibility_tol,
        )

    @staticmethod
    def solve_arrays(A, senses: Sequence[str], rhs, c, lower, upper, engine: Optional[str] = None,
                     feasibility_tol: Optional[float] = None) -> LpSolution:
        tol = Config.FEASIBILITY_TOL if feasibility_tol is None else feasibility_tol
        A = sparse.csc_matrix(A)
        rhs = np.asarray(rhs, dtype=float)
        c = np.asarray(c, dtype=float)
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        n_rows, n_cols = A.shape

        if np.any(lower > upper + tol):
            return LpSolution(x=np.clip(lower, None, upper), duals=np.zeros(n_rows), objective=np.inf,
                              status="infeasible", engine="presolve", message="crossed column bounds")

        # -------- presolve: drop fixed columns --------
        fixed = upper - lower <= 0.0
        keep = ~fixed
        fixed_values = np.where(fixed, lower, 0.0)
        b = rhs - A @ fixed_values
        A_keep = A[:, keep]

        row_nnz = np.diff(A_keep.tocsr().indptr)
        empty = row_nnz == 0
        senses = list(senses)
        for i in np.flatnonzero(empty):
            scale = tol * max(1.0, abs(rhs[i]))
            ok = (
                (senses[i] == "L" and b[i] >= -scale)
                or (senses[i] == "G" and b[i] <= scale)
                or (senses[i] == "E" and abs(b[i]) <= scale)
            )
            if not ok:
                return LpSolution(x=fixed_values.copy(), duals=np.zeros(n_rows), objective=np.inf,
                                  status="infeasible", engine="presolve",
                                  message=f"row {int(i)} violated by fixed columns")

        live = ~empty
        A_red = A_keep.tocsr()[live].tocsc()
        b_red = b[live]
        senses_red = [s for s, alive in zip(senses, live) if alive]

        x = fixed_values.copy()
        duals = np.zeros(n_rows)
        if A_red.shape[1] == 0:
            return LpSolution(x=x, duals=duals, objective=float(c @ x), status="optimal", engine="presolve")

        chosen = LpSolver.pick_engine(engine, A_red.shape[0], A_red.shape[1])
        if chosen == "native":
            reduced = RevisedSimplex(feasibility_tol=tol, max_iter=Config.SIMPLEX_MAX_ITER).solve(
                A_red, senses_red, b_red, c[keep], lower[keep], upper[keep])
        else:
            reduced = LpSolver._solve_highs(A_red, senses_red, b_red, c[keep], lower[keep], upper[keep])

        x[keep] = reduced.x
        duals[live] = reduced.duals
        objective = float(c @ x) if reduced.status == "optimal" else reduced.objective
        return LpSolution(x=x, duals=duals, objective=objective, status=reduced.status,
                          iterations=reduced.iterations, engine=chosen, message=reduced.message)

    @staticmethod
    def _solve_highs(A, senses, b, c, lower, upper) -> LpSolution:
        senses = np.asarray(senses)
        csr = A.tocsr()
        ub_rows = np.flatnonzero(senses != "E")
        eq_rows = np.flatnonzero(senses == "E")
        sign = np.where(senses[ub_rows] == "G", -1.0, 1.0)

        A_ub = sparse.diags(sign) @ csr[ub_rows] if len(ub_rows) else None
        b_ub = sign * b[ub_rows] if len(ub_rows) else None
        A_eq = csr[eq_rows] if len(eq_rows) else None
        b_eq = b[eq_rows] if len(eq_rows) else None
        bounds = [
            (None if not np.isfinite(lo) else lo, None if not np.isfinite(hi) else hi)
            for lo, hi in zip(lower, upper)
        ]

        res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs-ds")
        if res.status == 4:
            raise NumericalInstabilityError(f"HiGHS reported numerical difficulties: {res.message}")
        status = _HIGHS_STATUS.get(res.status, "infeasible")

        duals = np.zeros(len(senses))
        if status == "optimal":
            if len(ub_rows):
                duals[ub_rows] = sign * np.asarray(res.ineqlin.marginals)
            if len(eq_rows):
                duals[eq_rows] = np.asarray(res.eqlin.marginals)
        x = np.asarray(res.x, dtype=float) if res.x is not None else np.clip(np.zeros(len(c)), lower, upper)
        objective = float(res.fun) if status == "optimal" else (-np.inf if status == "unbounded" else np.inf)
        return LpSolution(x=x, duals=duals, objective=objective, status=status,
                          iterations=int(getattr(res, "nit", 0) or 0), engine="highs", message=str(res.message))


solve_lp = LpSolver.solve_lp
