# ferry_planner/core/simplex.py

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.models.solution import LpSolution

logger = logging.getLogger("ferry_planner.solver")

AT_LOWER, AT_UPPER, AT_ZERO, BASIC = 0, 1, 2, 3


class SolverError(FerryPlannerError):
    """Raised when an LP or MILP cannot be solved."""
    pass


class NumericalInstabilityError(SolverError):
    """Raised when a basis is singular or too badly conditioned to trust."""

    def __init__(self, message, condition: Optional[float] = None):
        self.condition = condition
        detail = f" (condition estimate {condition:.3e})" if condition is not None else ""
        super().__init__(f"{message}{detail}")


class RevisedSimplex:
    """
    Bounded-variable revised simplex for min c'x s.t. A x (<=,=,>=) b, l <= x <= u.

    Every row gets a slack s with A x + s = b; the slack bounds encode the
    row sense. The starting basis is all slacks; rows whose slack would
    sit outside its bounds get an artificial column for phase 1.
    Pricing is Dantzig with lowest-index ties and switches to Bland's
    rule for good after `stall_limit` consecutive degenerate pivots.
    The basis is refactorized with a sparse LU every iteration.
    """

    def __init__(self, feasibility_tol: float = 1e-7, optimality_tol: float = 1e-7,
                 pivot_tol: float = 1e-9, max_iter: int = 50000, stall_limit: int = 50):
        self.feasibility_tol = feasibility_tol
        self.optimality_tol = optimality_tol
        self.pivot_tol = pivot_tol
        self.max_iter = max_iter
        self.stall_limit = stall_limit

    # --------------------------------------------------------------
    # Public entry point
    # --------------------------------------------------------------
    def solve(self, A, senses: Sequence[str], rhs, c, lower, upper) -> LpSolution:
        A = sparse.csc_matrix(A, dtype=float)
        m, n = A.shape
        b = np.asarray(rhs, dtype=float)
        c = np.asarray(c, dtype=float)

        slack_lo = np.array([-np.inf if s == "G" else 0.0 for s in senses])
        slack_hi = np.array([0.0 if s in ("G", "E") else np.inf for s in senses])
        lb = np.concatenate([np.asarray(lower, dtype=float), slack_lo])
        ub = np.concatenate([np.asarray(upper, dtype=float), slack_hi])
        if np.any(lb > ub + self.feasibility_tol):
            return self._result(np.clip(np.zeros(n), lower, upper), np.zeros(m), np.inf, "infeasible", 0,
                                "crossed column bounds")

        # nonbasic structurals start at a finite bound, free ones at zero
        x = np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))
        state = np.where(np.isfinite(lb), AT_LOWER, np.where(np.isfinite(ub), AT_UPPER, AT_ZERO))

        residual = b - A @ x[:n]
        basis = np.arange(n, n + m)
        art_rows, art_signs = [], []
        for i in range(m):
            k = n + i
            if lb[k] - self.feasibility_tol <= residual[i] <= ub[k] + self.feasibility_tol:
                x[k] = residual[i]
                state[k] = BASIC
                continue
            x[k] = lb[k] if residual[i] < lb[k] else ub[k]
            state[k] = AT_LOWER if residual[i] < lb[k] else AT_UPPER
            art_rows.append(i)
            art_signs.append(1.0 if residual[i] - x[k] > 0 else -1.0)

        n_art = len(art_rows)
        artificial = sparse.csc_matrix((art_signs, (art_rows, np.arange(n_art))), shape=(m, n_art))
        M = sparse.hstack([A, sparse.identity(m, format="csc"), artificial], format="csc")
        lb = np.concatenate([lb, np.zeros(n_art)])
        ub = np.concatenate([ub, np.full(n_art, np.inf)])
        x = np.concatenate([x, np.zeros(n_art)])
        state = np.concatenate([state, np.full(n_art, BASIC)])
        for k, i in enumerate(art_rows):
            basis[i] = n + m + k
            x[n + m + k] = abs(residual[i] - x[n + i])

        self._M, self._b, self._lb, self._ub = M, b, lb, ub
        self._x, self._state, self._basis = x, state, basis
        self._iterations = 0
        self._bland = False

        if n_art:
            phase1 = np.zeros(M.shape[1])
            phase1[n + m:] = 1.0
            status, _ = self._iterate(phase1)
            infeasibility = float(self._x[n + m:].sum())
            if status == "iteration_limit":
                return self._result(self._x[:n], np.zeros(m), np.inf, status, self._iterations, "phase 1 iteration limit")
            if infeasibility > self.feasibility_tol * max(1.0, float(np.abs(b).max(initial=0.0))) * 10:
                return self._result(self._x[:n], np.zeros(m), np.inf, "infeasible", self._iterations,
                                    f"phase 1 infeasibility {infeasibility:.3e}")
            # artificials stay at zero from here on
            self._ub[n + m:] = 0.0
            self._state[n + m:] = np.where(self._state[n + m:] == BASIC, BASIC, AT_LOWER)
            self._x[n + m:] = np.where(self._state[n + m:] == BASIC, self._x[n + m:], 0.0)

        phase2 = np.concatenate([c, np.zeros(m + n_art)])
        status, duals = self._iterate(phase2)
        x_struct = self._x[:n].copy()
        objective = float(c @ x_struct) if status == "optimal" else (-np.inf if status == "unbounded" else np.inf)
        return self._result(x_struct, duals, objective, status, self._iterations)

    # --------------------------------------------------------------
    # Iterations
    # --------------------------------------------------------------
    def _factorize(self):
        B = self._M[:, self._basis]
        try:
            lu = splu(sparse.csc_matrix(B))
        except RuntimeError:
            raise NumericalInstabilityError("singular basis matrix", self._condition(B))
        diag = np.abs(lu.U.diagonal())
        if diag.size and diag.min() <= 1e-14 * max(1.0, diag.max()):
            raise NumericalInstabilityError("near-singular basis matrix", self._condition(B))
        return lu

    @staticmethod
    def _condition(B) -> float:
        if B.shape[0] > 2000:
            return float("inf")
        return float(np.linalg.cond(B.toarray()))

    def _iterate(self, cost: np.ndarray):
        M, b, lb, ub = self._M, self._b, self._lb, self._ub
        x, state, basis = self._x, self._state, self._basis
        fixed = lb == ub
        stall = 0

        while True:
            lu = self._factorize()
            x_nonbasic = x.copy()
            x_nonbasic[basis] = 0.0
            x[basis] = lu.solve(b - M @ x_nonbasic)
            y = lu.solve(cost[basis], trans="T")

            if self._iterations >= self.max_iter:
                return "iteration_limit", y

            d = cost - M.T @ y
            tol = self.optimality_tol
            eligible = (
                ((state == AT_LOWER) & (d < -tol))
                | ((state == AT_UPPER) & (d > tol))
                | ((state == AT_ZERO) & (np.abs(d) > tol))
            ) & ~fixed
            if not eligible.any():
                return "optimal", y

            if self._bland:
                j = int(np.flatnonzero(eligible)[0])
            else:
                j = int(np.argmax(np.where(eligible, np.abs(d), -1.0)))
            direction = 1.0 if d[j] < 0 else -1.0

            column = M[:, j].toarray().ravel()
            w = lu.solve(column)
            delta = -direction * w

            x_b, lb_b, ub_b = x[basis], lb[basis], ub[basis]
            ratios = np.full(len(basis), np.inf)
            down = delta < -self.pivot_tol
            up = delta > self.pivot_tol
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(down & np.isfinite(lb_b), (x_b - lb_b) / -delta, ratios)
                ratios = np.where(up & np.isfinite(ub_b), (ub_b - x_b) / delta, ratios)
            ratios = np.maximum(ratios, 0.0)
            theta = float(ratios.min()) if ratios.size else np.inf
            flip = ub[j] - lb[j] if np.isfinite(lb[j]) and np.isfinite(ub[j]) else np.inf

            if not np.isfinite(theta) and not np.isfinite(flip):
                return "unbounded", y

            self._iterations += 1
            if flip <= theta:
                x[j] = ub[j] if direction > 0 else lb[j]
                state[j] = AT_UPPER if direction > 0 else AT_LOWER
                step = flip
            else:
                ties = np.flatnonzero(ratios <= theta + 1e-12)
                if self._bland:
                    p = int(ties[np.argmin(basis[ties])])
                else:
                    p = int(ties[np.lexsort((basis[ties], -np.abs(delta[ties])))[0]])
                leaving = basis[p]
                if delta[p] < 0:
                    x[leaving], state[leaving] = lb[leaving], AT_LOWER
                else:
                    x[leaving], state[leaving] = ub[leaving], AT_UPPER
                x[j] = x[j] + direction * theta
                state[j] = BASIC
                basis[p] = j
                step = theta

            stall = stall + 1 if step <= 1e-12 else 0
            if stall >= self.stall_limit and not self._bland:
                logger.debug("simplex stalled for %d pivots, switching to Bland's rule", stall)
                self._bland = True

    @staticmethod
    def _result(x, duals, objective, status, iterations, message="") -> LpSolution:
        return LpSolution(
            x=np.asarray(x, dtype=float),
            duals=np.asarray(duals, dtype=float),
            objective=float(objective),
            status=status,
            iterations=iterations,
            engine="native",
            message=message,
        )
