# ferry_planner/core/branch_and_bound.py

from __future__ import annotations

import heapq
import logging
import math
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ferry_planner.core.lp_solver import LpSolver
from ferry_planner.core.simplex import SolverError
from ferry_planner.models.milp import MilpModel
from ferry_planner.models.solution import BnbConfig, LpSolution, Solution

logger = logging.getLogger("ferry_planner.bnb")


@dataclass(frozen=True)
class _Node:
    id: int
    depth: int
    bound: float
    fixings: Tuple[Tuple[int, float], ...]


def relative_gap(objective: float, bound: float) -> float:
    if not math.isfinite(objective):
        return math.inf
    if not math.isfinite(bound):
        return math.inf
    return max(0.0, (objective - bound) / max(1.0, abs(objective)))


class BranchAndBound:
    """
    LP-based branch-and-bound over the binary columns of a model.

    Branching takes the most fractional binary (lowest index on ties).
    The search plunges depth-first into the child nearest the LP value and
    otherwise picks the open node with the lowest bound (lowest id on ties).
    With several workers, child LPs are evaluated ahead of time by a
    thread pool, but results are consumed in the same order as a
    single-worker run; only the main thread touches the node pool and the
    incumbent.

    A start vector, when given, has its binaries rounded and the continuous
    part re-solved; a feasible result becomes the first incumbent.
    """

    def __init__(self, m: MilpModel, cfg: Optional[BnbConfig] = None, start: Optional[np.ndarray] = None):
        self.model = m
        self.cfg = cfg or BnbConfig.from_config()
        self._A = m.matrix("csc")
        self._binary = np.flatnonzero(m.binary)
        if start is not None and len(start) != m.n_cols:
            raise SolverError(f"start vector has {len(start)} entries, model has {m.n_cols} columns")
        self._start = None if start is None else np.asarray(start, dtype=float)
        self.warm_start_objective: Optional[float] = None
        self.node_log: List[dict] = []

    # --------------------------------------------------------------
    # Node evaluation (pure, safe to run in worker threads)
    # --------------------------------------------------------------
    def _evaluate(self, fixings: Tuple[Tuple[int, float], ...]) -> LpSolution:
        lower = self.model.lower.copy()
        upper = self.model.upper.copy()
        for j, value in fixings:
            lower[j] = upper[j] = value
        return LpSolver.solve_arrays(
            self._A, self.model.senses, self.model.rhs, self.model.objective, lower, upper,
            engine=self.cfg.lp_engine, feasibility_tol=self.cfg.feasibility_tol,
        )

    def _branching_column(self, x: np.ndarray) -> Optional[int]:
        if not len(self._binary):
            return None
        values = x[self._binary]
        distance = np.abs(values - np.round(values))
        if distance.max() <= self.cfg.integrality_tol:
            return None
        # argmax returns the first maximum, i.e. the lowest column index
        return int(self._binary[int(np.argmax(distance))])

    def _polish(self, x: np.ndarray) -> LpSolution:
        """Round binaries and re-solve the continuous part with them fixed."""
        fixings = tuple((int(j), float(round(x[j]))) for j in self._binary)
        return self._evaluate(fixings)

    # --------------------------------------------------------------
    # Search
    # --------------------------------------------------------------
    def solve(self) -> Solution:
        cfg = self.cfg
        started = time.perf_counter()
        executor = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
        pending: Dict[int, Future] = {}

        def submit(node: _Node):
            if executor is not None:
                pending[node.id] = executor.submit(self._evaluate, node.fixings)

        def evaluate(node: _Node) -> LpSolution:
            future = pending.pop(node.id, None)
            return future.result() if future is not None else self._evaluate(node.fixings)

        heap: List[Tuple[float, int, _Node]] = []
        incumbent_x: Optional[np.ndarray] = None
        incumbent_obj = math.inf
        global_bound = -math.inf
        nodes = 0
        next_id = 1
        status: Optional[str] = None
        current: Optional[_Node] = _Node(id=0, depth=0, bound=-math.inf, fixings=())

        def prune_level() -> float:
            if incumbent_x is None:
                return math.inf
            return incumbent_obj - cfg.gap_tolerance * max(1.0, abs(incumbent_obj))

        if self._start is not None:
            warm = self._polish(self._start)
            if warm.status == "optimal":
                incumbent_x = warm.x.copy()
                incumbent_obj = warm.objective
                self.warm_start_objective = incumbent_obj
                logger.info("warm start incumbent %.6f", incumbent_obj)
            else:
                logger.info("warm start rejected: %s", warm.status)

        try:
            while current is not None:
                if nodes >= cfg.node_limit or time.perf_counter() - started >= cfg.time_limit:
                    status = "limit_incumbent" if incumbent_x is not None else "limit_no_incumbent"
                    break

                lp = evaluate(current)
                nodes += 1
                if lp.status == "iteration_limit":
                    raise SolverError(f"node {current.id}: LP iteration limit reached")
                if current.id == 0 and lp.status in ("infeasible", "unbounded"):
                    status = lp.status
                    break

                plunge: Optional[_Node] = None
                if lp.status == "optimal" and lp.objective < prune_level():
                    j = self._branching_column(lp.x)
                    if j is None:
                        polished = lp if np.array_equal(lp.x[self._binary], np.round(lp.x[self._binary])) \
                            else self._polish(lp.x)
                        if polished.status == "optimal" and polished.objective < incumbent_obj:
                            incumbent_x = polished.x.copy()
                            incumbent_obj = polished.objective
                    else:
                        value = lp.x[j]
                        down = _Node(next_id, current.depth + 1, lp.objective, current.fixings + ((j, 0.0),))
                        up = _Node(next_id + 1, current.depth + 1, lp.objective, current.fixings + ((j, 1.0),))
                        next_id += 2
                        plunge, other = (up, down) if value - math.floor(value) >= 0.5 else (down, up)
                        submit(plunge)
                        submit(other)
                        heapq.heappush(heap, (other.bound, other.id, other))

                open_bounds = [heap[0][0]] if heap else []
                if plunge is not None:
                    open_bounds.append(plunge.bound)
                lowest = min(open_bounds) if open_bounds else incumbent_obj
                if math.isfinite(lowest):
                    global_bound = max(global_bound, min(lowest, incumbent_obj))
                gap = relative_gap(incumbent_obj, global_bound)

                entry = {
                    "node": current.id,
                    "depth": current.depth,
                    "lp": lp.objective if lp.status == "optimal" else None,
                    "bound": global_bound,
                    "incumbent": incumbent_obj if incumbent_x is not None else None,
                    "gap": gap,
                }
                self.node_log.append(entry)
                if cfg.log_nodes:
                    logger.info("node %d depth %d bound %.6f incumbent %s gap %s",
                                current.id, current.depth, global_bound,
                                f"{incumbent_obj:.6f}" if incumbent_x is not None else "-",
                                f"{gap:.2e}" if math.isfinite(gap) else "inf")

                if incumbent_x is not None and gap <= cfg.gap_tolerance:
                    status = "optimal"
                    break

                current = plunge
                while current is None and heap:
                    bound, _, node = heapq.heappop(heap)
                    if bound >= prune_level():
                        future = pending.pop(node.id, None)
                        if future is not None:
                            future.cancel()
                        continue
                    current = node
        finally:
            if executor is not None:
                for future in pending.values():
                    future.cancel()
                executor.shutdown(wait=True)

        if status is None:
            status = "optimal" if incumbent_x is not None else "infeasible"
        if status == "optimal":
            global_bound = min(global_bound, incumbent_obj)
        wall = time.perf_counter() - started

        m = self.model
        if incumbent_x is not None:
            x = incumbent_x
            objective = incumbent_obj
            x[self._binary] = np.round(x[self._binary])
        else:
            x = np.zeros(m.n_cols)
            objective = -math.inf if status == "unbounded" else math.inf
        gap = relative_gap(objective, global_bound) if incumbent_x is not None else math.inf

        meta = dict(m.meta)
        meta.update({"lp_engine": cfg.lp_engine, "workers": cfg.workers})
        logger.info("branch-and-bound %s: objective %s bound %s after %d nodes in %.2fs",
                    status, objective, global_bound, nodes, wall)
        return Solution(
            names=m.col_names,
            x=np.asarray(x, dtype=float),
            objective=float(objective),
            bound=float(global_bound),
            gap=float(gap),
            nodes=nodes,
            wall_time=wall,
            status=status,
            meta=meta,
        )


def solve_milp(m: MilpModel, cfg: Optional[BnbConfig] = None, start: Optional[np.ndarray] = None) -> Solution:
    return BranchAndBound(m, cfg, start).solve()
