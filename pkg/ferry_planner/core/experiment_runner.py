# ferry_planner/core/experiment_runner.py

from __future__ import annotations

import json
import logging
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ferry_planner.core.activity_logger import ActivityLogger
from ferry_planner.core.branch_and_bound import solve_milp
from ferry_planner.core.dispatch_simulator import DispatchSimulator
from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.model_builder import ModelBuilder
from ferry_planner.core.scenario_manager import ScenarioManager
from ferry_planner.core.solution_store import SolutionStore
from ferry_planner.models.experiment import ExperimentResult
from ferry_planner.models.milp import MilpModel
from ferry_planner.models.scenario import Scenario
from ferry_planner.models.solution import BnbConfig, Solution

logger = logging.getLogger("ferry_planner.harness")

EXPERIMENT_IDS = (1, 2, 3, 4)


class ExperimentError(FerryPlannerError):
    """Raised when an experiment has no usable solution or its replay finds violations."""

    def __init__(self, message, dump_path: Optional[Path] = None):
        self.dump_path = dump_path
        text = f"{message} (diagnostics in {dump_path})" if dump_path else message
        super().__init__(text)


class ExperimentRunner:
    """
    Runs the experiment ladder on one scenario: every rung solves the same
    all-features model with different design bounds, and every solution is
    replayed and checked before its costs are reported.
    """

    # ------------------------------------------------------------
    # Model for the ladder
    # ------------------------------------------------------------
    @staticmethod
    def ladder_scenario(s: Scenario) -> Scenario:
        return ScenarioManager.with_toggles(
            s, grid_power_optimized=True, pv_enabled=True, storage_enabled=True, vessel_sizing_enabled=True,
        )

    @staticmethod
    def experiment_model(s: Scenario, exp: int, mode: str = "candidates",
                         big_m_scale: Optional[float] = None) -> MilpModel:
        base = ModelBuilder.build_model(ExperimentRunner.ladder_scenario(s), mode=mode, big_m_scale=big_m_scale)
        return ModelBuilder.fix_experiment(base, exp)

    # ------------------------------------------------------------
    # Single experiment
    # ------------------------------------------------------------
    @staticmethod
    def _run_one(s: Scenario, base: MilpModel, exp: int, cfg: BnbConfig,
                 diagnostics_dir: Optional[Path], price_factor: float = 1.0,
                 start: Optional[Solution] = None) -> ExperimentResult:
        m = ModelBuilder.fix_experiment(base, exp)
        logger.info("experiment %d: solving %d rows x %d columns", exp, m.n_rows, m.n_cols)
        sol = solve_milp(m, cfg, start=None if start is None else start.x)
        ActivityLogger.log_run_event("experiment_solved", f"exp{exp}", sol.status,
                                     objective=sol.objective, gap=sol.gap, nodes=sol.nodes)
        if not sol.has_incumbent:
            raise ExperimentError(f"experiment {exp}: solver status '{sol.status}'")
        if sol.status == "limit_incumbent":
            logger.warning("experiment %d stopped at a limit with gap %.3e", exp, sol.gap)

        trace = DispatchSimulator.replay(s, sol)
        violations = DispatchSimulator.check(trace, s)
        if violations:
            dump = ExperimentRunner._dump_diagnostics(exp, sol, violations, diagnostics_dir)
            ActivityLogger.log_run_event("violations_found", f"exp{exp}", f"{len(violations)} violation(s)",
                                         dump=str(dump))
            raise ExperimentError(f"experiment {exp}: replay found {len(violations)} violation(s), "
                                  f"first: {violations[0]}", dump)
        costs = DispatchSimulator.recompute_cost(trace, s)
        if abs(costs.total - sol.objective) > 1e-6 * max(1.0, abs(sol.objective)):
            logger.warning("experiment %d: recomputed cost %.9f differs from objective %.9f",
                           exp, costs.total, sol.objective)

        return ExperimentResult(
            experiment=exp,
            grid_power={p.id: trace.ports[p.id].grid_power for p in s.ports},
            vessel_battery={v.id: trace.vessels[v.id].battery for v in s.vessels},
            storage_energy={p.id: trace.ports[p.id].storage_energy for p in s.ports},
            pv_power={p.id: trace.ports[p.id].pv_power for p in s.ports},
            costs=costs,
            status=sol.status,
            objective=sol.objective,
            bound=sol.bound,
            gap=sol.gap,
            nodes=sol.nodes,
            wall_time=sol.wall_time,
            pv_limit=0.0 if exp == 1 else max((p.max_pv_bound for p in s.ports), default=0.0),
            storage_limit=max((p.max_storage_bound for p in s.ports), default=0.0) if exp >= 3 else 0.0,
            vessel_optimized=exp == 4,
            price_factor=price_factor,
            solution=sol,
            trace=trace,
        )

    @staticmethod
    def _dump_diagnostics(exp: int, sol: Solution, violations, directory: Optional[Path]) -> Path:
        target = Path(directory) if directory else Path(tempfile.mkdtemp(prefix="ferry_diagnostics_"))
        target.mkdir(parents=True, exist_ok=True)
        path = target / f"exp{exp}_violations.json"
        with path.open("w", encoding="utf-8") as fh:
            json.dump([v.to_dict() for v in violations], fh, indent=2)
        SolutionStore.write_solution(sol, target / f"exp{exp}_solution.csv")
        return path

    # ------------------------------------------------------------
    # Ladder and sensitivity
    # ------------------------------------------------------------
    @staticmethod
    def run_experiments(s: Scenario, ids: Iterable[int], cfg: Optional[BnbConfig] = None, parallel: bool = False,
                        diagnostics_dir: Optional[Union[str, Path]] = None, mode: str = "candidates",
                        big_m_scale: Optional[float] = None, price_factor: float = 1.0) -> List[ExperimentResult]:
        ordered = sorted(set(ids))
        if not ordered:
            return []
        unknown = [i for i in ordered if i not in EXPERIMENT_IDS]
        if unknown:
            raise ExperimentError(f"unknown experiment id(s): {', '.join(map(str, unknown))}")

        cfg = cfg or BnbConfig.from_config()
        ladder = ExperimentRunner.ladder_scenario(s)
        base = ModelBuilder.build_model(ladder, mode=mode, big_m_scale=big_m_scale)
        ActivityLogger.log_run_event("model_built", s.name, mode, rows=base.n_rows, columns=base.n_cols)
        diagnostics = Path(diagnostics_dir) if diagnostics_dir else None

        def run(exp, start=None):
            return ExperimentRunner._run_one(ladder, base, exp, cfg, diagnostics, price_factor, start)

        if parallel and len(ordered) > 1:
            with ThreadPoolExecutor(max_workers=len(ordered)) as pool:
                return list(pool.map(run, ordered))

        # every rung only widens bounds, so the previous optimum seeds the next search
        results: List[ExperimentResult] = []
        for exp in ordered:
            results.append(run(exp, results[-1].solution if results else None))
        return results

    @staticmethod
    def run_sensitivity(s: Scenario, exp: int, factors: Sequence[float], cfg: Optional[BnbConfig] = None,
                        mode: str = "candidates") -> List[Tuple[float, ExperimentResult]]:
        """One experiment re-solved with every price series scaled by each factor."""
        results = []
        for factor in factors:
            scaled = ScenarioManager.scale_prices(s, factor)
            (result,) = ExperimentRunner.run_experiments(scaled, [exp], cfg, mode=mode, price_factor=factor)
            logger.info("price factor %.3f: total %.4f kUSD", factor, result.costs.total)
            results.append((factor, result))
        return results


run_experiments = ExperimentRunner.run_experiments
run_sensitivity = ExperimentRunner.run_sensitivity
experiment_model = ExperimentRunner.experiment_model
