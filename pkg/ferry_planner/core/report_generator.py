# ferry_planner/core/report_generator.py

from __future__ import annotations

import csv
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ferry_planner import __version__
from ferry_planner.core.activity_logger import ActivityLogger
from ferry_planner.core.dispatch_simulator import DispatchSimulator
from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.pdf_report_generator import PDFReportGenerator
from ferry_planner.core.solution_store import SolutionStore
from ferry_planner.models.experiment import ExperimentResult
from ferry_planner.models.scenario import Scenario
from ferry_planner.models.solution import BnbConfig
from ferry_planner.utils.helpers import calculate_percentage

logger = logging.getLogger("ferry_planner.report")


class ReportError(FerryPlannerError):
    """Raised when report files cannot be written."""
    pass


def _braced(values: Dict[str, float]) -> str:
    return "{" + ", ".join(f"{v:.2f}" for v in values.values()) + "}"


class ReportGenerator:
    """
    Builds the experiment summary (one row per experiment, design and cost
    columns) and writes it with trace files and a run manifest.
    """

    # ------------------------------------------------------------
    # Table
    # ------------------------------------------------------------
    @staticmethod
    def summary_header(results: Sequence[ExperimentResult]) -> List[str]:
        ports = ", ".join(results[0].grid_power) if results else ""
        vessels = ", ".join(results[0].vessel_battery) if results else ""
        return [
            "Exp",
            "P_pv^M (MW)",
            "E_i^M (MWh)",
            "Opt E_v",
            f"Infra charging power (MW) {{{ports}}}",
            f"E_v (MWh) {{{vessels}}}",
            f"E_b,i (MWh) {{{ports}}}",
            f"P_pv,i (MW) {{{ports}}}",
            "C-_energy (kUSD)",
            "C+_energy (kUSD)",
            "C_tot (kUSD)",
        ]

    @staticmethod
    def summary_row(r: ExperimentResult) -> List[str]:
        return [
            str(r.experiment),
            f"{r.pv_limit:.1f}",
            f"{r.storage_limit:.1f}",
            "yes" if r.vessel_optimized else "no",
            _braced(r.grid_power),
            _braced(r.vessel_battery),
            _braced(r.storage_energy),
            _braced(r.pv_power),
            f"{r.costs.revenue_total:.2f}",
            f"{r.costs.purchase_total:.2f}",
            f"{r.costs.total:.2f}",
        ]

    @staticmethod
    def summary_table(results: Sequence[ExperimentResult]) -> Tuple[List[str], List[List[str]]]:
        ordered = sorted(results, key=lambda r: (r.price_factor, r.experiment))
        return ReportGenerator.summary_header(ordered), [ReportGenerator.summary_row(r) for r in ordered]

    @staticmethod
    def format_text_table(header: List[str], rows: List[List[str]]) -> str:
        widths = [max(len(header[i]), *(len(row[i]) for row in rows)) if rows else len(header[i])
                  for i in range(len(header))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for row in rows:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip())
        return "\n".join(lines) + "\n"

    @staticmethod
    def savings(results: Sequence[ExperimentResult]) -> Optional[float]:
        """Cost saving of the last rung against the first, in percent."""
        if len(results) < 2:
            return None
        first, last = results[0].costs.total, results[-1].costs.total
        return calculate_percentage(first - last, first)

    # ------------------------------------------------------------
    # Files
    # ------------------------------------------------------------
    @staticmethod
    def emit_report(results: Sequence[ExperimentResult], directory: Union[str, Path],
                    scenario: Optional[Scenario] = None, cfg: Optional[BnbConfig] = None,
                    source_hash: Optional[str] = None) -> List[Path]:
        out = Path(directory)
        try:
            out.mkdir(parents=True, exist_ok=True)
            marker = out / ".write_test"
            marker.write_text("", encoding="utf-8")
            marker.unlink()
        except OSError as e:
            raise ReportError(f"cannot write reports to {out}: {e}") from e

        header, rows = ReportGenerator.summary_table(results)
        written: List[Path] = []

        summary_csv = out / "summary.csv"
        with summary_csv.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        written.append(summary_csv)

        text = ReportGenerator.format_text_table(header, rows)
        saving = ReportGenerator.savings(sorted(results, key=lambda r: r.experiment))
        notes = []
        if saving is not None:
            notes.append(f"saving of the last experiment against the first: {saving:.2f}%")
            text += f"\n{notes[0]}\n"
        summary_txt = out / "summary.txt"
        summary_txt.write_text(text, encoding="utf-8")
        written.append(summary_txt)

        for r in results:
            label = f"exp{r.experiment}" if r.price_factor == 1.0 else f"exp{r.experiment}_x{r.price_factor:g}"
            if r.trace is not None and scenario is not None:
                written.extend(DispatchSimulator.export_traces(r.trace, scenario, out / label))
            if r.solution is not None:
                written.append(SolutionStore.write_solution(r.solution, out / label / "solution.csv"))

        generated_at = datetime.now(timezone.utc)
        run_info = {
            "scenario": scenario.name if scenario is not None else "",
            "scenario_hash": source_hash or (scenario.source_hash if scenario is not None else ""),
            "tool_version": __version__,
            "generated_at": generated_at.isoformat(),
        }
        manifest = dict(run_info)
        manifest["config"] = cfg.to_dict() if cfg is not None else {}
        manifest["experiments"] = [r.to_dict() for r in results]
        manifest["events"] = [e.to_dict() for e in ActivityLogger.get_run_events()]
        manifest_path = out / "manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=2, default=str), encoding="utf-8")
        written.append(manifest_path)

        pdf_path = out / "summary.pdf"
        pdf_path.write_bytes(PDFReportGenerator().generate_experiment_summary(
            header, rows, {k: v for k, v in run_info.items() if v}, generated_at, notes=notes))
        written.append(pdf_path)

        ActivityLogger.log_run_event("report_written", str(out), f"{len(results)} experiment(s)")
        logger.info("report for %d experiment(s) written to %s", len(results), out)
        return written


emit_report = ReportGenerator.emit_report
