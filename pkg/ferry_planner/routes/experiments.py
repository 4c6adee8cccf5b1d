# ferry_planner/routes/experiments.py

from flask import Blueprint, current_app, jsonify, request

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.experiment_runner import EXPERIMENT_IDS, ExperimentRunner
from ferry_planner.core.report_generator import ReportGenerator
from ferry_planner.core.scenario_manager import ScenarioManager
from ferry_planner.models.solution import BnbConfig
from ferry_planner.utils.helpers import resolve_bundle

bp = Blueprint('experiments', __name__)


# ----------------------------------------------------------------------
# POST /api/v1/experiments/run → solve experiments and return the summary
# Body:
#   bundle: String (required)
#   experiments: List[int] (optional, default [1, 2, 3, 4])
#   gap: Float (optional) relative gap tolerance
#   time_limit: Float (optional) seconds per experiment
# ----------------------------------------------------------------------
@bp.route('/run', methods=['POST'])
def run_experiments():
    try:
        data = request.get_json(silent=True) or {}
        bundle = data.get('bundle')
        if not bundle:
            return jsonify({"errors": ["bundle is required"]}), 400
        ids = data.get('experiments') or list(EXPERIMENT_IDS)
        if not isinstance(ids, list) or not all(isinstance(i, int) for i in ids):
            return jsonify({"errors": ["experiments must be a list of integers"]}), 400

        try:
            cfg = BnbConfig.from_config(
                gap_tolerance=data.get('gap'),
                time_limit=data.get('time_limit'),
                log_nodes=False,
            )
        except (TypeError, ValueError) as e:
            return jsonify({"errors": [str(e)]}), 400

        s = ScenarioManager.load(resolve_bundle(bundle, current_app.config['BUNDLE_DIR']))
        results = ExperimentRunner.run_experiments(s, ids, cfg)
        header, rows = ReportGenerator.summary_table(results)
        return jsonify({
            "scenario": s.name,
            "columns": header,
            "rows": rows,
            "experiments": [r.to_dict() for r in results],
        }), 200

    except FerryPlannerError as e:
        return jsonify({"errors": [str(e)]}), 400
    except Exception as e:
        return jsonify({"errors": [f"Failed to run experiments: {str(e)}"]}), 500
