# ferry_planner/routes/scenarios.py

from flask import Blueprint, current_app, jsonify, request

from ferry_planner.core.errors import FerryPlannerError
from ferry_planner.core.scenario_manager import ScenarioManager
from ferry_planner.utils.helpers import resolve_bundle

bp = Blueprint('scenarios', __name__)


# ----------------------------------------------------------------------
# POST /api/v1/scenarios/validate → load a bundle and list its violations
# Body:
#   bundle: String (required) bundle name under the bundle directory, or a path
# ----------------------------------------------------------------------
@bp.route('/validate', methods=['POST'])
def validate_scenario():
    try:
        data = request.get_json(silent=True) or {}
        bundle = data.get('bundle')
        if not bundle:
            return jsonify({"errors": ["bundle is required"]}), 400

        path = resolve_bundle(bundle, current_app.config['BUNDLE_DIR'])
        s = ScenarioManager.load(path)
        violations = ScenarioManager.validate(s)
        return jsonify({
            "scenario": s.name,
            "periods": s.grid.periods,
            "ports": [p.id for p in s.ports],
            "vessels": [v.id for v in s.vessels],
            "legs": len(s.all_legs()),
            "valid": not violations,
            "violations": [v.to_dict() for v in violations],
        }), 200

    except FerryPlannerError as e:
        return jsonify({"errors": [str(e)]}), 400
    except Exception as e:
        return jsonify({"errors": [f"Failed to validate scenario: {str(e)}"]}), 500
