# ferry_planner/app.py

from flask import Flask, jsonify

from ferry_planner import __version__
from ferry_planner.config import Config
from ferry_planner.core.activity_logger import ActivityLogger


def create_app():
    app = Flask(__name__)

    # -------------------------
    # CONFIG
    # -------------------------
    app.config['BUNDLE_DIR'] = Config.BUNDLE_DIR
    ActivityLogger.configure(Config.LOG_LEVEL)

    # -------------------------
    # BLUEPRINT REGISTRATION
    # -------------------------

    # Scenarios
    from ferry_planner.routes.scenarios import bp as scenarios_bp
    app.register_blueprint(scenarios_bp, url_prefix='/api/v1/scenarios')

    # Experiments
    from ferry_planner.routes.experiments import bp as experiments_bp
    app.register_blueprint(experiments_bp, url_prefix='/api/v1/experiments')

    # -------------------------
    # BASIC ROUTES
    # -------------------------
    @app.route('/api/v1')
    def home():
        return jsonify({
            "message": "Ferry planner API",
            "version": __version__,
        })

    @app.route('/api/v1/health')
    def health():
        return jsonify({"status": "healthy"}), 200

    return app


if __name__ == '__main__':
    app = create_app()

    host = Config.API_HOST.strip().replace("http://", "").replace("https://", "")
    if ":" in host:
        host = host.split(":")[0]

    app.run(host=host, port=Config.API_PORT, debug=Config.DEBUG)
