# ferry_planner/config.py

import os
from dotenv import load_dotenv

load_dotenv()


def _float(key: str, default: float) -> float:
    return float(os.getenv(key, default))


def _int(key: str, default: int) -> int:
    return int(os.getenv(key, default))


class Config:
    """
    Central configuration for the ferry planner.
    Every value can be overridden from the environment or a .env file.
    """

    # Logging
    LOG_LEVEL = os.getenv('FERRY_LOG_LEVEL', 'INFO').upper()

    # Branch-and-bound
    GAP_TOLERANCE = _float('FERRY_GAP_TOLERANCE', 1e-5)
    NODE_LIMIT = _int('FERRY_NODE_LIMIT', 100000)
    TIME_LIMIT = _float('FERRY_TIME_LIMIT', 600.0)
    WORKERS = _int('FERRY_WORKERS', 1)

    # LP engine: auto | native | highs
    LP_ENGINE = os.getenv('FERRY_LP_ENGINE', 'auto').lower()
    NATIVE_LP_MAX_SIZE = _int('FERRY_NATIVE_LP_MAX_SIZE', 600)
    SIMPLEX_MAX_ITER = _int('FERRY_SIMPLEX_MAX_ITER', 50000)

    # Tolerances
    FEASIBILITY_TOL = _float('FERRY_FEASIBILITY_TOL', 1e-7)
    INTEGRALITY_TOL = _float('FERRY_INTEGRALITY_TOL', 1e-6)
    VIOLATION_TOL = _float('FERRY_VIOLATION_TOL', 1e-6)

    # Model assembly
    BIG_M_SCALE = _float('FERRY_BIG_M_SCALE', 1.0)
    ENVELOPE_BREAKPOINTS = _int('FERRY_ENVELOPE_BREAKPOINTS', 5)

    # Files
    BUNDLE_DIR = os.getenv('FERRY_BUNDLE_DIR', 'bundles')

    # HTTP surface
    API_HOST = os.getenv('FERRY_API_HOST', '127.0.0.1')
    API_PORT = _int('FERRY_API_PORT', 5000)
    DEBUG = os.getenv('FERRY_DEBUG', 'False').lower() == 'true'
