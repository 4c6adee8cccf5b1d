# ferry_planner/core/errors.py


class FerryPlannerError(Exception):
    """Base class for every error raised by the planner."""
    pass
