# ferry_planner/core/activity_logger.py

from __future__ import annotations

import logging
import sys
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from ferry_planner.config import Config

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class RunEvent:
    action_type: str
    target_entity: str
    details: Optional[str] = None
    data: Dict[str, Any] = field(default_factory=dict)
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def to_dict(self):
        return {
            "action_type": self.action_type,
            "target_entity": self.target_entity,
            "details": self.details,
            "data": dict(self.data),
            "timestamp": self.timestamp.isoformat(),
        }


class ActivityLogger:
    """
    Centralized logging service for planner runs.
    Configures the package loggers once and keeps an audit trail of run
    events (scenario loaded, model built, experiment solved, violations
    found) that the run manifest embeds.
    """

    _events: List[RunEvent] = []
    _lock = threading.Lock()
    _configured = False

    # ---------------------------------------------------------
    # Logger setup
    # ---------------------------------------------------------
    @staticmethod
    def configure(level: Optional[str] = None) -> logging.Logger:
        """Attach a stderr handler to the package logger; later calls only change the level."""
        root = logging.getLogger("ferry_planner")
        root.setLevel((level or Config.LOG_LEVEL).upper())
        if not ActivityLogger._configured:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(handler)
            root.propagate = False
            ActivityLogger._configured = True
        return root

    # ---------------------------------------------------------
    # Audit trail
    # ---------------------------------------------------------
    @staticmethod
    def log_run_event(action_type: str, target_entity: str, details: Optional[str] = None, **data) -> RunEvent:
        safe_action = (action_type or "").strip() or "unknown"
        safe_target = (target_entity or "").strip() or "unknown"
        event = RunEvent(action_type=safe_action, target_entity=safe_target, details=details, data=data)
        with ActivityLogger._lock:
            ActivityLogger._events.append(event)
        logging.getLogger("ferry_planner.audit").debug("%s %s %s", safe_action, safe_target, details or "")
        return event

    @staticmethod
    def get_run_events(limit: Optional[int] = None, action_type: Optional[str] = None) -> List[RunEvent]:
        with ActivityLogger._lock:
            events = list(ActivityLogger._events)
        if action_type:
            events = [e for e in events if e.action_type == action_type]
        return events[-limit:] if limit else events

    @staticmethod
    def clear():
        with ActivityLogger._lock:
            ActivityLogger._events.clear()
