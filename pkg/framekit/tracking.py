"""
Timing and progress tracking for CLI runs.
"""
import logging
import time
from datetime import datetime
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class RunTracker:
    """Track the steps of one command run and their durations."""

    def __init__(self):
        self.activity_log: List[Dict[str, Any]] = []
        self._activity_id = 0
        self._started = time.perf_counter()
        self.started_at = datetime.now().isoformat(timespec="seconds")

    def start_activity(self, step: str, params: Optional[Dict[str, Any]] = None) -> int:
        """Start tracking a new step"""
        self._activity_id += 1
        activity = {
            "id": self._activity_id,
            "step": step,
            "params": dict(params or {}),
            "start": time.perf_counter(),
            "status": "running",
        }
        self.activity_log.append(activity)
        logger.info("started %s", step)
        return self._activity_id

    def complete_activity(self, activity_id: int, status: str = "complete"):
        """Mark step as finished"""
        activity = self._find(activity_id)
        if activity is None:
            return
        activity["status"] = status
        activity["duration"] = time.perf_counter() - activity["start"]
        logger.info("%s %s in %.3fs", status, activity["step"], activity["duration"])

    def _find(self, activity_id: int) -> Optional[Dict[str, Any]]:
        for activity in reversed(self.activity_log):
            if activity["id"] == activity_id:
                return activity
        return None

    def get_activity_summary(self) -> Dict[str, Any]:
        """Timing block for the report envelope."""
        return {
            "started_at": self.started_at,
            "total_seconds": time.perf_counter() - self._started,
            "steps": [
                {
                    "step": a["step"],
                    "status": a["status"],
                    "seconds": a.get("duration", time.perf_counter() - a["start"]),
                }
                for a in self.activity_log
            ],
        }
