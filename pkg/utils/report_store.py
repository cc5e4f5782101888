"""
Report history for a working session
"""
import json
import logging
from typing import List, Dict, Any, Optional
from datetime import datetime

logger = logging.getLogger(__name__)


class ReportHistoryManager:
    """Keeps the reports produced in a session and saves them as one JSON file"""

    def __init__(self, max_history: int = 100):
        self.max_history = max_history
        self.report_history: List[Dict[str, Any]] = []
        self.session_stats = {
            "verified": 0,
            "refuted": 0,
            "inconclusive": 0,
            "error": 0,
            "ok": 0,
        }

    def add_report(self, report: Dict[str, Any], metadata: Optional[Dict] = None):
        """Add a finished report to the history"""
        try:
            entry = {
                "timestamp": datetime.now().isoformat(),
                "report": report,
                "metadata": metadata or {},
            }
            self.report_history.append(entry)
            if len(self.report_history) > self.max_history:
                self.report_history = self.report_history[-self.max_history:]
            status = report.get("status", "ok")
            self.session_stats[status] = self.session_stats.get(status, 0) + 1
            logger.info(f"Added {report.get('command')} report to history")
        except Exception as e:
            logger.error(f"Error adding report to history: {str(e)}")

    def get_history_summary(self) -> str:
        """One line per command with its status"""
        if not self.report_history:
            return "No reports yet."
        lines = [f"{entry['report'].get('command')}: {entry['report'].get('status')}" for entry in self.report_history]
        counts = ", ".join(f"{k}={v}" for k, v in self.session_stats.items() if v)
        return "\n".join(lines + [f"Totals: {counts}"])

    def clear_history(self):
        self.report_history = []
        for key in self.session_stats:
            self.session_stats[key] = 0
        logger.info("Report history cleared")

    def save_session(self, filepath: str):
        """Save report session to file"""
        try:
            session_data = {
                "session_stats": self.session_stats,
                "report_history": self.report_history,
                "timestamp": datetime.now().isoformat(),
            }
            with open(filepath, "w", encoding="utf-8") as f:
                json.dump(session_data, f, indent=2, ensure_ascii=False)
            logger.info(f"Session saved to {filepath}")
        except Exception as e:
            logger.error(f"Error saving session: {str(e)}")

    def load_session(self, filepath: str):
        """Load report session from file"""
        try:
            with open(filepath, "r", encoding="utf-8") as f:
                session_data = json.load(f)
            self.session_stats.update(session_data.get("session_stats", {}))
            self.report_history = session_data.get("report_history", [])
            logger.info(f"Session loaded from {filepath}")
        except Exception as e:
            logger.error(f"Error loading session: {str(e)}")
