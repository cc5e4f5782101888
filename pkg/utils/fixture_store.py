"""
Bundled fixture management: index lookup, expectation files and comparison
"""
import os
import json
import logging
from typing import List, Optional, Dict, Any
from datetime import datetime

logger = logging.getLogger(__name__)


class FixtureStoreManager:
    """Manages the fixture index and the expected-report files next to it"""

    def __init__(self, path: str = "fixtures"):
        self.path = path
        self.index: List[Dict[str, Any]] = []

    def load_index(self) -> List[Dict[str, Any]]:
        """Load fixtures/index.json"""
        try:
            index_path = os.path.join(self.path, "index.json")
            if not os.path.exists(index_path):
                logger.warning(f"Fixture index does not exist: {index_path}")
                self.index = []
                return self.index
            with open(index_path, "r", encoding="utf-8") as f:
                self.index = json.load(f).get("fixtures", [])
            logger.info(f"Loaded {len(self.index)} fixtures from {index_path}")
            return self.index
        except Exception as e:
            logger.error(f"Error loading fixture index: {str(e)}")
            self.index = []
            return self.index

    def find(self, name: str) -> Optional[Dict[str, Any]]:
        if not self.index:
            self.load_index()
        return next((f for f in self.index if f.get("name") == name), None)

    def find_by_tag(self, tag: str) -> List[Dict[str, Any]]:
        if not self.index:
            self.load_index()
        return [f for f in self.index if tag in f.get("tags", [])]

    def resolve_argv(self, fixture: Dict[str, Any]) -> List[str]:
        """Fixture arguments with input file names made relative to the fixture directory"""
        argv = []
        for arg in fixture.get("argv", []):
            candidate = os.path.join(self.path, arg)
            argv.append(candidate if not arg.startswith("-") and os.path.exists(candidate) else arg)
        return argv

    def load_expected(self, fixture: Dict[str, Any]) -> Dict[str, Any]:
        expected_path = os.path.join(self.path, fixture["expected"])
        with open(expected_path, "r", encoding="utf-8") as f:
            return json.load(f).get("expect", {})

    def save_expected(self, fixture: Dict[str, Any], expect: Dict[str, Any]) -> None:
        """Save an expectation file with metadata"""
        try:
            os.makedirs(self.path, exist_ok=True)
            data = {
                "fixture": fixture["name"],
                "argv": fixture.get("argv", []),
                "expect": expect,
                "timestamp": datetime.now().isoformat(),
            }
            with open(os.path.join(self.path, fixture["expected"]), "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, ensure_ascii=False)
            logger.info(f"Expectation saved for {fixture['name']}")
        except Exception as e:
            logger.error(f"Error saving expectation: {str(e)}")
            raise

    @staticmethod
    def compare(actual: Any, expected: Any, prefix: str = "") -> List[str]:
        """Keys present in the expectation must match; extra keys in the report are ignored"""
        if isinstance(expected, dict):
            if not isinstance(actual, dict):
                return [f"{prefix or '.'}: expected an object, got {actual!r}"]
            diffs = []
            for key, value in expected.items():
                path = f"{prefix}.{key}" if prefix else key
                if key not in actual:
                    diffs.append(f"{path}: missing")
                else:
                    diffs.extend(FixtureStoreManager.compare(actual[key], value, path))
            return diffs
        if actual != expected:
            return [f"{prefix}: expected {expected!r}, got {actual!r}"]
        return []
