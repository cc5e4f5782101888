"""
Session orchestrator: field and ring setup, input loading, report assembly
and report history
"""
import os
import json
import time
import hashlib
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
from datetime import datetime

from config import Config
from biliaison.determinantal import HomogeneousMatrix
from biliaison.divisor import AmbientScheme, Divisor, effective_divisor_from_subscheme
from biliaison.errors import BiliaisonError, ParseError, RingMismatchError
from biliaison.groebner import Ideal
from biliaison.ring import PolyRing, Polynomial, make_field
from utils.fixture_store import FixtureStoreManager
from utils.input_loader import InputLoader, LoadedInput
from utils.report_store import ReportHistoryManager

# Configure logging
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL.upper(), logging.WARNING),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

EXIT_CODES = {"ok": 0, "verified": 0, "refuted": 1, "inconclusive": 2, "error": 2}

Outcome = Tuple[Dict[str, Any], str, List[Dict[str, Any]]]


class Report:
    """Command echo, input digest, outputs, certificates and verdict of one run"""

    def __init__(self, command: str, inputs: Dict[str, Any], seed: int):
        self.command = command
        self.inputs = inputs
        self.seed = seed
        self.outputs: Dict[str, Any] = {}
        self.certificates: List[Dict[str, Any]] = []
        self.status = "ok"
        self.error: Optional[str] = None
        self.timing: Optional[float] = None

    @property
    def digest(self) -> str:
        payload = json.dumps({"command": self.command, "inputs": self.inputs, "seed": self.seed}, sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    @property
    def exit_code(self) -> int:
        return EXIT_CODES.get(self.status, 2)

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            "command": self.command,
            "inputs": self.inputs,
            "digest": self.digest,
            "seed": self.seed,
            "status": self.status,
            "outputs": self.outputs,
            "certificates": self.certificates,
        }
        if self.error is not None:
            data["error"] = self.error
        if include_timing and self.timing is not None:
            data["timing"] = round(self.timing, 3)
        return data

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, ensure_ascii=False)

    def to_text(self, include_timing: bool = False) -> str:
        lines = [f"command: {self.command}", f"status:  {self.status}", f"seed:    {self.seed}"]
        if self.error is not None:
            lines.append(f"error:   {self.error}")
        for key, value in self.outputs.items():
            if isinstance(value, str) and "\n" in value:
                lines.append(f"{key}:")
                lines.extend("  " + row for row in value.splitlines())
            else:
                lines.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
        if self.certificates:
            lines.append(f"certificates: {len(self.certificates)}")
        if include_timing and self.timing is not None:
            lines.append(f"timing: {self.timing:.3f}s")
        return "\n".join(lines)


class BiliaisonSession:
    """Holds the session ring, seed and search settings and runs commands into reports"""

    def __init__(
        self,
        field: Optional[str] = None,
        prime: Optional[int] = None,
        seed: Optional[int] = None,
        window: Optional[Sequence[int]] = None,
        bound: Optional[int] = None,
        retries: Optional[int] = None,
        variables: Optional[str] = None,
        timing: bool = False,
    ):
        self.config = Config()
        self.field = make_field(field or self.config.FIELD, prime or self.config.PRIME)
        self.seed = seed if seed is not None else self.config.SEED
        self.window = tuple(window) if window is not None else self.config.WINDOW
        self.bound = bound if bound is not None else self.config.SEARCH_BOUND
        self.retries = retries if retries is not None else self.config.MAX_RETRIES
        self.timing = timing
        self.ring: Optional[PolyRing] = None
        if variables:
            self.set_ring(variables)
        self.is_initialized = False
        self.input_loader: Optional[InputLoader] = None
        self.report_history: Optional[ReportHistoryManager] = None
        self.fixture_store: Optional[FixtureStoreManager] = None
        self.current_session_id: Optional[str] = None
        self._ambients: Dict[Tuple[str, ...], AmbientScheme] = {}
        self.system_stats = {
            "total_commands": 0,
            "verified": 0,
            "refuted": 0,
            "failed": 0,
        }

    def initialize(self) -> bool:
        """Initialize loaders and stores"""
        try:
            self.input_loader = InputLoader(self.field)
            self.report_history = ReportHistoryManager()
            self.fixture_store = FixtureStoreManager(self.config.FIXTURES_PATH)
            self.is_initialized = True
            logger.info(f"Session initialized over {self.field.name}")
            return True
        except Exception as e:
            logger.error(f"Error initializing session: {str(e)}")
            self.is_initialized = False
            return False

    def set_ring(self, variables: str) -> PolyRing:
        names = [v for v in variables.replace(" ", "").split(",") if v]
        try:
            ring = PolyRing(names, self.field)
        except ValueError as e:
            raise ParseError(str(e), 0)
        if self.ring is not None and self.ring != ring:
            raise RingMismatchError(f"Session ring is {self.ring}, not {ring}")
        self.ring = ring
        return ring

    # -- inputs

    def load(self, source: str, kind: Optional[str] = None) -> LoadedInput:
        if not self.is_initialized:
            self.initialize()
        loaded = self.input_loader.load(source, self.ring, kind)
        if loaded.document is not None and loaded.document.ring is not None and self.ring is None:
            self.ring = loaded.document.ring
            logger.info(f"Session ring set to {self.ring}")
        return loaded

    def _document(self, source: str, name: str):
        loaded = self.load(source)
        if loaded.document is None:
            raise BiliaisonError(f"{name}: expected a text input, got a certificate")
        return loaded.document

    def ideal(self, source: str, name: str = "ideal") -> Ideal:
        doc = self._document(source, name)
        if doc.ideals:
            gens = doc.ideals[0]
        elif doc.divisor is not None:
            gens = doc.divisor
        elif doc.ambient is not None:
            gens = doc.ambient
        else:
            raise BiliaisonError(f"{name}: no ideal found in input")
        return Ideal(self.ring, gens, name=name)

    def polynomial(self, source: str, name: str = "poly") -> Polynomial:
        """A poly block, or a bare expression in the session ring"""
        try:
            doc = self._document(source, name)
        except ParseError:
            if self.ring is None or os.path.exists(source):
                raise
            return self.ring.parse(source)
        if doc.polynomials:
            return doc.polynomials[0]
        raise BiliaisonError(f"{name}: no polynomial found in input")

    def matrix(self, source: str, name: str = "matrix") -> HomogeneousMatrix:
        doc = self._document(source, name)
        if not doc.matrices:
            raise BiliaisonError(f"{name}: no matrix found in input")
        return HomogeneousMatrix.from_spec(self.ring, doc.matrices[0])

    def ambient(self, source: str, name: str = "X") -> AmbientScheme:
        doc = self._document(source, name)
        gens = doc.ambient if doc.ambient is not None else (doc.ideals[0] if doc.ideals else None)
        if gens is None:
            raise BiliaisonError(f"{name}: no ambient ideal found in input")
        return self._ambient_for(gens, name)

    def _ambient_for(self, gens: Sequence[Polynomial], name: str) -> AmbientScheme:
        I_X = Ideal(self.ring, gens, name=name)
        key = tuple(str(g) for g in I_X.gb)
        if key not in self._ambients:
            self._ambients[key] = AmbientScheme(I_X, name=name)
        return self._ambients[key]

    def divisor(self, source: str, name: str = "D", ambient: Optional[AmbientScheme] = None) -> Divisor:
        doc = self._document(source, name)
        if doc.divisor is None:
            raise BiliaisonError(f"{name}: no divisor block found in input")
        if ambient is None:
            if doc.ambient is None:
                raise BiliaisonError(f"{name}: divisor input has no ambient block")
            ambient = self._ambient_for(doc.ambient, "X")
        J = Ideal(self.ring, doc.divisor)
        den = doc.denominator
        if den is None or den.is_constant():
            return effective_divisor_from_subscheme(ambient, J, name=name)
        return Divisor(ambient, J, den, name=name)

    # -- running

    def run(self, command: str, inputs: Dict[str, Any], action: Callable[[], Outcome]) -> Report:
        """Execute action and wrap its outputs, verdict and certificates into a Report"""
        report = Report(command, inputs, self.seed)
        self.system_stats["total_commands"] += 1
        start = time.perf_counter()
        try:
            outputs, status, certificates = action()
            report.outputs = outputs
            report.status = status
            report.certificates = certificates
            if status == "verified":
                self.system_stats["verified"] += 1
            elif status == "refuted":
                self.system_stats["refuted"] += 1
        except Exception as e:
            logger.error(f"Error running {command}: {str(e)}")
            report.status = "error"
            report.error = f"{type(e).__name__}: {str(e)}"
            self.system_stats["failed"] += 1
        report.timing = time.perf_counter() - start
        if self.report_history is not None:
            self.report_history.add_report(report.to_dict(self.timing), {"session": self.current_session_id})
        return report

    def start_new_session(self, session_id: Optional[str] = None) -> str:
        """Start a new report session"""
        try:
            if not self.is_initialized:
                self.initialize()
            if not session_id:
                session_id = f"session_{datetime.now().strftime('%Y%m%d_%H%M%S')}"
            self.current_session_id = session_id
            self.report_history.clear_history()
            logger.info(f"Started new session: {session_id}")
            return session_id
        except Exception as e:
            logger.error(f"Error starting new session: {str(e)}")
            return "default_session"

    def end_session(self, save_session: bool = True) -> bool:
        """End the current session, saving its reports"""
        try:
            if save_session and self.report_history and self.current_session_id:
                os.makedirs(self.config.REPORTS_PATH, exist_ok=True)
                session_file = os.path.join(self.config.REPORTS_PATH, f"{self.current_session_id}.json")
                self.report_history.save_session(session_file)
                logger.info(f"Session saved: {session_file}")
            self.current_session_id = None
            return True
        except Exception as e:
            logger.error(f"Error ending session: {str(e)}")
            return False

    def get_system_status(self) -> Dict[str, Any]:
        """Get session status and statistics"""
        return {
            "is_initialized": self.is_initialized,
            "current_session": self.current_session_id,
            "ring": self.ring.to_dict() if self.ring is not None else None,
            "seed": self.seed,
            "window": list(self.window),
            "bound": self.bound,
            "stats": self.system_stats.copy(),
            "components": {
                "input_loader": self.input_loader is not None,
                "report_history": self.report_history is not None,
                "fixture_store": self.fixture_store is not None,
            },
        }
