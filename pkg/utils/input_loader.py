"""
Input loading for ideal, matrix, divisor, polynomial, ring and certificate files
"""
import json
import os
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from biliaison.errors import ParseError
from biliaison.ring import Field, PolyRing
from utils.parser import ParsedDocument, parse_document

logger = logging.getLogger(__name__)

SUPPORTED_EXTENSIONS = {
    ".id": "ideal",
    ".mat": "matrix",
    ".div": "divisor",
    ".poly": "polynomial",
    ".ring": "ring",
    ".json": "certificate",
}


@dataclass
class LoadedInput:
    kind: str
    text: str
    document: Optional[ParsedDocument] = None
    data: Optional[Dict[str, Any]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


class InputLoader:
    """Loads inputs from files or inline text and attaches metadata"""

    def __init__(self, field_: Optional[Field] = None):
        self.field = field_

    def load(self, source: str, ring: Optional[PolyRing] = None, kind: Optional[str] = None) -> LoadedInput:
        """A path with a known extension is read from disk; anything else is inline text"""
        extension = os.path.splitext(source)[1].lower()
        if extension in SUPPORTED_EXTENSIONS and os.path.exists(source):
            with open(source, "r", encoding="utf-8") as f:
                text = f.read()
            loaded = self._parse(text, ring, SUPPORTED_EXTENSIONS[extension])
            loaded.metadata.update({"source_file": os.path.basename(source), "file_type": extension})
            logger.info(f"Loaded {loaded.kind} from {source}")
            return loaded
        if os.path.exists(source):
            logger.warning(f"Unsupported file format: {extension}")
            with open(source, "r", encoding="utf-8") as f:
                text = f.read()
            loaded = self._parse(text, ring, kind)
            loaded.metadata.update({"source_file": os.path.basename(source), "file_type": extension})
            return loaded
        loaded = self._parse(source, ring, kind)
        loaded.metadata["source_file"] = None
        return loaded

    def _parse(self, text: str, ring: Optional[PolyRing], kind: Optional[str]) -> LoadedInput:
        if kind == "certificate" or text.lstrip().startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise ParseError(f"Invalid certificate JSON: {e.msg}", e.pos)
            return LoadedInput("certificate", text, data=data)
        document = parse_document(text, ring, self.field)
        return LoadedInput(kind or self._detect_kind(document), text, document=document)

    @staticmethod
    def _detect_kind(document: ParsedDocument) -> str:
        if document.divisor is not None:
            return "divisor"
        if document.matrices:
            return "matrix"
        if document.ideals:
            return "ideal"
        if document.polynomials:
            return "polynomial"
        return "ring"
