"""
Text grammars for polynomials, ideals, matrices, ambient schemes and divisors

    x^2*y - 3*z*w^2
    ring { x, y, z, w }
    ideal { x*z - y^2; y*w - z^2 }
    matrix rows=2 cols=3 rowdeg=[0,0] coldeg=[1,1,1] { x, y, z ; y, z, w }
    ambient { ideal { x*w - y*z } } divisor { ideal { x; z } den: 1 }
    poly { x + y + z }

`#` starts a comment that runs to the end of the line.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from biliaison.errors import ParseError, RingMismatchError
from biliaison.ring import Field, PolyRing, Polynomial

logger = logging.getLogger(__name__)

SYMBOLS = "+-*^/(){};,=[]:"


@dataclass
class Token:
    kind: str
    value: str
    position: int


@dataclass
class MatrixSpec:
    rows: int
    cols: int
    entries: List[List[Polynomial]]
    row_degrees: Optional[List[int]] = None
    col_degrees: Optional[List[int]] = None


@dataclass
class ParsedDocument:
    ring: Optional[PolyRing] = None
    ideals: List[List[Polynomial]] = field(default_factory=list)
    matrices: List[MatrixSpec] = field(default_factory=list)
    ambient: Optional[List[Polynomial]] = None
    divisor: Optional[List[Polynomial]] = None
    denominator: Optional[Polynomial] = None
    polynomials: List[Polynomial] = field(default_factory=list)


def tokenize(text: str) -> List[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("num", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], i))
            i = j
        elif ch in SYMBOLS:
            tokens.append(Token("sym", ch, i))
            i += 1
        else:
            raise ParseError(f"Unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


class _ExpressionParser:
    """Recursive descent over one polynomial expression"""

    def __init__(self, tokens: List[Token], ring: PolyRing):
        self.tokens = tokens
        self.ring = ring
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def is_sym(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.value == value

    def parse(self) -> Polynomial:
        if self.peek().kind == "end":
            raise ParseError("Empty polynomial", self.peek().position)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"Unexpected token {tok.value!r}", tok.position)
        return value

    def expr(self) -> Polynomial:
        negate = False
        if self.is_sym("+") or self.is_sym("-"):
            negate = self.advance().value == "-"
        value = self.term()
        if negate:
            value = -value
        while self.is_sym("+") or self.is_sym("-"):
            op = self.advance().value
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.factor()
        while True:
            tok = self.peek()
            if self.is_sym("*"):
                self.advance()
                value = value * self.factor()
            elif self.is_sym("/"):
                self.advance()
                divisor = self.factor()
                if divisor.is_zero() or not divisor.is_constant():
                    raise ParseError("Division only by nonzero constants", tok.position)
                c = divisor.coefficient((0,) * self.ring.nvars)
                value = value.scale(self.ring.field.inv(c))
            elif tok.kind in ("num", "ident") or self.is_sym("("):
                value = value * self.factor()
            else:
                return value

    def factor(self) -> Polynomial:
        base = self.base()
        if self.is_sym("^"):
            self.advance()
            tok = self.advance()
            if tok.kind != "num":
                raise ParseError("Exponent must be a nonnegative integer", tok.position)
            base = base ** int(tok.value)
        return base

    def base(self) -> Polynomial:
        tok = self.advance()
        if tok.kind == "num":
            return self.ring.constant(int(tok.value))
        if tok.kind == "ident":
            if tok.value not in self.ring.variables:
                raise ParseError(f"Unknown variable {tok.value!r}", tok.position)
            return self.ring.var(tok.value)
        if tok.kind == "sym" and tok.value == "(":
            value = self.expr()
            if not self.is_sym(")"):
                raise ParseError("Expected ')'", self.peek().position)
            self.advance()
            return value
        if tok.kind == "sym" and tok.value == "-":
            return -self.factor()
        raise ParseError(f"Unexpected token {tok.value or 'end of input'!r}", tok.position)


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    return _ExpressionParser(tokenize(text), ring).parse()


class _DocumentParser:
    """Block-level parser; polynomial items are handed to the expression parser"""

    def __init__(self, text: str, ring: Optional[PolyRing], field_: Optional[Field]):
        self.tokens = tokenize(text)
        self.pos = 0
        self.doc = ParsedDocument(ring=ring)
        self.field = field_ if field_ is not None else (ring.field if ring is not None else None)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.advance()
        if tok.value != value:
            raise ParseError(f"Expected {value!r}, found {tok.value or 'end of input'!r}", tok.position)
        return tok

    def require_ring(self, position: int) -> PolyRing:
        if self.doc.ring is None:
            raise ParseError("No ring declared before polynomial data", position)
        return self.doc.ring

    def parse(self) -> ParsedDocument:
        while self.peek().kind != "end":
            tok = self.advance()
            if tok.kind != "ident":
                raise ParseError(f"Expected a block keyword, found {tok.value!r}", tok.position)
            if tok.value == "ring":
                self._ring_block(tok)
            elif tok.value == "ideal":
                self.doc.ideals.append(self._ideal_block())
            elif tok.value == "matrix":
                self.doc.matrices.append(self._matrix_block())
            elif tok.value == "ambient":
                self.expect("{")
                self.expect("ideal")
                self.doc.ambient = self._ideal_block()
                self.expect("}")
            elif tok.value == "divisor":
                self._divisor_block()
            elif tok.value == "poly":
                self.expect("{")
                self.doc.polynomials.append(self._polynomial({"}"}))
                self.expect("}")
            else:
                raise ParseError(f"Unknown block {tok.value!r}", tok.position)
        return self.doc

    def _ring_block(self, tok: Token) -> None:
        self.expect("{")
        names = []
        while True:
            item = self.advance()
            if item.kind != "ident":
                raise ParseError("Expected a variable name", item.position)
            names.append(item.value)
            sep = self.advance()
            if sep.value == "}":
                break
            if sep.value != ",":
                raise ParseError("Expected ',' or '}' in ring declaration", sep.position)
        try:
            declared = PolyRing(names, self.field)
        except ValueError as e:
            raise ParseError(str(e), tok.position)
        if self.doc.ring is not None and self.doc.ring.variables != declared.variables:
            raise RingMismatchError(f"File declares {declared}, session uses {self.doc.ring}")
        if self.doc.ring is None:
            self.doc.ring = declared

    def _collect(self, stops: set) -> List[Token]:
        start = self.pos
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "end":
                break
            if tok.kind == "sym" and tok.value == "(":
                depth += 1
            elif tok.kind == "sym" and tok.value == ")":
                depth -= 1
            elif depth == 0 and tok.kind == "sym" and tok.value in stops:
                break
            self.advance()
        chunk = self.tokens[start:self.pos]
        end_pos = self.peek().position
        return chunk + [Token("end", "", end_pos)]

    def _polynomial(self, stops: set) -> Polynomial:
        chunk = self._collect(stops)
        ring = self.require_ring(chunk[0].position)
        return _ExpressionParser(chunk, ring).parse()

    def _ideal_block(self) -> List[Polynomial]:
        self.expect("{")
        gens: List[Polynomial] = []
        if self.peek().value == "}":
            self.advance()
            return gens
        while True:
            gens.append(self._polynomial({";", ",", "}"}))
            sep = self.advance()
            if sep.value == "}":
                return gens
            if sep.value not in (";", ","):
                raise ParseError("Expected ';' or '}' in ideal", sep.position)

    def _int_list(self) -> List[int]:
        self.expect("[")
        values: List[int] = []
        while True:
            tok = self.advance()
            sign = 1
            if tok.value == "-":
                sign = -1
                tok = self.advance()
            if tok.kind != "num":
                raise ParseError("Expected an integer", tok.position)
            values.append(sign * int(tok.value))
            sep = self.advance()
            if sep.value == "]":
                return values
            if sep.value != ",":
                raise ParseError("Expected ',' or ']'", sep.position)

    def _matrix_block(self) -> MatrixSpec:
        options = {}
        while self.peek().kind == "ident":
            key = self.advance()
            self.expect("=")
            if key.value in ("rows", "cols"):
                num = self.advance()
                if num.kind != "num":
                    raise ParseError(f"{key.value} needs an integer", num.position)
                options[key.value] = int(num.value)
            elif key.value in ("rowdeg", "coldeg"):
                options[key.value] = self._int_list()
            else:
                raise ParseError(f"Unknown matrix option {key.value!r}", key.position)
        open_tok = self.expect("{")
        rows: List[List[Polynomial]] = [[]]
        while True:
            rows[-1].append(self._polynomial({",", ";", "}"}))
            sep = self.advance()
            if sep.value == "}":
                break
            if sep.value == ";":
                rows.append([])
            elif sep.value != ",":
                raise ParseError("Expected ',', ';' or '}' in matrix", sep.position)
        nrows = options.get("rows", len(rows))
        ncols = options.get("cols", len(rows[0]))
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ParseError(f"Matrix body does not match rows={nrows} cols={ncols}", open_tok.position)
        rowdeg = options.get("rowdeg")
        coldeg = options.get("coldeg")
        if rowdeg is not None and len(rowdeg) != nrows:
            raise ParseError("rowdeg length differs from rows", open_tok.position)
        if coldeg is not None and len(coldeg) != ncols:
            raise ParseError("coldeg length differs from cols", open_tok.position)
        return MatrixSpec(nrows, ncols, rows, rowdeg, coldeg)

    def _divisor_block(self) -> None:
        self.expect("{")
        self.expect("ideal")
        self.doc.divisor = self._ideal_block()
        if self.peek().value == "den":
            self.advance()
            self.expect(":")
            self.doc.denominator = self._polynomial({"}"})
        self.expect("}")


def parse_document(text: str, ring: Optional[PolyRing] = None, field_: Optional[Field] = None) -> ParsedDocument:
    return _DocumentParser(text, ring, field_).parse()


def parse_ideal(text: str, ring: PolyRing) -> List[Polynomial]:
    doc = parse_document(text, ring)
    if len(doc.ideals) != 1:
        raise ParseError(f"Expected exactly one ideal block, found {len(doc.ideals)}", 0)
    return doc.ideals[0]


def parse_matrix(text: str, ring: PolyRing) -> MatrixSpec:
    doc = parse_document(text, ring)
    if len(doc.matrices) != 1:
        raise ParseError(f"Expected exactly one matrix block, found {len(doc.matrices)}", 0)
    return doc.matrices[0]


def format_ideal(gens: Sequence[Polynomial]) -> str:
    if not gens:
        return "ideal { }"
    return "ideal { " + "; ".join(str(g) for g in gens) + " }"


def format_matrix(entries: Sequence[Sequence[Polynomial]],
                  row_degrees: Optional[Sequence[int]] = None,
                  col_degrees: Optional[Sequence[int]] = None) -> str:
    rows = len(entries)
    cols = len(entries[0]) if rows else 0
    head = f"matrix rows={rows} cols={cols}"
    if row_degrees is not None:
        head += " rowdeg=[" + ",".join(str(d) for d in row_degrees) + "]"
    if col_degrees is not None:
        head += " coldeg=[" + ",".join(str(d) for d in col_degrees) + "]"
    body = " ; ".join(", ".join(str(e) for e in row) for row in entries)
    return f"{head} {{ {body} }}"


def format_divisor(ambient: Sequence[Polynomial], gens: Sequence[Polynomial],
                   denominator: Optional[Polynomial] = None) -> str:
    text = f"ambient {{ {format_ideal(ambient)} }} divisor {{ {format_ideal(gens)}"
    if denominator is not None and not (denominator.is_constant() and denominator == 1):
        text += f" den: {denominator}"
    return text + " }"
