"""
Exact coefficient fields and homogeneous multivariate polynomials
"""
import logging
import operator
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from biliaison.errors import RingMismatchError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

DEFAULT_PRIME = 32003
MAX_DEGREE = 200


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class PrimeField:
    """Residues modulo an odd prime, stored as ints in [0, p)"""

    kind = "prime"

    def __init__(self, p: int = DEFAULT_PRIME):
        if p < 3 or not _is_prime(p):
            raise ValueError(f"Characteristic must be an odd prime, got {p}")
        self.p = p
        self.characteristic = p

    @property
    def name(self) -> str:
        return f"ZZ/{self.p}"

    def __call__(self, value: Any) -> int:
        if isinstance(value, Fraction):
            return (value.numerator * self.inv(value.denominator % self.p)) % self.p
        return int(value) % self.p

    def norm(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        return pow(x, self.p - 2, self.p)

    def signed(self, c: int) -> int:
        return c - self.p if c > self.p // 2 else c

    def random_element(self, rng: random.Random, nonzero: bool = False) -> int:
        return rng.randrange(1 if nonzero else 0, self.p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("prime", self.p))

    def __repr__(self) -> str:
        return self.name


class RationalField:
    """The rationals; Fraction keeps values in lowest terms"""

    kind = "rational"
    characteristic = 0
    name = "QQ"

    def __call__(self, value: Any) -> Fraction:
        return Fraction(value)

    def norm(self, x: Scalar) -> Fraction:
        return x if isinstance(x, Fraction) else Fraction(x)

    def inv(self, x: Scalar) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / Fraction(x)

    def signed(self, c: Fraction) -> Fraction:
        return c

    def random_element(self, rng: random.Random, nonzero: bool = False) -> Fraction:
        while True:
            c = Fraction(rng.randint(-9, 9))
            if c != 0 or not nonzero:
                return c

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("rational")

    def __repr__(self) -> str:
        return self.name


Field = Union[PrimeField, RationalField]


def make_field(kind: str = "prime", prime: int = DEFAULT_PRIME) -> Field:
    """Build a field from its config tag"""
    if kind in ("rational", "QQ", "qq", "0"):
        return RationalField()
    if kind in ("prime", "ZZ/p", "fp"):
        return PrimeField(prime)
    raise ValueError(f"Unknown field kind: {kind}")


@lru_cache(maxsize=None)
def grevlex_key(exp: Exponent) -> Tuple[int, ...]:
    """Sort key: larger key means larger monomial in graded reverse lex"""
    return (sum(exp),) + tuple(-e for e in reversed(exp))


def divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


class PolyRing:
    """Polynomial ring k[x_0..x_n] with the graded reverse lexicographic order"""

    def __init__(self, variables: Sequence[str], field: Optional[Field] = None, order: str = "grevlex"):
        names = [str(v).strip() for v in variables]
        if len(names) < 2:
            raise ValueError("A polynomial ring needs at least 2 variables")
        if len(set(names)) != len(names):
            raise ValueError(f"Variable names must be distinct: {names}")
        for name in names:
            if not name or not (name[0].isalpha() or name[0] == "_") or not name.replace("_", "a").isalnum():
                raise ValueError(f"Invalid variable name: {name!r}")
        if order != "grevlex":
            raise ValueError("Only the grevlex order is supported")
        self.variables = tuple(names)
        self.nvars = len(names)
        self.field = field if field is not None else PrimeField()
        self.order = order
        self._index = {name: i for i, name in enumerate(names)}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyRing)
            and other.variables == self.variables
            and other.field == self.field
        )

    def __hash__(self) -> int:
        return hash((self.variables, self.field))

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.variables)}; {self.field.name})"

    def to_dict(self) -> Dict[str, Any]:
        return {"variables": list(self.variables), "field": self.field.name}

    def declaration(self) -> str:
        return "ring { " + ", ".join(self.variables) + " }"

    def index(self, name: str) -> int:
        if name not in self._index:
            raise KeyError(f"Unknown variable: {name}")
        return self._index[name]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _clean=True)

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: Scalar) -> "Polynomial":
        return self.monomial((0,) * self.nvars, c)

    def monomial(self, exp: Exponent, coeff: Scalar = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exp): coeff})

    def var(self, name: str) -> "Polynomial":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return self.monomial(tuple(exp))

    @property
    def gens(self) -> List["Polynomial"]:
        return [self.var(v) for v in self.variables]

    def parse(self, text: str) -> "Polynomial":
        from utils.parser import parse_polynomial

        return parse_polynomial(text, self)

    def key(self, exp: Exponent) -> Tuple[int, ...]:
        return grevlex_key(exp)

    def exponents_of_degree(self, d: int) -> List[Exponent]:
        if d < 0:
            return []
        out = []
        for combo in combinations_with_replacement(range(self.nvars), d):
            exp = [0] * self.nvars
            for i in combo:
                exp[i] += 1
            out.append(tuple(exp))
        out.sort(key=grevlex_key, reverse=True)
        return out

    def random_form(self, d: int, rng: random.Random) -> "Polynomial":
        """Seeded random homogeneous form of degree d (zero for d < 0)"""
        terms = {exp: self.field.random_element(rng) for exp in self.exponents_of_degree(d)}
        return Polynomial(self, terms)

    def linear_form(self, coeffs: Sequence[Scalar]) -> "Polynomial":
        terms = {}
        for i, c in enumerate(coeffs):
            exp = [0] * self.nvars
            exp[i] = 1
            terms[tuple(exp)] = c
        return Polynomial(self, terms)

    def hyperplane(self) -> "Polynomial":
        """Sum of the variables, the default hyperplane section"""
        return self.linear_form([1] * self.nvars)


def ring_from_dict(data: Dict[str, Any]) -> PolyRing:
    """Inverse of PolyRing.to_dict"""
    name = data.get("field", f"ZZ/{DEFAULT_PRIME}")
    if name == "QQ":
        field = RationalField()
    else:
        field = PrimeField(int(name.split("/", 1)[1]))
    return PolyRing(data["variables"], field)


def monomials_of_degree(ring: PolyRing, d: int) -> List["Polynomial"]:
    """All monomials of degree d, descending in the ring order"""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return [ring.monomial(e) for e in ring.exponents_of_degree(d)]


class Polynomial:
    """Immutable sparse polynomial; terms map exponent tuples to nonzero coefficients"""

    __slots__ = ("ring", "_terms", "_sorted", "_degree", "_hash")

    def __init__(self, ring: PolyRing, terms: Optional[Dict[Exponent, Any]] = None, _clean: bool = False):
        self.ring = ring
        self._sorted = None
        self._hash = None
        if _clean:
            self._terms = terms if terms is not None else {}
        else:
            field = ring.field
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != ring.nvars:
                    raise ValueError(f"Exponent {exp} does not match {ring.nvars} variables")
                c = field(c)
                if c != 0:
                    clean[exp] = field.norm(clean.get(exp, 0) + c)
                    if clean[exp] == 0:
                        del clean[exp]
            self._terms = clean
        self._degree = max((sum(e) for e in self._terms), default=-1)
        if self._degree > MAX_DEGREE:
            raise OverflowError(f"Degree {self._degree} exceeds the supported bound {MAX_DEGREE}")

    # -- inspection

    @property
    def terms(self) -> List[Tuple[Exponent, Scalar]]:
        """Terms sorted strictly descending in the monomial order"""
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)
        return self._sorted

    def term_dict(self) -> Dict[Exponent, Scalar]:
        return dict(self._terms)

    def coefficient(self, exp: Exponent) -> Scalar:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        return self._degree

    def is_constant(self) -> bool:
        return self._degree <= 0

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c for e, c in self._terms.items() if sum(e) == d}, _clean=True)

    @property
    def leading_monomial(self) -> Exponent:
        return self.terms[0][0]

    @property
    def leading_coefficient(self) -> Scalar:
        return self.terms[0][1]

    @property
    def leading_term(self) -> Tuple[Exponent, Scalar]:
        return self.terms[0]

    # -- arithmetic

    def _coerce(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.ring.field
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = field.norm(out.get(e, 0) + c)
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        field = self.ring.field
        return Polynomial(self.ring, {e: field.norm(-c) for e, c in self._terms.items()}, _clean=True)

    def __sub__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return self.ring.zero()
        if self._degree + other._degree > MAX_DEGREE:
            raise OverflowError("product degree exceeds the supported bound")
        field = self.ring.field
        add = operator.add
        out: Dict[Exponent, Any] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(map(add, ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        clean = {}
        for e, c in out.items():
            c = field.norm(c)
            if c != 0:
                clean[e] = c
        return Polynomial(self.ring, clean, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        field = self.ring.field
        c = field(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {e: field.norm(v * c) for e, v in self._terms.items()}, _clean=True)

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient))

    def mul_monomial(self, exp: Exponent, c: Scalar = 1) -> "Polynomial":
        field = self.ring.field
        add = operator.add
        return Polynomial(
            self.ring,
            {tuple(map(add, e, exp)): field.norm(v * c) for e, v in self._terms.items()},
            _clean=True,
        )

    def exact_divide(self, g: "Polynomial") -> "Polynomial":
        """Quotient f / g; raises ValueError when g does not divide f"""
        g = self._coerce(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        field = self.ring.field
        lm_g, lc_g = g.leading_term
        inv = field.inv(lc_g)
        quotient: Dict[Exponent, Any] = {}
        rem = self
        while rem._terms:
            e, c = rem.leading_term
            if not divides(lm_g, e):
                raise ValueError(f"{g} does not divide {self}")
            qe = tuple(a - b for a, b in zip(e, lm_g))
            qc = field.norm(c * inv)
            quotient[qe] = qc
            rem = rem - g.mul_monomial(qe, qc)
        return Polynomial(self.ring, quotient, _clean=True)

    # -- identity

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        field = self.ring.field
        parts = []
        for idx, (exp, c) in enumerate(self.terms):
            s = field.signed(c)
            negative = s < 0
            magnitude = -s if negative else s
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.ring.variables, exp)
                if k
            )
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            if idx == 0:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Dispatch add/sub/mul by name"""
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown operation: {op}")


def homogeneous_component(f: Polynomial, d: int) -> Polynomial:
    return f.homogeneous_component(d)


def random_combination(polys: Iterable[Polynomial], degree: int, rng: random.Random) -> Optional[Polynomial]:
    """Random homogeneous element of degree `degree` in the ideal spanned by polys"""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return None
    ring = polys[0].ring
    total = ring.zero()
    for p in polys:
        k = degree - p.degree()
        if k >= 0:
            total = total + ring.random_form(k, rng) * p
    return total
