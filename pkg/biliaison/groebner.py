"""
Buchberger engine over graded free modules and the ideal toolbox built on it:
membership, intersection, colon, saturation, elimination, nonzerodivisor tests
and codimension.
"""
import logging
import operator
from collections import defaultdict
from heapq import heapify, heappop, heappush
from itertools import combinations, count
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from biliaison.errors import BiliaisonError, ImproperIdealError, RingMismatchError
from biliaison.ring import Exponent, Field, PolyRing, Polynomial, Scalar, divides
from utils.hilbert_series import (
    Laurent,
    laurent_add,
    laurent_mul,
    monomial_numerator,
    reduce_numerator,
    to_laurent,
)

logger = logging.getLogger(__name__)

Term = Tuple[int, Exponent]
Vector = Dict[Term, Scalar]


class ModuleOrder:
    """Term order on (component, exponent) pairs of a graded free module.

    Keys compare as flat integer tuples: component block first (lower block
    dominates), then weighted degree plus the component shift, then grevlex
    within each variable block, then the component index.
    """

    def __init__(
        self,
        nvars: int,
        shifts: Optional[Sequence[int]] = None,
        comp_blocks: Optional[Sequence[int]] = None,
        var_blocks: Optional[Sequence[Sequence[int]]] = None,
        weights: Optional[Sequence[int]] = None,
    ):
        self.nvars = nvars
        self.shifts = list(shifts) if shifts is not None else None
        self.comp_blocks = list(comp_blocks) if comp_blocks is not None else None
        self.var_blocks = [list(b) for b in var_blocks] if var_blocks is not None else None
        self.weights = list(weights) if weights is not None else None
        self._keys: Dict[Term, Tuple[int, ...]] = {}

    def shift(self, comp: int) -> int:
        return self.shifts[comp] if self.shifts is not None else 0

    def degree(self, term: Term) -> int:
        comp, exp = term
        if self.weights is None:
            d = sum(exp)
        else:
            d = sum(w * e for w, e in zip(self.weights, exp))
        return d + self.shift(comp)

    def key(self, term: Term) -> Tuple[int, ...]:
        k = self._keys.get(term)
        if k is not None:
            return k
        comp, exp = term
        block = self.comp_blocks[comp] if self.comp_blocks is not None else 0
        head = (-block, self.degree(term))
        if self.var_blocks is None:
            body = tuple(-e for e in reversed(exp))
        else:
            body = ()
            for vb in self.var_blocks:
                body += (sum(exp[i] for i in vb),) + tuple(-exp[i] for i in reversed(vb))
        k = head + body + (-comp,)
        self._keys[term] = k
        return k


class GroebnerEngine:
    """Buchberger's algorithm with degree-ordered (normal) selection, the
    product criterion for ideals and Buchberger's chain criterion"""

    def __init__(self, field: Field, order: ModuleOrder, rank_one: bool = False):
        self.field = field
        self.order = order
        self.rank_one = rank_one
        self.basis: List[Vector] = []
        self.leads: List[Term] = []
        self._by_comp: Dict[int, List[int]] = defaultdict(list)
        self._negkeys: Dict[Term, Tuple[int, ...]] = {}
        self._mod = getattr(field, "p", None)
        self.stats = {"pairs": 0, "zero_reductions": 0, "criteria_skips": 0}

    def _negkey(self, term: Term) -> Tuple[int, ...]:
        nk = self._negkeys.get(term)
        if nk is None:
            nk = tuple(-k for k in self.order.key(term))
            self._negkeys[term] = nk
        return nk

    def lead(self, v: Vector) -> Term:
        return max(v, key=self.order.key)

    def _find_reducer(self, term: Term) -> Optional[int]:
        comp, exp = term
        for i in self._by_comp.get(comp, ()):
            if divides(self.leads[i][1], exp):
                return i
        return None

    def reduce(self, v: Vector) -> Vector:
        """Full reduction of v; the remainder has no term divisible by a lead term"""
        if not v:
            return {}
        f = dict(v)
        mod = self._mod
        add = operator.add
        heap = [(self._negkey(t), t) for t in f]
        heapify(heap)
        remainder: Vector = {}
        while heap:
            _, t = heappop(heap)
            c = f.pop(t, None)
            if c is None:
                continue
            i = self._find_reducer(t)
            if i is None:
                remainder[t] = c
                continue
            lead = self.leads[i]
            shift = tuple(b - a for a, b in zip(lead[1], t[1]))
            for gt, gv in self.basis[i].items():
                if gt == lead:
                    continue
                mt = (gt[0], tuple(map(add, gt[1], shift)))
                old = f.get(mt)
                new = (0 if old is None else old) - c * gv
                if mod:
                    new %= mod
                if new == 0:
                    if old is not None:
                        del f[mt]
                else:
                    if old is None:
                        heappush(heap, (self._negkey(mt), mt))
                    f[mt] = new
        return remainder

    def _spoly(self, i: int, j: int) -> Vector:
        add = operator.add
        ei, ej = self.leads[i][1], self.leads[j][1]
        lcm = tuple(map(max, ei, ej))
        si = tuple(a - b for a, b in zip(lcm, ei))
        sj = tuple(a - b for a, b in zip(lcm, ej))
        mod = self._mod
        out: Vector = {}
        for (gc, ge), gv in self.basis[i].items():
            out[(gc, tuple(map(add, ge, si)))] = gv
        for (gc, ge), gv in self.basis[j].items():
            t = (gc, tuple(map(add, ge, sj)))
            new = out.get(t, 0) - gv
            if mod:
                new %= mod
            if new == 0:
                out.pop(t, None)
            else:
                out[t] = new
        return out

    def _chain_criterion(self, i: int, j: int, pending: set) -> bool:
        comp = self.leads[i][0]
        lcm = tuple(map(max, self.leads[i][1], self.leads[j][1]))
        for k in self._by_comp[comp]:
            if k == i or k == j:
                continue
            if not divides(self.leads[k][1], lcm):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    def _append(self, v: Vector, lead: Term) -> int:
        k = len(self.basis)
        self.basis.append(v)
        self.leads.append(lead)
        self._by_comp[lead[0]].append(k)
        return k

    def _add(self, v: Vector, heap: list, pending: set, seq) -> None:
        lt = self.lead(v)
        lc = v[lt]
        if lc != 1:
            inv = self.field.inv(lc)
            norm = self.field.norm
            v = {t: norm(c * inv) for t, c in v.items()}
        comp, e = lt
        k = len(self.basis)
        for i in self._by_comp[comp]:
            ei = self.leads[i][1]
            if self.rank_one and all(a == 0 or b == 0 for a, b in zip(ei, e)):
                continue
            lcm = tuple(map(max, ei, e))
            pending.add((i, k))
            heappush(heap, (self.order.degree((comp, lcm)), 0, next(seq), (i, k)))
        self._append(v, lt)

    def run(self, generators: Sequence[Vector], track_minimal: bool = False) -> List[int]:
        """Compute a Groebner basis; returns indices of generators that were
        not in the span of earlier data (a minimal generating set for
        homogeneous input)"""
        heap: list = []
        seq = count()
        pending: set = set()
        minimal: List[int] = []
        for idx, g in enumerate(generators):
            if g:
                heappush(heap, (self.order.degree(self.lead(g)), 1, next(seq), idx))
        while heap:
            _, kind, _, payload = heappop(heap)
            if kind == 0:
                i, j = payload
                pending.discard((i, j))
                self.stats["pairs"] += 1
                if self._chain_criterion(i, j, pending):
                    self.stats["criteria_skips"] += 1
                    continue
                s = self._spoly(i, j)
            else:
                s = generators[payload]
            r = self.reduce(s)
            if not r:
                if kind == 0:
                    self.stats["zero_reductions"] += 1
                continue
            if kind == 1:
                minimal.append(payload)
            self._add(r, heap, pending, seq)
        logger.debug(
            f"Buchberger finished: {len(self.basis)} elements, {self.stats['pairs']} pairs, "
            f"{self.stats['criteria_skips']} skipped, {self.stats['zero_reductions']} reduced to zero"
        )
        return minimal

    def finalize(self) -> List[Vector]:
        """Replace the working basis by the reduced Groebner basis"""
        ordered = sorted(range(len(self.basis)), key=lambda i: self.order.key(self.leads[i]))
        keep: List[int] = []
        for i in ordered:
            comp, e = self.leads[i]
            if any(self.leads[k][0] == comp and divides(self.leads[k][1], e) for k in keep):
                continue
            keep.append(i)
        minimal = GroebnerEngine(self.field, self.order, self.rank_one)
        minimal._negkeys = self._negkeys
        for i in keep:
            minimal._append(self.basis[i], self.leads[i])
        reduced: List[Vector] = []
        for i in keep:
            lt = self.leads[i]
            tail = {t: c for t, c in self.basis[i].items() if t != lt}
            r = minimal.reduce(tail)
            r[lt] = 1
            reduced.append(r)
        self.basis = []
        self.leads = []
        self._by_comp = defaultdict(list)
        for v in reduced:
            self._append(v, self.lead(v))
        return reduced


class SubmoduleBasis:
    """Reduced Groebner basis of a submodule of a graded free module"""

    def __init__(
        self,
        field: Field,
        nvars: int,
        generators: Sequence[Vector],
        shifts: Optional[Sequence[int]] = None,
        order: Optional[ModuleOrder] = None,
        rank_one: bool = False,
        track_minimal: bool = False,
    ):
        self.order = order if order is not None else ModuleOrder(nvars, shifts)
        self._engine = GroebnerEngine(field, self.order, rank_one)
        self.minimal = self._engine.run(list(generators), track_minimal)
        self.vectors = self._engine.finalize()

    def normal_form(self, v: Vector) -> Vector:
        return self._engine.reduce(v)

    def contains(self, v: Vector) -> bool:
        return not self._engine.reduce(v)

    @property
    def leads(self) -> List[Term]:
        return list(self._engine.leads)


def poly_to_vector(p: Polynomial, comp: int = 0) -> Vector:
    return {(comp, e): c for e, c in p.term_dict().items()}


def vector_to_poly(v: Vector, ring: PolyRing) -> Polynomial:
    return Polynomial(ring, {e: c for (_, e), c in v.items()}, _clean=True)


def syzygy_vectors(
    field: Field,
    nvars: int,
    columns: Sequence[Vector],
    row_shifts: Sequence[int],
    col_degrees: Sequence[int],
    minimal: bool = True,
) -> List[Tuple[Vector, int]]:
    """Generators of the kernel of R^k -> F given by columns; returns
    (vector in R^k, degree) pairs"""
    rank = len(row_shifts)
    k = len(columns)
    if k == 0:
        return []
    zero = (0,) * nvars
    shifts = list(row_shifts) + list(col_degrees)
    order = ModuleOrder(nvars, shifts, comp_blocks=[0] * rank + [1] * k)
    gens = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(rank + j, zero)] = 1
        gens.append(v)
    engine = GroebnerEngine(field, order)
    engine.run(gens)
    reduced = engine.finalize()
    syz: List[Vector] = []
    for v in reduced:
        if engine.lead(v)[0] >= rank:
            syz.append({(c - rank, e): x for (c, e), x in v.items()})
    if not syz:
        return []
    syz_order = ModuleOrder(nvars, list(col_degrees))
    if minimal:
        basis = SubmoduleBasis(field, nvars, syz, order=syz_order, track_minimal=True)
        syz = [syz[i] for i in basis.minimal]
    out = []
    for v in syz:
        lead = max(v, key=syz_order.key)
        out.append((v, syz_order.degree(lead)))
    out.sort(key=lambda item: item[1])
    return out


def module_numerator(leads: Iterable[Term], nvars: int, shifts: Sequence[int]) -> Laurent:
    """Numerator of the Hilbert series of F / U from the lead terms of a basis of U"""
    by_comp: Dict[int, List[Exponent]] = defaultdict(list)
    for comp, e in leads:
        by_comp[comp].append(e)
    total: Laurent = {}
    for comp, shift in enumerate(shifts):
        coeffs = monomial_numerator(by_comp.get(comp, []), nvars)
        total = laurent_add(total, to_laurent(coeffs, shift))
    return total


def interreduce(ring: PolyRing, polys: Sequence[Polynomial]) -> List[Polynomial]:
    """Reduced Groebner basis from polynomials already forming a Groebner basis"""
    engine = GroebnerEngine(ring.field, ModuleOrder(ring.nvars), rank_one=True)
    for p in polys:
        if p.is_zero():
            continue
        v = poly_to_vector(p.monic())
        engine._append(v, engine.lead(v))
    return [vector_to_poly(v, ring) for v in engine.finalize()]


class Ideal:
    """Homogeneous ideal with a cached reduced Groebner basis"""

    def __init__(self, ring: PolyRing, generators: Iterable[Union[Polynomial, str]] = (), name: Optional[str] = None):
        self.ring = ring
        self.name = name
        gens: List[Polynomial] = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise RingMismatchError(f"Generator {g} lives in {g.ring}, not {ring}")
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise ValueError(f"Generator is not homogeneous: {g}")
            gens.append(g)
        self.generators = gens
        self._gb: Optional[List[Polynomial]] = None
        self._numerator: Optional[Laurent] = None
        self._codim: Optional[int] = None
        self.known_saturated: Optional[bool] = None

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one()])

    @classmethod
    def maximal(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, ring.gens)

    # -- Groebner data

    @property
    def gb(self) -> List[Polynomial]:
        if self._gb is None:
            if not self.generators:
                self._gb = []
            else:
                basis = SubmoduleBasis(
                    self.ring.field,
                    self.ring.nvars,
                    [poly_to_vector(g) for g in self.generators],
                    rank_one=True,
                )
                polys = [vector_to_poly(v, self.ring) for v in basis.vectors]
                self._gb = sorted(polys, key=lambda p: self.ring.key(p.leading_monomial))
                logger.debug(f"Groebner basis of {len(self.generators)} generators has {len(self._gb)} elements")
        return self._gb

    def _set_gb(self, polys: Sequence[Polynomial]) -> None:
        self._gb = sorted(interreduce(self.ring, polys), key=lambda p: self.ring.key(p.leading_monomial))

    def _reducer(self) -> GroebnerEngine:
        engine = GroebnerEngine(self.ring.field, ModuleOrder(self.ring.nvars), rank_one=True)
        for p in self.gb:
            v = poly_to_vector(p)
            engine._append(v, (0, p.leading_monomial))
        return engine

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring} vs {self.ring}")
        return vector_to_poly(self._reducer().reduce(poly_to_vector(f)), self.ring)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        self._check_ring(other)
        engine = self._reducer()
        return all(not engine.reduce(poly_to_vector(g)) for g in other.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(p.is_constant() for p in self.gb)

    def lead_exponents(self) -> List[Exponent]:
        return [p.leading_monomial for p in self.gb]

    def minimal_generators(self) -> List[Polynomial]:
        if not self.generators:
            return []
        basis = SubmoduleBasis(
            self.ring.field, self.ring.nvars,
            [poly_to_vector(g) for g in self.generators],
            rank_one=True, track_minimal=True,
        )
        return [self.generators[i] for i in basis.minimal]

    def hilbert_numerator(self) -> Laurent:
        """Numerator of HS(R/I) over (1 - T)^N"""
        if self._numerator is None:
            self._numerator = to_laurent(monomial_numerator(self.lead_exponents(), self.ring.nvars))
        return self._numerator

    # -- arithmetic

    def _check_ring(self, other: "Ideal") -> None:
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other: Union["Ideal", Polynomial]) -> "Ideal":
        if isinstance(other, Polynomial):
            return Ideal(self.ring, self.generators + [other])
        self._check_ring(other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: Union["Ideal", Polynomial]) -> "Ideal":
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.generators])
        self._check_ring(other)
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def power(self, k: int) -> "Ideal":
        result = Ideal.unit(self.ring)
        for _ in range(k):
            result = Ideal(self.ring, (result * self).minimal_generators())
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb == other.gb

    def __hash__(self) -> int:
        return hash((self.ring, tuple(self.gb)))

    def __str__(self) -> str:
        from utils.parser import format_ideal

        return format_ideal(self.generators)

    def __repr__(self) -> str:
        return f"Ideal({self})"

    def to_text(self) -> str:
        return str(self)


def groebner_basis(I: Ideal) -> Ideal:
    I.gb
    return I


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    return I.normal_form(f)


def _with_extra_variable(p: Polynomial, t_power: int, coeff: Scalar = 1) -> Vector:
    field = p.ring.field
    return {(0, e + (t_power,)): field.norm(c * coeff) for e, c in p.term_dict().items()}


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J via elimination of t from t*I + (1 - t)*J"""
    I._check_ring(J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    n = ring.nvars
    gens: List[Vector] = [_with_extra_variable(f, 1) for f in I.generators]
    for g in J.generators:
        v = _with_extra_variable(g, 0)
        v.update(_with_extra_variable(g, 1, -1))
        gens.append(v)
    order = ModuleOrder(n + 1, var_blocks=[[n], list(range(n))], weights=[1] * n + [0])
    basis = SubmoduleBasis(ring.field, n + 1, gens, order=order, rank_one=True)
    polys = []
    for v in basis.vectors:
        if all(e[n] == 0 for (_, e) in v):
            polys.append(Polynomial(ring, {e[:n]: c for (_, e), c in v.items()}, _clean=True))
    result = Ideal(ring, polys)
    result._set_gb(polys)
    return result


def eliminate(I: Ideal, variables: Sequence[str]) -> Ideal:
    """I ∩ k[remaining variables], returned as an ideal of the same ring"""
    ring = I.ring
    elim = sorted({ring.index(v) for v in variables})
    rest = [i for i in range(ring.nvars) if i not in elim]
    if not elim:
        return I
    order = ModuleOrder(ring.nvars, var_blocks=[elim, rest])
    basis = SubmoduleBasis(ring.field, ring.nvars, [poly_to_vector(g) for g in I.generators], order=order, rank_one=True)
    polys = [vector_to_poly(v, ring) for v in basis.vectors if all(e[i] == 0 for (_, e) in v for i in elim)]
    result = Ideal(ring, polys)
    result._set_gb(polys)
    return result


def quotient_by_element(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f) = (I ∩ (f)) / f"""
    ring = I.ring
    if f.is_zero() or I.contains(f):
        return Ideal.unit(ring)
    meet = intersect(I, Ideal(ring, [f]))
    quotients = [g.exact_divide(f) for g in meet.gb]
    result = Ideal(ring, quotients)
    result._set_gb(quotients)
    return result


def ideal_quotient_by_syzygies(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f) from first coordinates of the syzygies of (f, g_1, ..., g_k)"""
    ring = I.ring
    if f.is_zero():
        return Ideal.unit(ring)
    gens = [f] + I.generators
    columns = [poly_to_vector(g) for g in gens]
    syz = syzygy_vectors(ring.field, ring.nvars, columns, [0], [g.degree() for g in gens], minimal=False)
    firsts = []
    for v, _ in syz:
        first = {e: c for (comp, e), c in v.items() if comp == 0}
        if first:
            firsts.append(Polynomial(ring, first, _clean=True))
    return Ideal(ring, firsts)


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) as the intersection of (I : g) over generators g of J"""
    I._check_ring(J)
    ring = I.ring
    result: Optional[Ideal] = None
    for g in J.generators:
        q = quotient_by_element(I, g)
        result = q if result is None else intersect(result, q)
    return result if result is not None else Ideal.unit(ring)


def saturation(I: Ideal, J: Optional[Ideal] = None) -> Ideal:
    """(I : J^∞) by iterating the quotient until it stabilizes; J defaults to
    the irrelevant maximal ideal"""
    ring = I.ring
    irrelevant = J is None
    if J is None:
        if I.known_saturated:
            return I
        J = Ideal.maximal(ring)
    current = I
    steps = 0
    while True:
        nxt = ideal_quotient(current, J)
        steps += 1
        if nxt == current:
            break
        current = nxt
    logger.debug(f"Saturation stabilized after {steps} quotient steps")
    if irrelevant:
        current.known_saturated = True
    return current


def krull_dimension(I: Ideal) -> int:
    """Dimension of R/I from lead monomials by maximal independent sets; -1 for the unit ideal"""
    n = I.ring.nvars
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in I.lead_exponents()]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def codimension(I: Ideal) -> int:
    """N - dim R/I, read from lead-term combinatorics and cross-checked with the Hilbert series"""
    if I._codim is not None:
        return I._codim
    if I.is_unit():
        raise ImproperIdealError(f"The ideal {I} is the whole ring")
    dim = krull_dimension(I)
    _, dim_hs = reduce_numerator(I.hilbert_numerator(), I.ring.nvars)
    if dim != dim_hs:
        raise BiliaisonError(f"Dimension mismatch: independent sets give {dim}, Hilbert series gives {dim_hs}")
    I._codim = I.ring.nvars - dim
    return I._codim


def is_nonzerodivisor(f: Polynomial, I: Ideal) -> bool:
    """True iff (I : f) = I, decided by HS(R/(I+f)) = (1 - T^deg f) HS(R/I)"""
    if not f.is_homogeneous():
        raise ValueError(f"Form must be homogeneous: {f}")
    if I.is_unit():
        return True
    if f.is_zero():
        return False
    d = f.degree()
    expected = laurent_mul(I.hilbert_numerator(), {0: 1, d: -1} if d else {})
    return (I + f).hilbert_numerator() == expected
