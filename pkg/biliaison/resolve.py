"""
Free resolutions, Betti tables, Ext and canonical modules, Hilbert data, and
the tests built on them: ACM, AG, S2, omega-reflexivity, equidimensional hull
and Rao module dimensions.
"""
import logging
from collections import defaultdict
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from biliaison.errors import (
    ImproperIdealError,
    NotEquidimensionalError,
    NotSaturatedError,
)
from biliaison.groebner import Ideal, SubmoduleBasis, Vector, codimension, syzygy_vectors
from biliaison.modules import (
    GradedMatrix,
    GradedModule,
    annihilator,
    hom,
    quotient_ring,
    restrict_components,
    subquotient,
    vector_degree,
    zero_module,
)
from utils.hilbert_series import (
    Laurent,
    hilbert_function_value,
    laurent_add,
    laurent_eval_one,
    numerator_degree,
    reduce_numerator,
)

logger = logging.getLogger(__name__)

M_SYMBOL = sympy.Symbol("m")


class BettiTable:
    """Graded Betti numbers beta[i][j] = rank of R(-j) in homological degree i"""

    def __init__(self, table: Dict[Tuple[int, int], int]):
        self.table = {k: v for k, v in table.items() if v}

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.table.get(key, 0)

    def totals(self) -> List[int]:
        if not self.table:
            return []
        length = max(i for i, _ in self.table)
        return [sum(v for (i, _), v in self.table.items() if i == k) for k in range(length + 1)]

    def numerator(self) -> Laurent:
        """Alternating sum of the twists, the Hilbert series numerator"""
        out: Laurent = {}
        for (i, j), v in self.table.items():
            out = laurent_add(out, {j: v * (-1) ** i})
        return out

    def to_text(self) -> str:
        if not self.table:
            return "0"
        totals = self.totals()
        rows = sorted({j - i for i, j in self.table})
        width = max(len(str(v)) for v in list(self.table.values()) + totals) + 1
        lines = ["       " + "".join(str(i).rjust(width) for i in range(len(totals)))]
        lines.append("total: " + "".join(str(t).rjust(width) for t in totals))
        for r in range(rows[0], rows[-1] + 1):
            cells = []
            for i in range(len(totals)):
                v = self.table.get((i, i + r), 0)
                cells.append((str(v) if v else ".").rjust(width))
            lines.append(f"{r:>5}: " + "".join(cells))
        return "\n".join(lines)

    def to_dict(self) -> Dict[str, Any]:
        return {"betti": {f"{i},{j}": v for (i, j), v in sorted(self.table.items())}, "totals": self.totals()}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BettiTable) and other.table == self.table


class FreeResolution:
    """F_0 <- F_1 <- ... <- F_l; maps[k] is the matrix of F_{k+1} -> F_k"""

    def __init__(self, ring, degrees: List[List[int]], maps: List[GradedMatrix], minimal: bool):
        self.ring = ring
        self.degrees = degrees
        self.maps = maps
        self.minimal = minimal

    @property
    def length(self) -> int:
        """Projective dimension; -1 for the zero module"""
        return len(self.degrees) - 1

    def ranks(self) -> List[int]:
        return [len(d) for d in self.degrees]

    def betti(self) -> BettiTable:
        table: Dict[Tuple[int, int], int] = defaultdict(int)
        for i, degs in enumerate(self.degrees):
            for d in degs:
                table[(i, d)] += 1
        return BettiTable(dict(table))

    def is_complex(self) -> bool:
        return all(self.maps[k].compose(self.maps[k + 1]).is_zero() for k in range(len(self.maps) - 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "minimal": self.minimal,
            "length": self.length,
            "ranks": self.ranks(),
            "degrees": self.degrees,
            **self.betti().to_dict(),
        }


def free_resolution(M: GradedModule, minimal: bool = True) -> FreeResolution:
    """Resolution by iterated syzygies; syzygy modules are always minimally
    generated, the presentation is pruned only when minimal is set"""
    ring = M.ring
    if minimal:
        M = M.prune()
    if M.rank == 0:
        return FreeResolution(ring, [], [], minimal)
    degrees = [list(M.degrees)]
    maps: List[GradedMatrix] = []
    row_degrees = list(M.degrees)
    columns = list(M.relations)
    col_degrees = M.relation_degrees()
    while columns:
        maps.append(GradedMatrix(ring, row_degrees, col_degrees, columns))
        degrees.append(col_degrees)
        syz = syzygy_vectors(ring.field, ring.nvars, columns, row_degrees, col_degrees, minimal=True)
        row_degrees = col_degrees
        columns = [v for v, _ in syz]
        col_degrees = [d for _, d in syz]
    logger.info(f"Resolution ranks {[len(d) for d in degrees]}")
    return FreeResolution(ring, degrees, maps, minimal)


def betti_table(M: Union[GradedModule, Ideal]) -> BettiTable:
    if isinstance(M, Ideal):
        M = quotient_ring(M)
    return free_resolution(M).betti()


def ext_module(M: GradedModule, i: int, resolution: Optional[FreeResolution] = None) -> GradedModule:
    """Ext^i(M, R): cohomology of the dual of a free resolution"""
    if i < 0:
        raise ValueError(f"Ext index must be nonnegative, got {i}")
    ring = M.ring
    res = resolution if resolution is not None else free_resolution(M)
    if i > res.length:
        return zero_module(ring)
    dual_degrees = [-b for b in res.degrees[i]]
    zero = (0,) * ring.nvars
    if i < res.length:
        T = res.maps[i].transpose()
        kernel = syzygy_vectors(ring.field, ring.nvars, T.columns, T.row_degrees, T.col_degrees, minimal=True)
    else:
        kernel = [({(k, zero): 1}, d) for k, d in enumerate(dual_degrees)]
    image = res.maps[i - 1].transpose().columns if i >= 1 else []
    return subquotient(ring, dual_degrees, kernel, [v for v in image if v], name=f"Ext^{i}")


def canonical_module(I_X: Ideal) -> GradedModule:
    """omega_X = Ext^c(R/I_X, R)(-N)"""
    ring = I_X.ring
    c = codimension(I_X)
    E = ext_module(quotient_ring(I_X), c)
    if annihilator(E) != I_X:
        raise NotEquidimensionalError(f"{I_X} is not saturated and equidimensional; canonical module undefined")
    omega = E.twist(-ring.nvars)
    omega.name = "omega"
    logger.info(f"Canonical module with generators in degrees {omega.degrees}")
    return omega


def equidimensional_hull(I: Ideal) -> Ideal:
    """ann Ext^c(R/I, R): intersection of the primary components of minimal codimension"""
    c = codimension(I)
    hull = annihilator(ext_module(quotient_ring(I), c))
    if hull == I:
        return I
    return hull


def is_ACM(I_X: Ideal) -> bool:
    """pd(R/I) == codim I; a projective dimension equal to the number of
    variables means the ideal is not saturated"""
    c = codimension(I_X)
    pd = free_resolution(quotient_ring(I_X)).length
    if pd == I_X.ring.nvars and c < pd:
        raise NotSaturatedError(f"{I_X} has depth zero; saturate it first")
    return pd == c


def ag_shift(I_Y: Ideal) -> Optional[int]:
    """l with omega_Y = O_Y(l) when Y is AG, otherwise None"""
    c = codimension(I_Y)
    res = free_resolution(quotient_ring(I_Y))
    if res.length == I_Y.ring.nvars and c < res.length:
        raise NotSaturatedError(f"{I_Y} has depth zero; saturate it first")
    if res.length != c or len(res.degrees[-1]) != 1:
        return None
    return res.degrees[-1][0] - I_Y.ring.nvars


def is_AG(I_Y: Ideal) -> bool:
    return ag_shift(I_Y) is not None


def satisfies_S2(M: GradedModule, ring_dimension: Optional[int] = None) -> bool:
    """Serre's S2 by Ext codimension: dim Ext^{N-j}(M, R) <= j - 2 for j below the dimension"""
    if M.is_zero():
        return True
    N = M.ring.nvars
    top = ring_dimension if ring_dimension is not None else M.dimension()
    res = free_resolution(M)
    for j in range(top):
        k = N - j
        if k > res.length:
            continue
        E = ext_module(M, k, res)
        d = E.dimension()
        if d >= 0 and d > j - 2:
            logger.debug(f"S2 fails: Ext^{k} has dimension {d}")
            return False
    return True


def omega_reflexivity(M: GradedModule, omega: GradedModule) -> Dict[str, bool]:
    """Injectivity and surjectivity of M -> Hom(Hom(M, omega), omega)"""
    ring = M.ring
    field = ring.field
    M = M.prune()
    if M.rank == 0:
        return {"injective": True, "surjective": True}
    D = hom(M, omega)
    if D.rank == 0:
        return {"injective": M.is_zero(), "surjective": True}
    Mp, W = D.hom_of
    DD = hom(D, W)
    p, q, r = Mp.rank, W.rank, D.rank
    evaluations: List[Vector] = []
    for j in range(p):
        v: Vector = {}
        for k, h in enumerate(D.generators):
            for (idx, e), c in h.items():
                jj, i = divmod(idx, q)
                if jj == j:
                    v[(k * q + i, e)] = c
        evaluations.append(v)
    ambient = [W.degrees[i] - D.degrees[k] for k in range(r) for i in range(q)]
    ambient_rels = [{(k * q + i, e): c for (i, e), c in psi.items()} for k in range(r) for psi in W.relations]
    span = SubmoduleBasis(field, ring.nvars, [v for v in evaluations if v] + ambient_rels, shifts=ambient)
    surjective = all(span.contains(g) for g in (DD.generators or []))
    columns = evaluations + ambient_rels
    col_degrees = list(Mp.degrees) + [vector_degree(v, ambient) for v in ambient_rels]
    syz = syzygy_vectors(field, ring.nvars, columns, ambient, col_degrees, minimal=True)
    injective = True
    for v, _ in syz:
        k = restrict_components(v, p)
        if k and not Mp.reduces_to_zero(k):
            injective = False
            break
    return {"injective": injective, "surjective": surjective}


def is_omega_reflexive(M: GradedModule, omega: GradedModule) -> bool:
    verdict = omega_reflexivity(M, omega)
    return verdict["injective"] and verdict["surjective"]


def rao_dimensions(I_V: Ideal, i: int, window: Sequence[int]) -> List[int]:
    """dim H^i_*(I_V)_d = dim Ext^{N-i}(R/I_V, R)_{-d-N} for d in the window"""
    ring = I_V.ring
    N = ring.nvars
    dim_v = N - codimension(I_V) - 1
    if not 1 <= i <= dim_v:
        raise ValueError(f"Rao module index {i} outside 1..{dim_v}")
    lo, hi = window
    E = ext_module(quotient_ring(I_V), N - i)
    return [E.hilbert_function(-d - N) for d in range(lo, hi + 1)]


class HilbertData:
    """Hilbert series, polynomial, degree and arithmetic genus"""

    def __init__(self, numerator: Laurent, nvars: int):
        self.numerator = dict(numerator)
        self.nvars = nvars
        self.reduced, self.krull_dimension = reduce_numerator(self.numerator, nvars)
        self.dimension = self.krull_dimension - 1
        self.degree = laurent_eval_one(self.reduced) if self.reduced else 0
        self.polynomial = self._polynomial()
        self.genus: Optional[int] = None
        if self.dimension >= 1:
            self.genus = int((-1) ** self.dimension * (self.polynomial.subs(M_SYMBOL, 0) - 1))
        self.regularity_index = numerator_degree(self.reduced) - self.krull_dimension + 1

    def _polynomial(self) -> sympy.Expr:
        d = self.krull_dimension
        if d <= 0:
            return sympy.Integer(0)
        total = sympy.Integer(0)
        for k, c in self.reduced.items():
            total += c * sympy.expand_func(sympy.binomial(M_SYMBOL - k + d - 1, d - 1))
        return sympy.expand(total)

    def coefficients(self) -> List[sympy.Rational]:
        if self.polynomial == 0:
            return []
        return sympy.Poly(self.polynomial, M_SYMBOL).all_coeffs()

    def hilbert_function(self, d: int) -> int:
        return hilbert_function_value(self.numerator, self.nvars, d)

    def evaluate(self, d: int) -> int:
        return int(self.polynomial.subs(M_SYMBOL, d))

    def agrees_from(self, start: int, stop: int) -> bool:
        return all(self.hilbert_function(d) == self.evaluate(d) for d in range(start, stop))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "numerator": {str(k): v for k, v in sorted(self.numerator.items())},
            "reduced_numerator": {str(k): v for k, v in sorted(self.reduced.items())},
            "krull_dimension": self.krull_dimension,
            "dimension": self.dimension,
            "degree": self.degree,
            "hilbert_polynomial": str(self.polynomial),
            "genus": self.genus,
            "regularity_index": self.regularity_index,
        }


def hilbert_data(I: Union[Ideal, GradedModule]) -> HilbertData:
    if isinstance(I, GradedModule):
        return HilbertData(I.hilbert_numerator(), I.ring.nvars)
    if I.is_unit():
        raise ImproperIdealError(f"{I} is the unit ideal; R/I is zero")
    return HilbertData(I.hilbert_numerator(), I.ring.nvars)


def hilbert_function(obj: Union[Ideal, GradedModule], d: int) -> int:
    if isinstance(obj, Ideal):
        return hilbert_function_value(obj.hilbert_numerator(), obj.ring.nvars, d)
    return obj.hilbert_function(d)


def omega_endomorphism_check(I_X: Ideal, window: Sequence[int]) -> bool:
    """Hom(omega, omega) and R/I_X have equal Hilbert functions on the window"""
    omega = canonical_module(I_X)
    ends = hom(omega, omega)
    lo, hi = window
    return all(ends.hilbert_function(d) == hilbert_function(I_X, d) for d in range(lo, hi + 1))
