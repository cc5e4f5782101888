"""
Finitely presented graded modules over the polynomial ring

A module is the cokernel of a homogeneous map of graded free modules. Vectors
are sparse dicts {(component, exponent): coefficient}; component i of a free
module with generator degrees a carries the twist R(-a_i).
"""
import logging
import operator
from typing import Any, Dict, List, Optional, Sequence, Tuple

from biliaison.groebner import (
    Ideal,
    SubmoduleBasis,
    Vector,
    intersect,
    module_numerator,
    poly_to_vector,
    syzygy_vectors,
)
from biliaison.ring import PolyRing, Polynomial
from utils.hilbert_series import Laurent, hilbert_function_value, reduce_numerator

logger = logging.getLogger(__name__)


def vector_degree(v: Vector, shifts: Sequence[int]) -> int:
    comp, exp = next(iter(v))
    return shifts[comp] + sum(exp)


def vector_entries(v: Vector, ring: PolyRing, rank: int) -> List[Polynomial]:
    parts: List[Dict] = [dict() for _ in range(rank)]
    for (comp, e), c in v.items():
        parts[comp][e] = c
    return [Polynomial(ring, part, _clean=True) for part in parts]


def restrict_components(v: Vector, stop: int, start: int = 0) -> Vector:
    return {(c - start, e): x for (c, e), x in v.items() if start <= c < stop}


class GradedMatrix:
    """Homogeneous map F1 -> F0 stored by columns; deg entry(i, j) = col_degrees[j] - row_degrees[i]"""

    def __init__(self, ring: PolyRing, row_degrees: Sequence[int], col_degrees: Sequence[int], columns: Sequence[Vector]):
        self.ring = ring
        self.row_degrees = list(row_degrees)
        self.col_degrees = list(col_degrees)
        self.columns = [dict(c) for c in columns]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.row_degrees), len(self.col_degrees)

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial(self.ring, {e: c for (r, e), c in self.columns[j].items() if r == i}, _clean=True)

    def rows(self) -> List[List[Polynomial]]:
        nrows, ncols = self.shape
        return [[self.entry(i, j) for j in range(ncols)] for i in range(nrows)]

    def transpose(self) -> "GradedMatrix":
        nrows, _ = self.shape
        cols: List[Vector] = [dict() for _ in range(nrows)]
        for j, col in enumerate(self.columns):
            for (r, e), c in col.items():
                cols[r][(j, e)] = c
        return GradedMatrix(
            self.ring,
            [-b for b in self.col_degrees],
            [-a for a in self.row_degrees],
            cols,
        )

    def apply(self, v: Vector) -> Vector:
        """Image of a source vector"""
        field = self.ring.field
        add = operator.add
        out: Vector = {}
        for (k, e), c in v.items():
            for (r, e2), y in self.columns[k].items():
                t = (r, tuple(map(add, e, e2)))
                new = field.norm(out.get(t, 0) + c * y)
                if new == 0:
                    out.pop(t, None)
                else:
                    out[t] = new
        return out

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """self * other"""
        return GradedMatrix(self.ring, self.row_degrees, other.col_degrees, [self.apply(c) for c in other.columns])

    def is_zero(self) -> bool:
        return not any(self.columns)

    def to_rows(self) -> List[List[str]]:
        return [[str(p) for p in row] for row in self.rows()]

    def __repr__(self) -> str:
        return f"GradedMatrix({self.shape[0]}x{self.shape[1]})"


class GradedModule:
    """Cokernel of a graded presentation, optionally remembering generators
    as vectors of an ambient free module modulo ambient relations"""

    def __init__(
        self,
        ring: PolyRing,
        degrees: Sequence[int],
        relations: Sequence[Vector] = (),
        generators: Optional[Sequence[Vector]] = None,
        ambient_degrees: Optional[Sequence[int]] = None,
        ambient_relations: Optional[Sequence[Vector]] = None,
        hom_of: Optional[Tuple["GradedModule", "GradedModule"]] = None,
        name: Optional[str] = None,
        pruned: bool = False,
    ):
        self.ring = ring
        self.degrees = list(degrees)
        self.relations = [dict(r) for r in relations if r]
        self.generators = [dict(g) for g in generators] if generators is not None else None
        self.ambient_degrees = list(ambient_degrees) if ambient_degrees is not None else None
        self.ambient_relations = [dict(r) for r in ambient_relations] if ambient_relations is not None else None
        self.hom_of = hom_of
        self.name = name
        self._pruned = pruned
        self._relation_basis: Optional[SubmoduleBasis] = None
        self._numerator: Optional[Laurent] = None

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def relation_degrees(self) -> List[int]:
        return [vector_degree(r, self.degrees) for r in self.relations]

    def presentation(self) -> GradedMatrix:
        return GradedMatrix(self.ring, self.degrees, self.relation_degrees(), self.relations)

    def relation_basis(self) -> SubmoduleBasis:
        if self._relation_basis is None:
            self._relation_basis = SubmoduleBasis(
                self.ring.field, self.ring.nvars, self.relations, shifts=self.degrees
            )
        return self._relation_basis

    def reduces_to_zero(self, v: Vector) -> bool:
        return self.relation_basis().contains(v)

    def hilbert_numerator(self) -> Laurent:
        """Numerator of the Hilbert series over (1 - T)^N"""
        if self._numerator is None:
            if not self.degrees:
                self._numerator = {}
            else:
                basis = self.relation_basis()
                self._numerator = module_numerator(basis.leads, self.ring.nvars, self.degrees)
        return self._numerator

    def hilbert_function(self, d: int) -> int:
        return hilbert_function_value(self.hilbert_numerator(), self.ring.nvars, d)

    def dimension(self) -> int:
        """Krull dimension; -1 for the zero module"""
        return reduce_numerator(self.hilbert_numerator(), self.ring.nvars)[1]

    def is_zero(self) -> bool:
        return not self.hilbert_numerator()

    def twist(self, k: int) -> "GradedModule":
        """M(k): generator degrees drop by k"""
        amb = [a - k for a in self.ambient_degrees] if self.ambient_degrees is not None else None
        out = GradedModule(
            self.ring, [a - k for a in self.degrees], self.relations,
            generators=self.generators, ambient_degrees=amb,
            ambient_relations=self.ambient_relations, hom_of=self.hom_of,
            name=self.name, pruned=self._pruned,
        )
        out._relation_basis = None
        return out

    def prune(self) -> "GradedModule":
        """Minimal presentation: eliminate generators hit by unit entries, then keep
        a minimal set of relations"""
        if self._pruned:
            return self
        field = self.ring.field
        rels = [dict(r) for r in self.relations if r]
        alive = list(range(self.rank))
        add = operator.add
        while True:
            pivot = None
            for ci, col in enumerate(rels):
                for (row, e), c in col.items():
                    if not any(e):
                        pivot = (ci, row, c)
                        break
                if pivot is not None:
                    break
            if pivot is None:
                break
            ci, row, c = pivot
            col = rels.pop(ci)
            inv = field.inv(c)
            updated = []
            for other in rels:
                entry = [(e, x) for (r, e), x in other.items() if r == row]
                for eq, xq in entry:
                    scale = field.norm(-xq * inv)
                    for (r2, e2), y in col.items():
                        t = (r2, tuple(map(add, eq, e2)))
                        new = field.norm(other.get(t, 0) + scale * y)
                        if new == 0:
                            other.pop(t, None)
                        else:
                            other[t] = new
                if other:
                    updated.append(other)
            rels = updated
            alive.remove(row)
        renumber = {old: new for new, old in enumerate(alive)}
        degrees = [self.degrees[i] for i in alive]
        rels = [{(renumber[r], e): x for (r, e), x in col.items()} for col in rels]
        if rels:
            basis = SubmoduleBasis(field, self.ring.nvars, rels, shifts=degrees, track_minimal=True)
            rels = [rels[i] for i in basis.minimal]
        gens = [self.generators[i] for i in alive] if self.generators is not None else None
        logger.debug(f"Pruned presentation {self.rank}x{len(self.relations)} to {len(degrees)}x{len(rels)}")
        return GradedModule(
            self.ring, degrees, rels, generators=gens,
            ambient_degrees=self.ambient_degrees, ambient_relations=self.ambient_relations,
            hom_of=self.hom_of, name=self.name, pruned=True,
        )

    def minimal_generator_degrees(self) -> List[int]:
        return sorted(self.prune().degrees)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "generator_degrees": list(self.degrees),
            "relation_degrees": self.relation_degrees(),
            "presentation": self.presentation().to_rows(),
            "hilbert_numerator": {str(k): v for k, v in sorted(self.hilbert_numerator().items())},
        }

    def __repr__(self) -> str:
        return f"GradedModule(rank={self.rank}, relations={len(self.relations)})"


def zero_module(ring: PolyRing) -> GradedModule:
    return GradedModule(ring, [], [], pruned=True)


def free_module(ring: PolyRing, degrees: Sequence[int]) -> GradedModule:
    return GradedModule(ring, degrees, [], pruned=True)


def quotient_ring(I: Ideal) -> GradedModule:
    """R/I as a cyclic module generated in degree 0"""
    return GradedModule(I.ring, [0], [poly_to_vector(g) for g in I.generators], name="R/I")


def subquotient(
    ring: PolyRing,
    ambient_degrees: Sequence[int],
    generators: Sequence[Tuple[Vector, int]],
    relations: Sequence[Vector],
    hom_of: Optional[Tuple[GradedModule, GradedModule]] = None,
    name: Optional[str] = None,
) -> GradedModule:
    """(G + U) / U inside a free module, presented through the syzygies of [G | U]"""
    gens = [(dict(g), d) for g, d in generators]
    if not gens:
        return zero_module(ring)
    rels = [dict(r) for r in relations if r]
    p = len(gens)
    columns = [g for g, _ in gens] + rels
    col_degrees = [d for _, d in gens] + [vector_degree(r, ambient_degrees) for r in rels]
    syz = syzygy_vectors(ring.field, ring.nvars, columns, ambient_degrees, col_degrees, minimal=True)
    presentation = [restrict_components(v, p) for v, _ in syz]
    module = GradedModule(
        ring, [d for _, d in gens], [r for r in presentation if r],
        generators=[g for g, _ in gens], ambient_degrees=ambient_degrees,
        ambient_relations=rels, hom_of=hom_of, name=name,
    )
    return module.prune()


def ideal_module(J: Ideal, I: Optional[Ideal] = None) -> GradedModule:
    """(J + I) / I as a submodule of R/I"""
    ring = J.ring
    rels = [poly_to_vector(f) for f in I.generators] if I is not None else []
    gens = [(poly_to_vector(g), g.degree()) for g in J.generators]
    return subquotient(ring, [0], gens, rels, name="J/I")


def annihilator(M: GradedModule) -> Ideal:
    """ann(M) as the intersection over generators of (U : e_j)"""
    M = M.prune()
    ring = M.ring
    if M.rank == 0:
        return Ideal.unit(ring)
    zero = (0,) * ring.nvars
    rel_degrees = M.relation_degrees()
    result: Optional[Ideal] = None
    for j, a in enumerate(M.degrees):
        columns = [{(j, zero): 1}] + M.relations
        syz = syzygy_vectors(ring.field, ring.nvars, columns, M.degrees, [a] + rel_degrees, minimal=True)
        firsts = []
        for v, _ in syz:
            part = {e: c for (comp, e), c in v.items() if comp == 0}
            if part:
                firsts.append(Polynomial(ring, part, _clean=True))
        ann_j = Ideal(ring, firsts)
        result = ann_j if result is None else intersect(result, ann_j)
    return result


def hom(M: GradedModule, N: GradedModule) -> GradedModule:
    """Hom(M, N) as the kernel of Hom(F0, N) -> Hom(F1, N); generators are maps
    F0 -> G0 stored as vectors indexed by j * rank(G0) + i"""
    ring = M.ring
    M = M.prune()
    N = N.prune()
    p, q = M.rank, N.rank
    if p == 0 or q == 0:
        return zero_module(ring)
    f, g = M.degrees, N.degrees
    ambient = [g[i] - f[j] for j in range(p) for i in range(q)]
    ambient_rels = [
        {(j * q + i, e): c for (i, e), c in psi.items()}
        for j in range(p)
        for psi in N.relations
    ]
    zero = (0,) * ring.nvars
    if not M.relations:
        kernel = [({(k, zero): 1}, ambient[k]) for k in range(p * q)]
    else:
        d = M.relation_degrees()
        target = [g[i] - d[k] for k in range(len(d)) for i in range(q)]
        alpha: List[Vector] = []
        for j in range(p):
            for i in range(q):
                col: Vector = {}
                for k, phi in enumerate(M.relations):
                    for (row, e), c in phi.items():
                        if row == j:
                            col[(k * q + i, e)] = c
                alpha.append(col)
        beta: List[Vector] = []
        beta_degrees: List[int] = []
        for k in range(len(d)):
            for psi in N.relations:
                beta.append({(k * q + i, e): c for (i, e), c in psi.items()})
                beta_degrees.append(vector_degree(psi, g) - d[k])
        syz = syzygy_vectors(ring.field, ring.nvars, alpha + beta, target, ambient + beta_degrees, minimal=True)
        kernel = []
        for v, deg in syz:
            part = restrict_components(v, p * q)
            if part:
                kernel.append((part, deg))
    module = subquotient(ring, ambient, kernel, ambient_rels, hom_of=(M, N), name="Hom")
    logger.debug(f"Hom of ranks {p}, {q}: {module.rank} generators in degrees {module.degrees}")
    return module


def hom_generator_map(H: GradedModule, k: int) -> List[List[Polynomial]]:
    """Matrix (rows over target generators, columns over source generators) of the k-th generator of a Hom module"""
    M, N = H.hom_of
    p, q = M.rank, N.rank
    entries = vector_entries(H.generators[k], H.ring, p * q)
    return [[entries[j * q + i] for j in range(p)] for i in range(q)]
