"""
Homogeneous matrices, minors and determinantal ideals, the minor identity
M_ij M_kl - M_il M_kj = ±M_{ij,kl} M, and the Gaeta chain of ascending
Gorenstein biliaisons that peels one row and one column at a time.
"""
import logging
import random
from collections import deque
from itertools import combinations, permutations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from biliaison.divisor import DEFAULT_MAX_RETRIES, AmbientScheme, Divisor, Multiplier
from biliaison.errors import (
    BiliaisonError,
    GaetaChainError,
    ImproperIdealError,
    IndexClashError,
    NonStandardMatrixError,
)
from biliaison.groebner import Ideal, codimension, is_nonzerodivisor
from biliaison.liaison import BiliaisonCertificate, verify_elementary_biliaison
from biliaison.resolve import hilbert_data
from biliaison.ring import PolyRing, Polynomial

logger = logging.getLogger(__name__)


def infer_degrees(entries: Sequence[Sequence[Polynomial]]) -> Tuple[List[int], List[int]]:
    """Row and column degrees with deg entry(i, j) = r_i + c_j, found by walking
    the nonzero entries; each connected block is anchored at a row of degree 0"""
    nrows = len(entries)
    ncols = len(entries[0]) if nrows else 0
    rows: List[Optional[int]] = [None] * nrows
    cols: List[Optional[int]] = [None] * ncols
    for start in range(nrows):
        if rows[start] is not None:
            continue
        rows[start] = 0
        queue = deque([("r", start)])
        while queue:
            kind, idx = queue.popleft()
            if kind == "r":
                for j in range(ncols):
                    p = entries[idx][j]
                    if not p.is_zero() and cols[j] is None:
                        cols[j] = p.degree() - rows[idx]
                        queue.append(("c", j))
            else:
                for i in range(nrows):
                    p = entries[i][idx]
                    if not p.is_zero() and rows[i] is None:
                        rows[i] = p.degree() - cols[idx]
                        queue.append(("r", i))
    col_degrees = [c if c is not None else 0 for c in cols]
    row_degrees = [r if r is not None else 0 for r in rows]
    return row_degrees, col_degrees


class HomogeneousMatrix:
    """t x s matrix of forms with deg entry(i, j) = row_degrees[i] + col_degrees[j]"""

    def __init__(
        self,
        ring: PolyRing,
        entries: Sequence[Sequence[Polynomial]],
        row_degrees: Optional[Sequence[int]] = None,
        col_degrees: Optional[Sequence[int]] = None,
    ):
        self.ring = ring
        self.entries = [list(row) for row in entries]
        if any(len(row) != len(self.entries[0]) for row in self.entries):
            raise ValueError("Matrix rows have different lengths")
        if row_degrees is None or col_degrees is None:
            inferred = infer_degrees(self.entries)
            row_degrees = row_degrees if row_degrees is not None else inferred[0]
            col_degrees = col_degrees if col_degrees is not None else inferred[1]
        self.row_degrees = list(row_degrees)
        self.col_degrees = list(col_degrees)
        for i, row in enumerate(self.entries):
            for j, p in enumerate(row):
                if p.is_zero():
                    continue
                if not p.is_homogeneous() or p.degree() != self.row_degrees[i] + self.col_degrees[j]:
                    raise NonStandardMatrixError(
                        f"Entry ({i}, {j}) = {p} does not have degree {self.row_degrees[i] + self.col_degrees[j]}"
                    )

    @classmethod
    def from_spec(cls, ring: PolyRing, spec) -> "HomogeneousMatrix":
        return cls(ring, spec.entries, spec.row_degrees, spec.col_degrees)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "HomogeneousMatrix":
        return HomogeneousMatrix(
            self.ring,
            [[self.entries[i][j] for j in cols] for i in rows],
            [self.row_degrees[i] for i in rows],
            [self.col_degrees[j] for j in cols],
        )

    def delete(self, rows: Sequence[int] = (), cols: Sequence[int] = ()) -> "HomogeneousMatrix":
        nrows, ncols = self.shape
        return self.submatrix([i for i in range(nrows) if i not in rows], [j for j in range(ncols) if j not in cols])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.shape[0],
            "cols": self.shape[1],
            "entries": [[str(p) for p in row] for row in self.entries],
            "row_degrees": self.row_degrees,
            "col_degrees": self.col_degrees,
        }

    def to_text(self) -> str:
        from utils.parser import format_matrix

        return format_matrix(self.entries, self.row_degrees, self.col_degrees)


class MinorCache:
    """Memoized cofactor expansion along the first remaining row"""

    def __init__(self, entries: Sequence[Sequence[Polynomial]], ring: PolyRing):
        self.entries = entries
        self.ring = ring
        self._memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Polynomial] = {}

    def det(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        key = (tuple(rows), tuple(cols))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not rows:
            value = self.ring.one()
        elif len(rows) == 1:
            value = self.entries[rows[0]][cols[0]]
        else:
            first, rest = rows[0], tuple(rows[1:])
            value = self.ring.zero()
            for pos, j in enumerate(cols):
                a = self.entries[first][j]
                if a.is_zero():
                    continue
                sub = self.det(rest, tuple(c for c in cols if c != j))
                term = a * sub
                value = value - term if pos % 2 else value + term
        self._memo[key] = value
        return value


def bareiss_determinant(entries: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    """Fraction-free elimination; every division is exact"""
    n = len(entries)
    if n == 0:
        return ring.one()
    M = [list(row) for row in entries]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return ring.zero()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_divide(prev)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


def default_method(ring: PolyRing) -> str:
    return "bareiss" if ring.field.characteristic == 0 else "laplace"


def determinant(M: HomogeneousMatrix, method: Optional[str] = None) -> Polynomial:
    nrows, ncols = M.shape
    if nrows != ncols:
        raise ValueError(f"Determinant of a non-square {nrows}x{ncols} matrix")
    method = method or default_method(M.ring)
    if method == "bareiss":
        return bareiss_determinant(M.entries, M.ring)
    if method == "laplace":
        return MinorCache(M.entries, M.ring).det(tuple(range(nrows)), tuple(range(ncols)))
    raise ValueError(f"Unknown determinant method: {method}")


def _check_indices(indices: Sequence[int], bound: int, what: str) -> None:
    if len(set(indices)) != len(indices):
        raise IndexClashError(f"Repeated {what} index in {list(indices)}")
    for i in indices:
        if not 0 <= i < bound:
            raise IndexClashError(f"{what.capitalize()} index {i} out of range 0..{bound - 1}")


def minor(M: HomogeneousMatrix, rows: Sequence[int] = (), cols: Sequence[int] = (), method: Optional[str] = None) -> Polynomial:
    """Determinant of M with the given rows and columns deleted"""
    nrows, ncols = M.shape
    _check_indices(rows, nrows, "row")
    _check_indices(cols, ncols, "column")
    if nrows - len(rows) != ncols - len(cols):
        raise ValueError(f"Deleting {len(rows)} rows and {len(cols)} columns from {nrows}x{ncols} leaves a non-square matrix")
    return determinant(M.delete(rows, cols), method)


def maximal_minors(M: HomogeneousMatrix, t: int, cache: Optional[MinorCache] = None) -> List[Polynomial]:
    """All t x t minors, rows and columns in lexicographic order"""
    nrows, ncols = M.shape
    if cache is None:
        cache = MinorCache(M.entries, M.ring)
    out = []
    for rows in combinations(range(nrows), t):
        for cols in combinations(range(ncols), t):
            p = cache.det(rows, cols)
            if not p.is_zero():
                out.append(p)
    return out


def determinantal_ideal(M: HomogeneousMatrix, t: int) -> Ideal:
    nrows, ncols = M.shape
    if not 0 <= t <= min(nrows, ncols):
        raise ValueError(f"t = {t} exceeds the matrix size {nrows}x{ncols}")
    if t == 0:
        return Ideal.unit(M.ring)
    return Ideal(M.ring, maximal_minors(M, t), name=f"I_{t}")


def _codim_or_top(I: Ideal) -> int:
    try:
        return codimension(I)
    except ImproperIdealError:
        return I.ring.nvars + 1


def determinantal_summary(M: HomogeneousMatrix, t: Optional[int] = None) -> Dict[str, Any]:
    """Codimension of I_t(M) against the expected (rows - t + 1)(cols - t + 1)"""
    nrows, ncols = M.shape
    t = t if t is not None else min(nrows, ncols)
    I = determinantal_ideal(M, t)
    expected = (nrows - t + 1) * (ncols - t + 1)
    codim = _codim_or_top(I)
    return {
        "t": t,
        "generators": len(I.generators),
        "codimension": codim,
        "expected_codimension": expected,
        "standard": codim == expected,
    }


def lemma42_check(
    M: HomogeneousMatrix, i: int, j: int, k: int, l: int, cache: Optional[MinorCache] = None
) -> Dict[str, Any]:
    """M_ij M_kl - M_il M_kj against M_{ij,kl} det M; the observed sign is recorded.
    Pass a shared MinorCache when checking many quadruples of one matrix."""
    n, ncols = M.shape
    if n != ncols:
        raise ValueError("The minor identity needs a square matrix")
    if i == k or j == l:
        raise IndexClashError(f"Indices clash: i={i}, k={k}, j={j}, l={l}")
    _check_indices((i, k), n, "row")
    _check_indices((j, l), n, "column")
    if cache is None:
        cache = MinorCache(M.entries, M.ring)
    all_idx = tuple(range(n))

    def m(del_rows: Sequence[int], del_cols: Sequence[int]) -> Polynomial:
        rows = tuple(r for r in all_idx if r not in del_rows)
        cols = tuple(c for c in all_idx if c not in del_cols)
        return cache.det(rows, cols)

    lhs = m([i], [j]) * m([k], [l]) - m([i], [l]) * m([k], [j])
    rhs = m([i, k], [j, l]) * m([], [])
    predicted = 1 if (i < k) == (j < l) else -1
    if lhs.is_zero() and rhs.is_zero():
        holds, sign = True, predicted
    elif lhs == rhs:
        holds, sign = True, 1
    elif lhs == -rhs:
        holds, sign = True, -1
    else:
        holds, sign = False, None
    return {"indices": [i, j, k, l], "holds": holds, "sign": sign, "predicted_sign": predicted}


def lemma42_sweep(M: HomogeneousMatrix) -> List[Dict[str, Any]]:
    """lemma42_check over every index quadruple, sharing one minor cache"""
    n = M.shape[0]
    cache = MinorCache(M.entries, M.ring)
    quads = [(i, j, k, l) for i, k in permutations(range(n), 2) for j, l in permutations(range(n), 2)]
    return [lemma42_check(M, *q, cache=cache) for q in quads]


def random_linear_matrix(ring: PolyRing, rows: int, cols: int, seed: int = 0) -> HomogeneousMatrix:
    """Seeded matrix of random linear forms"""
    rng = random.Random(seed)
    entries = [[ring.random_form(1, rng) for _ in range(cols)] for _ in range(rows)]
    return HomogeneousMatrix(ring, entries, [0] * rows, [1] * cols)


def _general_operations(A: HomogeneousMatrix, rng: random.Random) -> HomogeneousMatrix:
    """Seeded row operations, and column operations among all but the last
    column; both preserve I_t(A) and I_t(B)"""
    ring = A.ring
    t, s = A.shape
    rows = [list(r) for r in A.entries]
    for i in range(t):
        for k in range(t):
            if i == k or A.row_degrees[i] < A.row_degrees[k]:
                continue
            p = ring.random_form(A.row_degrees[i] - A.row_degrees[k], rng)
            if p.is_zero():
                continue
            rows[i] = [a + p * b for a, b in zip(rows[i], rows[k])]
    for j in range(s - 1):
        for k in range(s - 1):
            if j == k or A.col_degrees[j] < A.col_degrees[k]:
                continue
            p = ring.random_form(A.col_degrees[j] - A.col_degrees[k], rng)
            if p.is_zero():
                continue
            for i in range(t):
                rows[i][j] = rows[i][j] + p * rows[i][k]
    return HomogeneousMatrix(ring, rows, A.row_degrees, A.col_degrees)


class GaetaStep:
    """One ascending biliaison V ~ V' + mH on the carrier S = I_t(B)"""

    def __init__(self, **fields: Any):
        self.A: HomogeneousMatrix = fields["A"]
        self.B: HomogeneousMatrix = fields["B"]
        self.A_prime: HomogeneousMatrix = fields["A_prime"]
        self.S: Ideal = fields["S"]
        self.V: Ideal = fields["V"]
        self.V_prime: Ideal = fields["V_prime"]
        self.N: List[Polynomial] = fields["N"]
        self.N_prime: List[Polynomial] = fields["N_prime"]
        self.m: int = fields["m"]
        self.multiplier: Multiplier = fields["multiplier"]
        self.certificate: BiliaisonCertificate = fields["certificate"]
        self.attempts: int = fields["attempts"]
        self.membership: bool = fields["membership"]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shape": list(self.A.shape),
            "matrix": self.A.to_dict(),
            "carrier": [str(g) for g in self.S.minimal_generators()],
            "carrier_codimension": _codim_or_top(self.S) if not self.S.is_zero() else 0,
            "A_prime": self.A_prime.to_dict(),
            "m": self.m,
            "multiplier": self.multiplier.to_dict(),
            "membership": self.membership,
            "attempts": self.attempts,
            "certificate": self.certificate.to_dict(),
        }


def _try_step(A: HomogeneousMatrix) -> Tuple[Optional[GaetaStep], str]:
    ring = A.ring
    t, s = A.shape
    c = s - t
    B = A.delete(cols=[s - 1])
    A_prime = B.delete(rows=[t - 1])
    S = determinantal_ideal(B, t)
    s_codim = 0 if S.is_zero() else _codim_or_top(S)
    if s_codim != c:
        return None, f"carrier I_{t}(B) has codimension {s_codim}, expected {c}"
    drop = _codim_or_top(determinantal_ideal(B, t - 1))
    if drop < min(c + 2, ring.nvars):
        return None, f"I_{t - 1}(B) has codimension {drop} < {min(c + 2, ring.nvars)}"
    cache_a = MinorCache(A.entries, ring)
    cache_p = MinorCache(A_prime.entries, ring)
    N, N_prime = [], []
    for J in combinations(range(s - 1), t - 1):
        N.append(cache_a.det(tuple(range(t)), J + (s - 1,)))
        N_prime.append(cache_p.det(tuple(range(t - 1)), J))
    if S.is_zero():
        regular = all(not p.is_zero() for p in N_prime)
    else:
        regular = all(not p.is_zero() and is_nonzerodivisor(p, S) for p in N_prime)
    if not regular:
        return None, "some N' is a zero divisor modulo I_S"
    membership = all(
        S.contains(N[i] * N_prime[j] - N[j] * N_prime[i])
        for i in range(len(N))
        for j in range(i + 1, len(N))
    )
    if not membership:
        raise BiliaisonError("N_i N'_j - N_j N'_i is not in I_S; the minor identity failed")
    pivot = next(k for k in range(len(N)) if not N[k].is_zero())
    f = Multiplier(N[pivot], N_prime[pivot])
    m = A.row_degrees[t - 1] + A.col_degrees[s - 1]
    V = determinantal_ideal(A, t)
    V_prime = determinantal_ideal(A_prime, t - 1)
    X = AmbientScheme(S, hyperplane=ring.hyperplane(), validate=False, name="S")
    cert = verify_elementary_biliaison(Divisor(X, V_prime), Divisor(X, V), X, m, multiplier=f)
    if not cert.verified:
        return None, f"biliaison certificate failed: {cert.checks}"
    step = GaetaStep(
        A=A, B=B, A_prime=A_prime, S=S, V=V, V_prime=V_prime, N=N, N_prime=N_prime,
        m=m, multiplier=f, certificate=cert, attempts=1, membership=membership,
    )
    return step, "ok"


def gaeta_step(A: HomogeneousMatrix, seed: int = 0, retries: int = DEFAULT_MAX_RETRIES) -> GaetaStep:
    """Certify I_t(A) ~ I_{t-1}(A') + mH on S = I_t(B)"""
    t, s = A.shape
    if t < 2:
        raise NonStandardMatrixError("t = 1 is the base of the chain; there is no step to take")
    c = s - t
    if c < 0:
        raise NonStandardMatrixError(f"A {t}x{s} matrix has fewer columns than rows")
    codim = _codim_or_top(determinantal_ideal(A, t))
    if codim != c + 1:
        raise NonStandardMatrixError(f"I_{t}(A) has codimension {codim}, expected {c + 1}")
    rng = random.Random(seed)
    current = A
    reason = ""
    for attempt in range(retries + 1):
        step, reason = _try_step(current)
        if step is not None:
            step.attempts = attempt + 1
            logger.info(f"Gaeta step {t}x{s} -> {t - 1}x{s - 1} certified with m = {step.m}")
            return step
        logger.debug(f"Gaeta step attempt {attempt + 1} failed: {reason}")
        current = _general_operations(A, rng)
    raise NonStandardMatrixError(f"Gaeta step failed after {retries} randomizations: {reason}")


class GaetaChain:
    """Certified steps from I_t(A) down to the ideal of entries of a single row"""

    def __init__(self, matrix: HomogeneousMatrix, steps: List[GaetaStep], terminal: Optional[HomogeneousMatrix] = None):
        self.matrix = matrix
        self.steps = steps
        self.terminal = terminal
        self.terminal_ideal: Optional[Ideal] = None
        self.terminal_type: Optional[str] = None
        if terminal is not None:
            self.terminal_ideal = Ideal(terminal.ring, [p for p in terminal.entries[0] if not p.is_zero()])
            codim = _codim_or_top(self.terminal_ideal)
            gens = len(self.terminal_ideal.minimal_generators())
            if all(p.degree() == 1 for p in self.terminal_ideal.generators) and codim == gens:
                self.terminal_type = "linear"
            elif codim == gens:
                self.terminal_type = "complete intersection"
            else:
                self.terminal_type = "not a complete intersection"

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def verified(self) -> bool:
        return all(s.certificate.verified and s.membership for s in self.steps)

    def invariants(self) -> List[Dict[str, Any]]:
        out = []
        for step in self.steps:
            data = hilbert_data(step.V)
            out.append({"shape": list(step.A.shape), "degree": data.degree, "genus": data.genus, "m": step.m})
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "length": self.length,
            "verified": self.verified,
            "shifts": [s.m for s in self.steps],
            "steps": [s.to_dict() for s in self.steps],
            "terminal": [str(g) for g in self.terminal_ideal.generators] if self.terminal_ideal is not None else None,
            "terminal_type": self.terminal_type,
        }


def gaeta_chain(A: HomogeneousMatrix, seed: int = 0, retries: int = DEFAULT_MAX_RETRIES) -> GaetaChain:
    """Iterate gaeta_step until one row remains; failures carry the partial chain"""
    steps: List[GaetaStep] = []
    current = A
    while current.shape[0] > 1:
        try:
            step = gaeta_step(current, seed + len(steps), retries)
        except Exception as e:
            raise GaetaChainError(f"Step {len(steps) + 1} failed: {str(e)}", partial=GaetaChain(A, steps)) from e
        steps.append(step)
        current = step.A_prime
    chain = GaetaChain(A, steps, current)
    logger.info(f"Gaeta chain of length {chain.length} ends in a {chain.terminal_type} ideal")
    return chain
