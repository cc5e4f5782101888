"""
Hilbert series numerators of monomial ideals and Laurent bookkeeping

A numerator N(T) with HS(R/I) = N(T) / (1 - T)^n is computed by pivoting on a
variable: N(I) = N(I + (x)) + T * N(I : x).  Module numerators are Laurent
polynomials stored as {power: coefficient}.
"""
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

Laurent = Dict[int, int]


def minimalize(A: np.ndarray) -> np.ndarray:
    """Minimalize the generators given as rows of A."""
    Amin = []
    for m in A:
        if all(not np.all(m >= g) for g in Amin):
            Amin = [g for g in Amin if not np.all(g >= m)]
            Amin.append(m)
    if not Amin:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    return np.array(Amin, dtype=np.int64)


def pivot(A: np.ndarray, j: int) -> Tuple[np.ndarray, np.ndarray]:
    """Split on the variable j: left generates I + (x_j), right generates I : x_j."""
    p = np.zeros(A.shape[1], dtype=np.int64)
    p[j] = 1
    left = [m for m in A if m[j] == 0]
    left.append(p)
    right = np.where(A >= p, A - p, 0)
    return minimalize(np.array(left, dtype=np.int64)), minimalize(right)


def strategy(A: np.ndarray) -> int:
    """Return the column index with most nonzero entries."""
    return int(np.argmax(np.count_nonzero(A, axis=0)))


def _coprime(A: np.ndarray) -> bool:
    return bool(np.all(np.count_nonzero(A, axis=0) <= 1))


def _poly_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    size = max(len(a), len(b))
    out = np.zeros(size, dtype=np.int64)
    out[:len(a)] += a
    out[:len(b)] += b
    return out


@lru_cache(maxsize=4096)
def _numerator_cached(rows: Tuple[Tuple[int, ...], ...], nvars: int) -> Tuple[int, ...]:
    if not rows:
        return (1,)
    A = np.array(rows, dtype=np.int64)
    if np.any(A.sum(axis=1) == 0):
        return (0,)
    if _coprime(A):
        result = np.array([1], dtype=np.int64)
        for m in A:
            factor = np.zeros(int(m.sum()) + 1, dtype=np.int64)
            factor[0] = 1
            factor[-1] -= 1
            result = np.convolve(result, factor)
        return tuple(int(c) for c in result)
    j = strategy(A)
    left, right = pivot(A, j)
    n_left = np.array(_numerator_cached(_canonical(left), nvars), dtype=np.int64)
    n_right = np.array(_numerator_cached(_canonical(right), nvars), dtype=np.int64)
    shifted = np.concatenate([np.zeros(1, dtype=np.int64), n_right])
    return tuple(int(c) for c in _poly_add(n_left, shifted))


def _canonical(A: np.ndarray) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(tuple(int(x) for x in row) for row in A))


def monomial_numerator(generators: Iterable[Sequence[int]], nvars: int) -> np.ndarray:
    """Numerator of HS(R/I) over (1-T)^nvars for I generated by the given exponents"""
    gens = [tuple(int(x) for x in g) for g in generators]
    if not gens:
        return np.array([1], dtype=np.int64)
    A = minimalize(np.array(gens, dtype=np.int64).reshape(len(gens), nvars))
    coeffs = np.array(_numerator_cached(_canonical(A), nvars), dtype=np.int64)
    return np.trim_zeros(coeffs, "b") if np.any(coeffs) else np.zeros(1, dtype=np.int64)


def to_laurent(coeffs: Sequence[int], shift: int = 0) -> Laurent:
    return {i + shift: int(c) for i, c in enumerate(coeffs) if c != 0}


def laurent_add(a: Laurent, b: Laurent, sign: int = 1) -> Laurent:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def laurent_shift(a: Laurent, k: int) -> Laurent:
    return {p + k: v for p, v in a.items()}


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    out: Laurent = {}
    for p, u in a.items():
        for q, v in b.items():
            out[p + q] = out.get(p + q, 0) + u * v
    return {k: v for k, v in out.items() if v != 0}


def laurent_eval_one(a: Laurent) -> int:
    return sum(a.values())


def divide_by_one_minus_t(a: Laurent) -> Laurent:
    """Exact division by (1 - T); the caller guarantees a(1) == 0"""
    if not a:
        return {}
    lo, hi = min(a), max(a)
    # a = (1 - T) q  =>  q_k = sum_{j <= k} a_j
    q: Laurent = {}
    running = 0
    for k in range(lo, hi):
        running += a.get(k, 0)
        if running:
            q[k] = running
    return q


def reduce_numerator(a: Laurent, nvars: int) -> Tuple[Laurent, int]:
    """Cancel (1 - T) factors; returns the reduced numerator h and the Krull dimension"""
    if not a:
        return {}, -1
    h = dict(a)
    dim = nvars
    while dim > 0 and laurent_eval_one(h) == 0:
        h = divide_by_one_minus_t(h)
        dim -= 1
    return h, dim


def hilbert_function_value(num: Laurent, nvars: int, d: int) -> int:
    """Coefficient of T^d in num(T) / (1 - T)^nvars"""
    if nvars <= 0:
        return num.get(d, 0)
    total = 0
    for k, c in num.items():
        if d - k >= 0:
            total += c * comb(d - k + nvars - 1, nvars - 1)
    return total


def numerator_degree(num: Laurent) -> int:
    return max(num) if num else 0
