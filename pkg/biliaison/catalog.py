"""
Bundled worked examples: rings, ambient schemes, divisors and matrices,
plus the end-to-end pipelines behind the `example` command.
"""
import logging
from typing import Any, Callable, Dict, Tuple

from biliaison.determinantal import HomogeneousMatrix, determinantal_ideal, gaeta_chain, random_linear_matrix
from biliaison.divisor import (
    AmbientScheme,
    Divisor,
    anticanonical_divisor,
    divisor_sum,
    effective_divisor_from_subscheme,
    linear_system_dimension,
    twist_by_H,
)
from biliaison.groebner import Ideal, codimension
from biliaison.liaison import (
    VERIFIED,
    REFUTED,
    biliaison_to_strict_links,
    replay,
    verify_elementary_biliaison,
)
from biliaison.resolve import ag_shift, hilbert_data
from biliaison.ring import PolyRing, make_field

logger = logging.getLogger(__name__)


def projective_space(n: int, field_kind: str = "prime", prime: int = 32003) -> PolyRing:
    """Coordinate ring of P^n: x, y, z, w for n <= 3, otherwise x0..xn"""
    field = make_field(field_kind, prime)
    if n <= 3:
        return PolyRing("xyzw"[: n + 1], field)
    return PolyRing([f"x{i}" for i in range(n + 1)], field)


def _ideal(ring: PolyRing, *gens: str) -> Ideal:
    return Ideal(ring, [ring.parse(g) for g in gens])


def three_axes(ring: PolyRing) -> Tuple[AmbientScheme, Divisor]:
    """Three non-coplanar lines through P = (0:0:0:1) and the point P on them;
    the hyperplane section x + y + z passes through P"""
    X = AmbientScheme(_ideal(ring, "x*y", "x*z", "y*z"), hyperplane=ring.parse("x + y + z"), name="three axes")
    P = Divisor(X, _ideal(ring, "x", "y", "z"), name="P")
    return X, P


def smooth_quadric(ring: PolyRing) -> AmbientScheme:
    return AmbientScheme(_ideal(ring, "x*w - y*z"), name="quadric")


def quadric_line(ring: PolyRing, X: AmbientScheme, ruling: int = 0) -> Divisor:
    """A line of either ruling on x*w - y*z"""
    gens = ("x", "z") if ruling == 0 else ("x", "y")
    return Divisor(X, _ideal(ring, *gens), name=f"L{ruling}")


def twisted_cubic_on_quadric(ring: PolyRing, X: AmbientScheme) -> Divisor:
    return Divisor(X, _ideal(ring, "x*z - y^2", "y*w - z^2", "x*w - y*z"), name="C")


def skew_lines(ring: PolyRing) -> Ideal:
    return _ideal(ring, "x*y", "x*w", "y*z", "z*w")


def twisted_cubic_matrix(ring: PolyRing) -> HomogeneousMatrix:
    x, y, z, w = ring.gens
    return HomogeneousMatrix(ring, [[x, y, z], [y, z, w]])


def reducible_conic(ring: PolyRing) -> Tuple[AmbientScheme, Divisor]:
    """Two lines xy = 0 in P^2 with the singular point as divisor"""
    X = AmbientScheme(_ideal(ring, "x*y"), name="xy")
    D = Divisor(X, _ideal(ring, "x", "y"), name="point")
    return X, D


def generic_4x6_matrix(seed: int = 0, field_kind: str = "prime", prime: int = 32003) -> HomogeneousMatrix:
    """Seeded 4 x 6 matrix of linear forms in five variables"""
    return random_linear_matrix(projective_space(4, field_kind, prime), 4, 6, seed)


def run_reducible_conic(seed: int = 0) -> Tuple[Dict[str, Any], str]:
    ring = projective_space(2)
    X, D = reducible_conic(ring)
    dim = linear_system_dimension(D)
    return {"ambient": str(X.ideal), "divisor": str(D.ideal), "linear_system_dimension": dim}, VERIFIED if dim == 2 else REFUTED


def run_three_axes(seed: int = 0) -> Tuple[Dict[str, Any], str]:
    ring = projective_space(3)
    X, P = three_axes(ring)
    H = X.hyperplane_divisor(1)
    PH = divisor_sum(P, H)
    expected = _ideal(ring, "x", "y", "z").power(2) + X.ideal
    matches = PH.ideal == expected
    # P and P + H differ by one biliaison, so they are joined by two strict links
    links = biliaison_to_strict_links(P, PH, X, 1, seed)
    replays = [replay(links.first.to_dict()), replay(links.second.to_dict())]
    ok = matches and all(r["verdict"] == VERIFIED for r in replays)
    outputs = {
        "P_plus_H": [str(g) for g in PH.ideal.minimal_generators()],
        "equals_square_of_P": matches,
        "omega_generators": X.omega.rank,
        "strict_links": links.to_dict(),
        "replays": replays,
    }
    return outputs, VERIFIED if ok else REFUTED


def run_degree_20_curve(seed: int = 0) -> Tuple[Dict[str, Any], str]:
    A = generic_4x6_matrix(seed)
    V = determinantal_ideal(A, 4)
    data = hilbert_data(V)
    outputs = {
        "matrix": A.to_dict(),
        "codimension": codimension(V),
        "degree": data.degree,
        "genus": data.genus,
    }
    ok = outputs["codimension"] == 3 and data.degree == 20 and data.genus == 26
    return outputs, VERIFIED if ok else REFUTED


def run_twisted_cubic(seed: int = 0) -> Tuple[Dict[str, Any], str]:
    ring = projective_space(3)
    chain = gaeta_chain(twisted_cubic_matrix(ring), seed)
    return chain.to_dict(), VERIFIED if chain.verified and chain.length == 1 else REFUTED


def run_quadric(seed: int = 0) -> Tuple[Dict[str, Any], str]:
    """Anticanonical plus hyperplane twists are AG with the predicted shift; line to cubic in two strict links"""
    ring = projective_space(3)
    X = smooth_quadric(ring)
    E, d = anticanonical_divisor(X, seed)
    shifts = {}
    ok = True
    for m in (1, 2):
        Y = twist_by_H(E, m)
        ell = ag_shift(Y.ideal)
        shifts[str(m)] = ell
        # E ~ M + dH, so Y ~ M + (d + m)H
        ok = ok and ell == d + m
    L = quadric_line(ring, X)
    C = effective_divisor_from_subscheme(X, twisted_cubic_on_quadric(ring, X).ideal, name="C")
    cert = verify_elementary_biliaison(L, C, X, 1, seed=seed)
    links = biliaison_to_strict_links(L, C, X, 1, seed)
    replays = [replay(links.first.to_dict()), replay(links.second.to_dict())]
    ok = ok and cert.verified and all(r["verdict"] == VERIFIED for r in replays)
    outputs = {
        "anticanonical_twist": d,
        "ag_shifts": shifts,
        "biliaison": cert.to_dict(),
        "strict_links": links.to_dict(),
        "replays": replays,
    }
    return outputs, VERIFIED if ok else REFUTED


EXAMPLES: Dict[str, Callable[[int], Tuple[Dict[str, Any], str]]] = {
    "2.9": run_reducible_conic,
    "3.9": run_three_axes,
    "4.3": run_degree_20_curve,
    "twisted-cubic": run_twisted_cubic,
    "quadric": run_quadric,
}


def run_example(name: str, seed: int = 0) -> Tuple[Dict[str, Any], str]:
    if name not in EXAMPLES:
        raise KeyError(f"Unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    logger.info(f"Running example {name}")
    return EXAMPLES[name](seed)
