"""
Generalized divisors on an ACM scheme X in projective space

A divisor is a fractional ideal (J / I_X) * g^-1 with I_X in J and g a
nonzerodivisor modulo I_X. Duals and colons are taken against a principal
nonzerodivisor u, and S2-ification is the equidimensional hull in
codimension codim(X) + 1.
"""
import logging
import random
from typing import Any, Dict, List, Optional, Sequence, Tuple

from biliaison.errors import (
    BiliaisonError,
    DegenerateDivisorError,
    ImpureDivisorError,
    ImproperIdealError,
)
from biliaison.groebner import Ideal, codimension, ideal_quotient, is_nonzerodivisor, quotient_by_element, vector_to_poly
from biliaison.modules import GradedModule, annihilator, hom, hom_generator_map, ideal_module, quotient_ring
from biliaison.resolve import HilbertData, canonical_module, ext_module, hilbert_data, is_ACM
from biliaison.ring import Polynomial, random_combination

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BOUND = 6
DEFAULT_MAX_RETRIES = 10


class AmbientScheme:
    """Saturated ACM ideal I_X with cached codimension and canonical module"""

    def __init__(
        self,
        I_X: Ideal,
        hyperplane: Optional[Polynomial] = None,
        validate: bool = True,
        g0: bool = True,
        name: Optional[str] = None,
    ):
        self.ideal = I_X
        self.ring = I_X.ring
        self.name = name or "X"
        self.hyperplane = hyperplane if hyperplane is not None else self.ring.hyperplane()
        self.g0_asserted = g0
        self.codim = codimension(I_X)
        self._omega: Optional[GradedModule] = None
        self._acm: Optional[bool] = None
        if not is_nonzerodivisor(self.hyperplane, I_X):
            raise DegenerateDivisorError(f"Hyperplane {self.hyperplane} is a zero divisor modulo {I_X}")
        if validate:
            self._acm = is_ACM(I_X)
            if not self._acm:
                raise BiliaisonError(f"{self.name} = V({I_X}) is not ACM")
        logger.info(f"Ambient scheme {self.name} of codimension {self.codim}")

    @property
    def omega(self) -> GradedModule:
        if self._omega is None:
            self._omega = canonical_module(self.ideal).prune()
        return self._omega

    def coordinate_ring(self) -> GradedModule:
        return quotient_ring(self.ideal)

    def zero_divisor(self) -> "Divisor":
        return Divisor(self, Ideal.unit(self.ring))

    def hyperplane_divisor(self, m: int = 1) -> "Divisor":
        return twist_by_H(self.zero_divisor(), m)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ideal": str(self.ideal),
            "codimension": self.codim,
            "hyperplane": str(self.hyperplane),
            "g0_asserted": self.g0_asserted,
        }


class Divisor:
    """Fractional ideal (J / I_X) * g^-1 on an ambient scheme"""

    def __init__(self, ambient: AmbientScheme, J: Ideal, denominator: Optional[Polynomial] = None, name: Optional[str] = None):
        self.ambient = ambient
        self.ideal = J + ambient.ideal if not J.is_unit() else J
        self.denominator = denominator if denominator is not None else ambient.ring.one()
        self.name = name

    @property
    def is_effective(self) -> bool:
        return self.denominator.is_constant()

    def shift(self) -> int:
        return -self.denominator.degree()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ideal": str(Ideal(self.ideal.ring, self.ideal.minimal_generators())),
            "denominator": str(self.denominator),
            "effective": self.is_effective,
        }

    def to_text(self) -> str:
        from utils.parser import format_divisor

        return format_divisor(self.ambient.ideal.generators, self.ideal.minimal_generators(), self.denominator)

    def __repr__(self) -> str:
        return f"Divisor({self.ideal}, den={self.denominator})"


class Multiplier:
    """Homogeneous fraction a / b with I_D2 = (a / b) * I_D1"""

    def __init__(self, a: Polynomial, b: Polynomial):
        self.a = a
        self.b = b

    @property
    def shift(self) -> int:
        return self.a.degree() - self.b.degree()

    def inverse(self) -> "Multiplier":
        return Multiplier(self.b, self.a)

    def compose(self, other: "Multiplier") -> "Multiplier":
        return Multiplier(self.a * other.a, self.b * other.b)

    def to_dict(self) -> Dict[str, Any]:
        return {"a": str(self.a), "b": str(self.b), "shift": self.shift}

    def __repr__(self) -> str:
        return f"Multiplier({self.a} / {self.b})"


def divisor_hull(X: AmbientScheme, J: Ideal) -> Ideal:
    """S2-ification of J + I_X: the annihilator of Ext^{c+1}(R/J, R)"""
    full = J + X.ideal
    if full.is_unit():
        return full
    E = ext_module(quotient_ring(full), X.codim + 1)
    if E.is_zero():
        return Ideal.unit(X.ring)
    hull = annihilator(E)
    return full if hull == full else hull


def is_nondegenerate(X: AmbientScheme, J: Ideal) -> bool:
    full = J + X.ideal
    return full.is_unit() or codimension(full) > X.codim


def find_nonzerodivisor(
    J: Ideal,
    I_X: Ideal,
    seed: int = 0,
    bound: int = DEFAULT_SEARCH_BOUND,
    retries: int = DEFAULT_MAX_RETRIES,
) -> Polynomial:
    """A homogeneous element of J regular modulo I_X; generators are tried first"""
    if J.is_unit():
        return J.ring.one()
    gens = sorted(
        (g for g in J.minimal_generators() if not I_X.contains(g)),
        key=lambda g: (g.degree(), str(g)),
    )
    for g in gens:
        if is_nonzerodivisor(g, I_X):
            return g
    if not gens:
        raise DegenerateDivisorError(f"{J} is contained in {I_X}")
    rng = random.Random(seed)
    start = gens[0].degree()
    for d in range(start, start + bound + 1):
        for _ in range(retries):
            cand = random_combination(J.generators, d, rng)
            if cand is not None and not cand.is_zero() and is_nonzerodivisor(cand, I_X):
                logger.debug(f"Random nonzerodivisor found in degree {d}")
                return cand
    raise DegenerateDivisorError(f"No nonzerodivisor modulo the ambient ideal found in {J}")


def normalize(D: Divisor) -> Divisor:
    """Cancel the denominator (or its hyperplane factors) into the ideal when possible"""
    X = D.ambient
    J, g = D.ideal, D.denominator
    if g.is_constant():
        return D
    if (Ideal(X.ring, [g]) + X.ideal).contains_ideal(J):
        return Divisor(X, quotient_by_element(J, g), X.ring.one(), D.name)
    ell = X.hyperplane
    while not g.is_constant():
        try:
            rest = g.exact_divide(ell)
        except ValueError:
            break
        if not (Ideal(X.ring, [ell]) + X.ideal).contains_ideal(J):
            break
        J = quotient_by_element(J, ell)
        g = rest
    return Divisor(X, J, g, D.name)


def effective_divisor_from_subscheme(X: AmbientScheme, J: Ideal, name: Optional[str] = None) -> Divisor:
    """Accept J when R/J is pure of codimension codim(X) + 1"""
    full = J + X.ideal
    if full.is_unit():
        return Divisor(X, full, name=name)
    if not is_nondegenerate(X, full):
        raise DegenerateDivisorError(f"{J} contains a component of {X.name}")
    hull = divisor_hull(X, full)
    if hull != full:
        raise ImpureDivisorError(f"{J} is not pure of codimension {X.codim + 1}; its hull is {hull}", hull=hull)
    return Divisor(X, full, name=name)


def divisors_equal(D1: Divisor, D2: Divisor) -> bool:
    """J1 / g1 == J2 / g2 modulo I_X"""
    X = D1.ambient
    left = D1.ideal * D2.denominator + X.ideal
    right = D2.ideal * D1.denominator + X.ideal
    return left == right


def divisor_sum(D1: Divisor, D2: Divisor) -> Divisor:
    """(I1 * I2)~"""
    X = D1.ambient
    J = divisor_hull(X, D1.ideal * D2.ideal)
    return normalize(Divisor(X, J, D1.denominator * D2.denominator))


def divisor_negate(D: Divisor, seed: int = 0) -> Divisor:
    """(I^-1)~ = g * ((u) + I_X : J) / u"""
    X = D.ambient
    u = find_nonzerodivisor(D.ideal, X.ideal, seed)
    Q = ideal_quotient(Ideal(X.ring, [u]) + X.ideal, D.ideal)
    J = divisor_hull(X, Q * D.denominator)
    return normalize(Divisor(X, J, u))


def divisor_sub(D1: Divisor, D2: Divisor, seed: int = 0, u: Optional[Polynomial] = None) -> Divisor:
    """D1(-D2), the divisor of Hom(I2, I1)~ = g2 * ((u J1 + I_X) : J2) / (g1 u)"""
    X = D1.ambient
    if u is None:
        u = find_nonzerodivisor(D2.ideal, X.ideal, seed)
    Q = ideal_quotient(D1.ideal * u + X.ideal, D2.ideal)
    J = divisor_hull(X, Q * D2.denominator)
    return normalize(Divisor(X, J, D1.denominator * u))


def twist_by_H(D: Divisor, m: int) -> Divisor:
    """D + mH with H cut by the ambient hyperplane form"""
    X = D.ambient
    if m == 0:
        return D
    ell = X.hyperplane
    if m > 0:
        return Divisor(X, D.ideal * (ell ** m) + X.ideal, D.denominator, D.name)
    return normalize(Divisor(X, D.ideal, D.denominator * (ell ** (-m)), D.name))


def multiplier_witness(D1: Divisor, D2: Divisor, f: Multiplier) -> bool:
    """b * g1 * J2 + I_X == a * g2 * J1 + I_X with a, b regular modulo I_X"""
    X = D1.ambient
    if not (is_nonzerodivisor(f.a, X.ideal) and is_nonzerodivisor(f.b, X.ideal)):
        return False
    left = D2.ideal * (f.b * D1.denominator) + X.ideal
    right = D1.ideal * (f.a * D2.denominator) + X.ideal
    return left == right


def linearly_equivalent(
    D1: Divisor,
    D2: Divisor,
    h: int = 0,
    seed: int = 0,
    retries: int = DEFAULT_MAX_RETRIES,
) -> Optional[Multiplier]:
    """Search Hom(I1, I2) in the degree giving D2 ~ D1 + hH for an isomorphism"""
    X = D1.ambient
    J1, J2 = D1.ideal, D2.ideal
    if not J1.is_unit() and not J2.is_unit() and codimension(J1) != codimension(J2):
        logger.info("Codimensions differ; not linearly equivalent")
        return None
    u = find_nonzerodivisor(J1, X.ideal, seed)
    target = J2 * u + X.ideal
    Q = ideal_quotient(target, J1)
    e = h + u.degree() + D2.denominator.degree() - D1.denominator.degree()
    if e < 0:
        return None
    rng = random.Random(seed)
    candidates: List[Polynomial] = []
    if u.degree() == e and Q.contains(u):
        candidates.append(u)
    for _ in range(retries):
        cand = random_combination(Q.generators, e, rng)
        if cand is not None and not cand.is_zero():
            candidates.append(cand)
    for a0 in candidates:
        if not is_nonzerodivisor(a0, X.ideal):
            continue
        if J1 * a0 + X.ideal == target:
            if a0 == u:
                f = Multiplier(D1.denominator, D2.denominator)
            else:
                f = Multiplier(a0 * D1.denominator, u * D2.denominator)
            if f.a == f.b:
                one = X.ring.one()
                f = Multiplier(one, one)
            logger.info(f"Linear equivalence witnessed by {f}")
            return f
    logger.info(f"No multiplier of shift {h} found after {len(candidates)} candidates")
    return None


def anticanonical_divisor(
    X: AmbientScheme,
    seed: int = 0,
    bound: int = DEFAULT_SEARCH_BOUND,
    retries: int = DEFAULT_MAX_RETRIES,
    containing: Optional[Ideal] = None,
    min_twist: Optional[int] = None,
) -> Tuple[Divisor, int]:
    """An effective divisor E ~ M + dH from a random map omega -> (R/I_X)(d), smallest feasible d.
    With containing, the map lands in containing / I_X, so E contains that subscheme."""
    ring = X.ring
    if containing is None:
        target = X.coordinate_ring()
        target_gens = [ring.one()]
    else:
        target = ideal_module(containing, X.ideal)
    H = hom(X.omega, target)
    if containing is not None:
        target_gens = [vector_to_poly(v, ring) for v in H.hom_of[1].generators]
    if H.rank == 0:
        raise BiliaisonError("Hom(omega, R/I_X) vanishes")
    rng = random.Random(seed)
    start = min(H.degrees)
    if min_twist is not None:
        start = max(start, min_twist)
    for d in range(start, start + bound + 1):
        for _ in range(retries):
            images = [ring.zero() for _ in range(H.hom_of[0].rank)]
            for k, deg in enumerate(H.degrees):
                coeff = ring.random_form(d - deg, rng) if d >= deg else ring.zero()
                if coeff.is_zero():
                    continue
                matrix = hom_generator_map(H, k)
                for j in range(len(images)):
                    value = sum((matrix[i][j] * target_gens[i] for i in range(len(target_gens))), ring.zero())
                    images[j] = images[j] + coeff * value
            images = [p for p in images if not p.is_zero()]
            if not images:
                continue
            J = Ideal(ring, images) + X.ideal
            if not is_nondegenerate(X, J):
                continue
            if not J.is_unit() and divisor_hull(X, J) != J:
                continue
            logger.info(f"Anticanonical class realized in twist {d}")
            return Divisor(X, J, name="M+dH"), d
    raise BiliaisonError(f"No embedding of omega found up to twist {start + bound}; raise the search bound")


def anticanonical_class(X: AmbientScheme, seed: int = 0, bound: int = DEFAULT_SEARCH_BOUND) -> Divisor:
    """The anticanonical divisor M itself, as E - dH"""
    E, d = anticanonical_divisor(X, seed, bound)
    M = twist_by_H(E, -d)
    M.name = "M"
    return M


def sections_of_M(D: Divisor, X: AmbientScheme, window: Sequence[int]) -> Dict[str, Any]:
    """Graded dimensions of Hom(I_D, omega_X) checked against omega_X and omega_D"""
    lo, hi = window
    N = X.ring.nvars
    degrees = list(range(lo, hi + 1))
    omega = X.omega
    if D.ideal.is_unit():
        M_D = omega
        omega_D_dims = [0] * len(degrees)
    else:
        M_D = hom(ideal_module(D.ideal, X.ideal), omega)
        omega_D = ext_module(quotient_ring(D.ideal), X.codim + 1).twist(-N)
        omega_D_dims = [omega_D.hilbert_function(d) for d in degrees]
    sections = [M_D.hilbert_function(d) for d in degrees]
    omega_dims = [omega.hilbert_function(d) for d in degrees]
    exact = all(s == a + b for s, a, b in zip(sections, omega_dims, omega_D_dims))
    return {
        "degrees": degrees,
        "sections": sections,
        "omega_X": omega_dims,
        "omega_D": omega_D_dims,
        "exact": exact,
    }


def linear_system_dimension(D: Divisor) -> int:
    """dim Hom(J/I_X, R/I_X)_0"""
    X = D.ambient
    if D.ideal.is_unit():
        return X.coordinate_ring().hilbert_function(0)
    L = hom(ideal_module(D.ideal, X.ideal), X.coordinate_ring())
    return L.hilbert_function(0)


def is_almost_cartier(D: Divisor, seed: int = 0) -> bool:
    total = divisor_sum(D, divisor_negate(D, seed))
    return divisors_equal(total, D.ambient.zero_divisor())


def is_reflexive_divisor(D: Divisor, seed: int = 0) -> bool:
    return divisors_equal(divisor_negate(divisor_negate(D, seed), seed), D)


def divisor_hilbert(D: Divisor) -> HilbertData:
    if not D.is_effective:
        raise BiliaisonError("Hilbert data is defined for effective divisors")
    if D.ideal.is_unit():
        raise ImproperIdealError("The zero divisor has an empty subscheme")
    return hilbert_data(D.ideal)
