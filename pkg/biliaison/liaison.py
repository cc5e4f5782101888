"""
Linkage by colon ideals, strict Gorenstein links on an ACM carrier, elementary
biliaison certificates and the intersection-divisor check for linked pairs.
"""
import logging
import random
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from biliaison.divisor import (
    DEFAULT_MAX_RETRIES,
    DEFAULT_SEARCH_BOUND,
    AmbientScheme,
    Divisor,
    Multiplier,
    anticanonical_divisor,
    divisor_sub,
    linearly_equivalent,
    multiplier_witness,
    normalize,
    twist_by_H,
)
from biliaison.errors import (
    BiliaisonError,
    LinkError,
    NotLinearlyEquivalentError,
    SearchExhaustedError,
    WindowError,
)
from biliaison.groebner import Ideal, codimension, ideal_quotient, vector_to_poly
from biliaison.modules import hom, hom_generator_map, ideal_module, quotient_ring
from biliaison.resolve import M_SYMBOL, ag_shift, equidimensional_hull, hilbert_data, rao_dimensions
from biliaison.ring import PolyRing, ring_from_dict
from utils.hilbert_series import laurent_add, laurent_shift

logger = logging.getLogger(__name__)

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


def _ideal_text(I: Ideal) -> List[str]:
    return [str(g) for g in I.minimal_generators()]


def _ideal_from(ring: PolyRing, gens: Sequence[str]) -> Ideal:
    return Ideal(ring, [ring.parse(g) for g in gens])


class LinkCertificate:
    """I_Y links I_V1 and I_V2: both colons recorded and re-checkable"""

    def __init__(
        self,
        I_Y: Ideal,
        I_V1: Ideal,
        I_V2: Ideal,
        kind: str,
        carrier: Optional[Ideal] = None,
        shift: Optional[int] = None,
        checks: Optional[Dict[str, bool]] = None,
    ):
        self.I_Y = I_Y
        self.I_V1 = I_V1
        self.I_V2 = I_V2
        self.kind = kind
        self.carrier = carrier
        self.shift = shift
        self.checks = checks or {}

    def verify(self) -> bool:
        contained = self.I_V1.contains_ideal(self.I_Y) and self.I_V2.contains_ideal(self.I_Y)
        forward = ideal_quotient(self.I_Y, self.I_V1) == self.I_V2
        backward = ideal_quotient(self.I_Y, self.I_V2) == self.I_V1
        self.checks = {"contained": contained, "forward": forward, "backward": backward}
        return contained and forward and backward

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": "link",
            "ring": self.I_Y.ring.to_dict(),
            "kind": self.kind,
            "Y": _ideal_text(self.I_Y),
            "V1": _ideal_text(self.I_V1),
            "V2": _ideal_text(self.I_V2),
            "carrier": _ideal_text(self.carrier) if self.carrier is not None else None,
            "shift": self.shift,
            "checks": dict(self.checks),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LinkCertificate":
        ring = ring_from_dict(data["ring"])
        carrier = _ideal_from(ring, data["carrier"]) if data.get("carrier") is not None else None
        return cls(
            _ideal_from(ring, data["Y"]),
            _ideal_from(ring, data["V1"]),
            _ideal_from(ring, data["V2"]),
            data.get("kind", "unmixed"),
            carrier=carrier,
            shift=data.get("shift"),
            checks=data.get("checks"),
        )


def link(I_Y: Ideal, I_V1: Ideal, kind: Optional[str] = None) -> Tuple[Ideal, LinkCertificate]:
    """I_V2 = (I_Y : I_V1), accepted only when (I_Y : I_V2) = I_V1"""
    if not I_V1.contains_ideal(I_Y):
        raise LinkError(f"{I_Y} is not contained in {I_V1}")
    c = codimension(I_Y)
    if codimension(I_V1) != c:
        raise LinkError(f"Codimensions differ: Y has {c}, V1 has {codimension(I_V1)}")
    if equidimensional_hull(I_Y) != I_Y:
        raise LinkError(f"{I_Y} is not unmixed")
    I_V2 = ideal_quotient(I_Y, I_V1)
    back = ideal_quotient(I_Y, I_V2)
    if back != I_V1:
        raise LinkError(f"Double colon returns {back}, not {I_V1}")
    if kind is None:
        if len(I_Y.minimal_generators()) == c:
            kind = "CI"
        elif ag_shift(I_Y) is not None:
            kind = "AG"
        else:
            kind = "unmixed"
    cert = LinkCertificate(I_Y, I_V1, I_V2, kind, checks={"contained": True, "forward": True, "backward": True})
    logger.info(f"{kind} link certified: {I_V1} ~ {I_V2}")
    return I_V2, cert


def verify_strict_AG(
    I_Y: Ideal,
    X: AmbientScheme,
    m: int,
    window: Sequence[int] = (-5, 10),
    seed: int = 0,
    retries: int = DEFAULT_MAX_RETRIES,
) -> Dict[str, Any]:
    """Is I_Y / I_X isomorphic to omega_X(-m)? Equal Hilbert series, ag shift m,
    and a random degree-m map omega_X -> I_Y / I_X that is onto"""
    lo, hi = window
    if lo > hi:
        raise WindowError(f"Empty degree window [{lo}, {hi}]")
    if not I_Y.contains_ideal(X.ideal):
        raise LinkError(f"{I_Y} does not contain the ideal of {X.name}")
    omega = X.omega
    sub_series = laurent_add(X.ideal.hilbert_numerator(), I_Y.hilbert_numerator(), sign=-1)
    omega_series = laurent_shift(omega.hilbert_numerator(), m)
    dims = {
        "degrees": list(range(lo, hi + 1)),
        "ideal_sheaf": [X.coordinate_ring().hilbert_function(d) - quotient_ring(I_Y).hilbert_function(d) for d in range(lo, hi + 1)],
        "omega_twist": [omega.hilbert_function(d + m) for d in range(lo, hi + 1)],
    }
    report: Dict[str, Any] = {"shift": m, "window": dims, "hilbert_series_match": sub_series == omega_series}
    if not report["hilbert_series_match"]:
        report["verdict"] = REFUTED
        return report
    shift = ag_shift(I_Y)
    report["ag_shift"] = shift
    if shift != m:
        report["verdict"] = REFUTED
        return report
    ring = X.ring
    target = ideal_module(I_Y, X.ideal)
    H = hom(omega, target)
    generators = [vector_to_poly(v, ring) for v in target.generators]
    rng = random.Random(seed)
    for attempt in range(retries):
        images = [ring.zero() for _ in range(H.hom_of[0].rank)]
        for k, deg in enumerate(H.degrees):
            if deg > m:
                continue
            coeff = ring.random_form(m - deg, rng)
            matrix = hom_generator_map(H, k)
            for j in range(len(images)):
                value = sum((matrix[i][j] * generators[i] for i in range(len(generators))), ring.zero())
                images[j] = images[j] + coeff * value
        image = Ideal(ring, [p for p in images if not p.is_zero()]) + X.ideal
        if image == I_Y:
            report["surjection"] = True
            report["attempts"] = attempt + 1
            report["verdict"] = VERIFIED
            return report
    logger.warning(f"No surjection omega(-{m}) -> I_Y/I_X found in {retries} attempts")
    report["surjection"] = False
    report["verdict"] = INCONCLUSIVE
    return report


def ag_divisor(X: AmbientScheme, m: int, seed: int = 0, bound: int = DEFAULT_SEARCH_BOUND) -> Divisor:
    """Effective Y ~ M + mH; checked to be AG with omega_Y = O_Y(m)"""
    eff, d = anticanonical_divisor(X, seed, bound)
    if m < d:
        raise SearchExhaustedError(f"M + {m}H is not effective for this embedding (smallest twist {d})")
    Y = twist_by_H(eff, m - d)
    if Y.ideal.is_unit():
        raise BiliaisonError(f"M + {m}H is the zero divisor")
    shift = ag_shift(Y.ideal)
    if shift != m:
        raise BiliaisonError(f"M + {m}H has AG shift {shift}, expected {m}")
    Y.name = f"M+{m}H"
    return Y


class StrictLinks:
    """Two strict Gorenstein links V1 -Y- W -Y'- V2 realizing an elementary biliaison"""

    def __init__(self, W: Divisor, Y: Divisor, Y_prime: Divisor, first: LinkCertificate, second: LinkCertificate, multiplier: Multiplier, m: int):
        self.W = W
        self.Y = Y
        self.Y_prime = Y_prime
        self.first = first
        self.second = second
        self.multiplier = multiplier
        self.m = m

    def to_dict(self) -> Dict[str, Any]:
        return {
            "W": _ideal_text(self.W.ideal),
            "Y": _ideal_text(self.Y.ideal),
            "Y_prime": _ideal_text(self.Y_prime.ideal),
            "m": self.m,
            "multiplier": self.multiplier.to_dict(),
            "links": [self.first.to_dict(), self.second.to_dict()],
        }


def biliaison_to_strict_links(
    V1: Divisor,
    V2: Divisor,
    X: AmbientScheme,
    h: int,
    seed: int = 0,
    bound: int = DEFAULT_SEARCH_BOUND,
) -> StrictLinks:
    """Factor V2 ~ V1 + hH into links by Y = M + mH and Y' = Y + div(f)"""
    f = linearly_equivalent(V1, V2, h, seed)
    if f is None:
        raise NotLinearlyEquivalentError(f"No multiplier for V2 ~ V1 + {h}H")
    # Y is the image of a random map omega -> I_V1 / I_X, so Y contains V1
    chosen = None
    floor: Optional[int] = None
    for _ in range(bound + 1):
        try:
            Y, m = anticanonical_divisor(X, seed, bound, containing=V1.ideal, min_twist=floor)
        except BiliaisonError:
            break
        floor = m + 1
        if Y.ideal.is_unit() or Y.ideal == V1.ideal:
            continue
        W = divisor_sub(Y, V1, seed)
        if W.is_effective and not W.ideal.is_unit():
            chosen = (m, Y, W)
            break
        logger.debug(f"(M + {m}H)(-V1) is not effective")
    if chosen is None:
        raise SearchExhaustedError(f"No AG divisor M + mH properly containing V1 found within bound {bound}")
    m, Y, W = chosen
    Y.name, W.name = f"M+{m}H", "W"
    Y_prime = normalize(Divisor(X, Y.ideal * f.a + X.ideal, f.b))
    if not Y_prime.is_effective:
        raise LinkError("Y' = Y + div(f) is not effective")
    Y_prime.name = "Y'"
    W_ideal, first = link(Y.ideal, V1.ideal, kind="strict-AG")
    first.carrier, first.shift = X.ideal, m
    if W_ideal != W.ideal:
        raise LinkError(f"Link by Y gives {W_ideal}, expected W = {W.ideal}")
    V2_ideal, second = link(Y_prime.ideal, W.ideal, kind="strict-AG")
    second.carrier, second.shift = X.ideal, m + h
    if V2_ideal != V2.ideal:
        raise LinkError(f"Link by Y' gives {V2_ideal}, expected {V2.ideal}")
    logger.info(f"Biliaison of height {h} split into strict links with m = {m}")
    return StrictLinks(W, Y, Y_prime, first, second, f, m)


def hilbert_polynomial(I: Ideal) -> sympy.Expr:
    if I.is_unit():
        return sympy.Integer(0)
    return hilbert_data(I).polynomial


def biliaison_polynomial_identity(P_X: sympy.Expr, P_V1: sympy.Expr, P_V2: sympy.Expr, h: int) -> bool:
    """P_V2(m) = P_X(m) - P_X(m - h) + P_V1(m - h)"""
    shifted = M_SYMBOL - h
    rhs = P_X - P_X.subs(M_SYMBOL, shifted) + P_V1.subs(M_SYMBOL, shifted)
    return sympy.expand(P_V2 - rhs) == 0


class BiliaisonCertificate:
    """V2 ~ V1 + hH on X, witnessed by a multiplier with an ideal equality"""

    def __init__(
        self,
        X: AmbientScheme,
        V1: Divisor,
        V2: Divisor,
        h: int,
        multiplier: Multiplier,
        checks: Dict[str, Optional[bool]],
        links: Optional[List[LinkCertificate]] = None,
    ):
        self.X = X
        self.V1 = V1
        self.V2 = V2
        self.h = h
        self.multiplier = multiplier
        self.checks = checks
        self.links = links or []

    @property
    def verified(self) -> bool:
        return all(v is not False for v in self.checks.values())

    def verify(self) -> bool:
        witness = multiplier_witness(self.V1, self.V2, self.multiplier) and self.multiplier.shift == self.h
        identity = biliaison_polynomial_identity(
            hilbert_polynomial(self.X.ideal),
            hilbert_polynomial(self.V1.ideal),
            hilbert_polynomial(self.V2.ideal),
            self.h,
        )
        links_ok = all(c.verify() for c in self.links)
        self.checks.update({"multiplier_witness": witness, "hilbert_polynomial_identity": identity})
        if self.links:
            self.checks["links"] = links_ok
        return witness and identity and links_ok

    def to_dict(self) -> Dict[str, Any]:
        ring = self.X.ring
        return {
            "type": "biliaison",
            "ring": ring.to_dict(),
            "ambient": _ideal_text(self.X.ideal),
            "hyperplane": str(self.X.hyperplane),
            "V1": {"ideal": _ideal_text(self.V1.ideal), "denominator": str(self.V1.denominator)},
            "V2": {"ideal": _ideal_text(self.V2.ideal), "denominator": str(self.V2.denominator)},
            "h": self.h,
            "multiplier": self.multiplier.to_dict(),
            "checks": dict(self.checks),
            "links": [c.to_dict() for c in self.links],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BiliaisonCertificate":
        ring = ring_from_dict(data["ring"])
        X = AmbientScheme(_ideal_from(ring, data["ambient"]), hyperplane=ring.parse(data["hyperplane"]), validate=False)
        V1 = Divisor(X, _ideal_from(ring, data["V1"]["ideal"]), ring.parse(data["V1"]["denominator"]))
        V2 = Divisor(X, _ideal_from(ring, data["V2"]["ideal"]), ring.parse(data["V2"]["denominator"]))
        f = Multiplier(ring.parse(data["multiplier"]["a"]), ring.parse(data["multiplier"]["b"]))
        links = [LinkCertificate.from_dict(c) for c in data.get("links", [])]
        return cls(X, V1, V2, int(data["h"]), f, dict(data.get("checks", {})), links)


def verify_elementary_biliaison(
    V1: Divisor,
    V2: Divisor,
    X: AmbientScheme,
    h: int,
    multiplier: Optional[Multiplier] = None,
    seed: int = 0,
    rao_window: Optional[Sequence[int]] = None,
) -> BiliaisonCertificate:
    """Certificate for V2 ~ V1 + hH with the Hilbert polynomial relation and an optional Rao shift check"""
    f = multiplier if multiplier is not None else linearly_equivalent(V1, V2, h, seed)
    if f is None:
        raise NotLinearlyEquivalentError(f"V2 is not linearly equivalent to V1 + {h}H")
    checks: Dict[str, Optional[bool]] = {
        "multiplier_witness": multiplier_witness(V1, V2, f) and f.shift == h,
        "hilbert_polynomial_identity": biliaison_polynomial_identity(
            hilbert_polynomial(X.ideal), hilbert_polynomial(V1.ideal), hilbert_polynomial(V2.ideal), h
        ),
    }
    if rao_window is not None and not V1.ideal.is_unit() and not V2.ideal.is_unit():
        lo, hi = rao_window
        dim_v = X.ring.nvars - codimension(V1.ideal) - 1
        shifted = True
        for i in range(1, dim_v + 1):
            a = rao_dimensions(V2.ideal, i, (lo, hi))
            b = rao_dimensions(V1.ideal, i, (lo - h, hi - h))
            shifted = shifted and a == b
        checks["rao_shift"] = shifted
    cert = BiliaisonCertificate(X, V1, V2, h, f, checks)
    logger.info(f"Elementary biliaison of height {h}: {'verified' if cert.verified else 'refuted'}")
    return cert


def intersection_divisor_check(
    I_X1: Ideal,
    I_X2: Ideal,
    I_S: Ideal,
    window: Sequence[int] = (-5, 10),
    seed: int = 0,
) -> Dict[str, Any]:
    """For X1, X2 linked by an AG scheme S, D = X1 ∩ X2 is AG and of the form M + lH on both"""
    c = codimension(I_X1)
    meet = I_X1 + I_X2
    if meet.is_unit() or codimension(meet) <= c:
        raise LinkError("X1 and X2 share a component")
    linked, cert = link(I_S, I_X1)
    if linked != I_X2:
        raise LinkError(f"S links X1 to {linked}, not to X2")
    ell = ag_shift(I_S)
    if ell is None:
        raise LinkError("The linking scheme is not arithmetically Gorenstein")
    I_D = equidimensional_hull(meet)
    d_shift = ag_shift(I_D)
    first = verify_strict_AG(I_D, AmbientScheme(I_X1, name="X1"), ell, window, seed)
    second = verify_strict_AG(I_D, AmbientScheme(I_X2, name="X2"), ell, window, seed)
    verdicts = {first["verdict"], second["verdict"]}
    if d_shift is None or REFUTED in verdicts:
        verdict = REFUTED
    elif verdicts == {VERIFIED}:
        verdict = VERIFIED
    else:
        verdict = INCONCLUSIVE
    return {
        "link": cert.to_dict(),
        "ell": ell,
        "D": _ideal_text(I_D),
        "D_is_AG": d_shift is not None,
        "D_ag_shift": d_shift,
        "strict_on_X1": first,
        "strict_on_X2": second,
        "verdict": verdict,
    }


def replay(data: Dict[str, Any]) -> Dict[str, Any]:
    """Re-verify a serialized link or biliaison certificate"""
    kind = data.get("type")
    if kind == "link":
        cert = LinkCertificate.from_dict(data)
    elif kind == "biliaison":
        cert = BiliaisonCertificate.from_dict(data)
    else:
        raise BiliaisonError(f"Unknown certificate type: {kind}")
    ok = cert.verify()
    return {"type": kind, "checks": dict(cert.checks), "verdict": VERIFIED if ok else REFUTED}
