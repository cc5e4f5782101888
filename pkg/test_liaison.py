import json
import random

import pytest
import sympy

from biliaison.catalog import quadric_line, skew_lines, twisted_cubic_on_quadric
from biliaison.divisor import AmbientScheme, Divisor, divisor_sum, effective_divisor_from_subscheme, twist_by_H
from biliaison.errors import LinkError, NotLinearlyEquivalentError, SearchExhaustedError
from biliaison.groebner import Ideal
from biliaison.liaison import (
    REFUTED,
    VERIFIED,
    BiliaisonCertificate,
    LinkCertificate,
    ag_divisor,
    biliaison_polynomial_identity,
    biliaison_to_strict_links,
    intersection_divisor_check,
    link,
    replay,
    verify_elementary_biliaison,
    verify_strict_AG,
)
from biliaison.resolve import M_SYMBOL, ag_shift, hilbert_data


def test_link_two_planes(ideal):
    V2, cert = link(ideal("x*y"), ideal("x"))
    assert V2 == ideal("y")
    assert cert.kind == "CI"
    assert cert.verify()


def test_twisted_cubic_linked_to_a_line(twisted_cubic, ideal):
    Y = ideal("x*z - y^2", "x*w - y*z")
    V2, cert = link(Y, twisted_cubic)
    assert V2 == ideal("x", "y")
    assert cert.kind == "CI"
    back, _ = link(Y, V2)
    assert back == twisted_cubic


def test_link_preconditions(ideal, twisted_cubic):
    with pytest.raises(LinkError):
        link(ideal("x*y"), ideal("z"))
    with pytest.raises(LinkError):
        link(ideal("x*y"), twisted_cubic)


def test_link_certificate_replay(ideal):
    _, cert = link(ideal("x*y"), ideal("x"))
    data = json.loads(json.dumps(cert.to_dict()))
    assert replay(data)["verdict"] == VERIFIED
    data["V2"] = ["z"]
    assert replay(data)["verdict"] == REFUTED


def test_link_certificate_from_dict_keeps_ring(ideal):
    _, cert = link(ideal("x*y"), ideal("x"))
    again = LinkCertificate.from_dict(cert.to_dict())
    assert again.I_Y.ring == cert.I_Y.ring
    assert again.I_V2 == cert.I_V2


def test_strict_ag_on_a_plane(ideal):
    X = AmbientScheme(ideal("x"), name="plane")
    report = verify_strict_AG(ideal("x", "y"), X, -2)
    assert report["verdict"] == VERIFIED
    assert report["hilbert_series_match"]
    assert verify_strict_AG(ideal("x", "y"), X, -1)["verdict"] == REFUTED


def test_ag_divisor_on_quadric(quadric):
    Y = ag_divisor(quadric, 0)
    assert ag_shift(Y.ideal) == 0
    with pytest.raises(SearchExhaustedError):
        ag_divisor(quadric, -3)


def test_intersection_of_linked_planes(ideal):
    report = intersection_divisor_check(ideal("x"), ideal("y"), ideal("x*y"))
    assert report["ell"] == -2
    assert Ideal(ideal("x").ring, report["D"]) == ideal("x", "y")
    assert report["D_is_AG"] and report["D_ag_shift"] == -2
    assert report["verdict"] == VERIFIED


def test_hilbert_polynomial_identity():
    m = M_SYMBOL
    P_quadric = (m + 1) ** 2
    assert biliaison_polynomial_identity(P_quadric, m + 1, 3 * m + 1, 1)
    assert not biliaison_polynomial_identity(P_quadric, m + 1, 3 * m + 2, 1)
    assert biliaison_polynomial_identity(sympy.expand(P_quadric), m + 1, m + 1, 0)


def test_line_to_cubic_on_quadric(quadric, P3):
    L = quadric_line(P3, quadric)
    C = effective_divisor_from_subscheme(quadric, twisted_cubic_on_quadric(P3, quadric).ideal)
    cert = verify_elementary_biliaison(L, C, quadric, 1)
    assert cert.verified
    assert cert.checks["multiplier_witness"]
    assert cert.checks["hilbert_polynomial_identity"]
    data = json.loads(json.dumps(cert.to_dict()))
    assert replay(data)["verdict"] == VERIFIED
    assert BiliaisonCertificate.from_dict(data).h == 1


def test_line_to_cubic_strict_links(quadric, P3):
    L = quadric_line(P3, quadric)
    C = twisted_cubic_on_quadric(P3, quadric)
    links = biliaison_to_strict_links(L, C, quadric, 1)
    # Y is a plane section through L, so W is a line of the other ruling
    assert links.m == -1
    assert ag_shift(links.Y.ideal) == -1
    assert hilbert_data(links.W.ideal).degree == 1
    for cert in (links.first, links.second):
        assert replay(cert.to_dict())["verdict"] == VERIFIED
    assert links.to_dict()["links"][0]["kind"] == "strict-AG"


def test_skew_lines_rao_module_shifts(quadric, P3):
    V1 = effective_divisor_from_subscheme(quadric, skew_lines(P3))
    V2 = twist_by_H(V1, 1)
    cert = verify_elementary_biliaison(V1, V2, quadric, 1, rao_window=(-2, 3))
    assert cert.checks["rao_shift"]
    assert cert.verified


def test_wrong_height_has_no_multiplier(quadric, P3):
    L = quadric_line(P3, quadric)
    C = Divisor(quadric, twisted_cubic_on_quadric(P3, quadric).ideal)
    with pytest.raises(NotLinearlyEquivalentError):
        verify_elementary_biliaison(L, C, quadric, 2)


@pytest.mark.parametrize("seed", [
    *range(5),
    *(pytest.param(s, marks=pytest.mark.slow) for s in range(5, 105)),
])
def test_linking_twice_returns_the_line(P3, seed):
    rng = random.Random(seed)
    l1, l2 = P3.random_form(1, rng), P3.random_form(1, rng)
    a1, a2, b1, b2 = (P3.random_form(1, rng) for _ in range(4))
    V = Ideal(P3, [l1, l2])
    Y = Ideal(P3, [a1 * l1 + a2 * l2, b1 * l1 + b2 * l2])
    V2, cert = link(Y, V)
    assert cert.verify()
    assert hilbert_data(V2).degree == 3
    back, again = link(Y, V2)
    assert back == V
    assert again.verify()


def test_inverse_multiplier_goes_back_down(quadric, P3):
    L = quadric_line(P3, quadric)
    C = effective_divisor_from_subscheme(quadric, twisted_cubic_on_quadric(P3, quadric).ideal)
    up = verify_elementary_biliaison(L, C, quadric, 1)
    down = verify_elementary_biliaison(C, L, quadric, -1, multiplier=up.multiplier.inverse())
    assert down.verified
    assert down.checks["multiplier_witness"]


def test_cubic_and_line_meet_in_an_ag_scheme(twisted_cubic, ideal):
    report = intersection_divisor_check(twisted_cubic, ideal("x", "y"), ideal("x*z - y^2", "x*w - y*z"))
    assert report["ell"] == 0
    assert Ideal(twisted_cubic.ring, report["D"]) == ideal("x", "y", "z^2")
    assert report["D_is_AG"] and report["D_ag_shift"] == 0
    assert report["verdict"] == VERIFIED


def test_point_on_three_axes_reaches_point_plus_hyperplane(axes):
    X, P = axes
    PH = divisor_sum(P, X.hyperplane_divisor(1))
    assert verify_elementary_biliaison(P, PH, X, 1).verified
    links = biliaison_to_strict_links(P, PH, X, 1)
    for cert in (links.first, links.second):
        assert replay(cert.to_dict())["verdict"] == VERIFIED
