import random

import pytest

from biliaison.catalog import quadric_line, reducible_conic, twisted_cubic_on_quadric
from biliaison.divisor import (
    AmbientScheme,
    Divisor,
    Multiplier,
    anticanonical_class,
    anticanonical_divisor,
    divisor_hilbert,
    divisor_negate,
    divisor_sub,
    divisor_sum,
    divisors_equal,
    effective_divisor_from_subscheme,
    is_almost_cartier,
    is_reflexive_divisor,
    linear_system_dimension,
    linearly_equivalent,
    multiplier_witness,
    sections_of_M,
    twist_by_H,
)
from biliaison.errors import BiliaisonError, DegenerateDivisorError, ImpureDivisorError
from biliaison.groebner import Ideal, intersect
from biliaison.resolve import ag_shift


def test_ambient_must_be_acm(ideal):
    with pytest.raises(BiliaisonError):
        AmbientScheme(ideal("x*y", "x*w", "y*z", "z*w"))


def test_hyperplane_must_be_regular(ideal, P3):
    with pytest.raises(DegenerateDivisorError):
        AmbientScheme(ideal("x*y"), hyperplane=P3.parse("x"))


def test_omega_of_three_axes_needs_two_generators(axes):
    X, _ = axes
    assert X.omega.rank == 2
    assert X.codim == 2


def test_point_plus_hyperplane_on_three_axes(axes, P3):
    X, P = axes
    PH = divisor_sum(P, X.hyperplane_divisor(1))
    assert PH.is_effective
    assert PH.ideal == Ideal(P3, ["x", "y", "z"]).power(2) + X.ideal


def test_point_on_three_axes_is_not_almost_cartier(axes):
    X, P = axes
    assert not is_almost_cartier(P)
    assert is_almost_cartier(X.hyperplane_divisor(1))
    assert is_reflexive_divisor(P)


def test_hyperplane_twists_compose(quadric, P3):
    L = quadric_line(P3, quadric)
    up = twist_by_H(twist_by_H(L, 2), -1)
    assert divisors_equal(up, twist_by_H(L, 1))
    assert divisors_equal(twist_by_H(L, 0), L)


def test_negation_and_difference(quadric, P3):
    L = quadric_line(P3, quadric)
    minus = divisor_negate(L)
    assert divisors_equal(divisor_sum(L, minus), quadric.zero_divisor())
    assert divisors_equal(divisor_sub(L, L), quadric.zero_divisor())


def test_effective_divisor_checks(quadric, ideal, P3):
    line = effective_divisor_from_subscheme(quadric, ideal("x", "z"))
    assert line.is_effective
    with pytest.raises(DegenerateDivisorError):
        effective_divisor_from_subscheme(quadric, ideal("x*w - y*z"))
    with pytest.raises(ImpureDivisorError) as info:
        effective_divisor_from_subscheme(quadric, intersect(ideal("x", "z"), Ideal.maximal(P3).power(2)))
    assert info.value.hull is not None


def test_lines_and_cubic_on_quadric(quadric, P3):
    L0 = quadric_line(P3, quadric, ruling=0)
    L1 = quadric_line(P3, quadric, ruling=1)
    C = twisted_cubic_on_quadric(P3, quadric)
    # C = 2 L0 + L1 in the Picard group and H = L0 + L1
    f = linearly_equivalent(L0, C, h=1)
    assert f is not None and f.shift == 1
    assert multiplier_witness(L0, C, f)
    assert linearly_equivalent(L0, L1, h=0) is None
    assert linearly_equivalent(L0, L0, h=0) is not None


def test_multiplier_algebra(P3):
    x, y, z, w = P3.gens
    f = Multiplier(x * w - y * z, x)
    assert f.shift == 1
    assert f.inverse().shift == -1
    assert f.compose(f.inverse()).shift == 0


def test_reducible_conic_linear_system(P2):
    X, D = reducible_conic(P2)
    assert linear_system_dimension(D) == 2
    assert linear_system_dimension(X.zero_divisor()) == 1


def test_sections_of_M_sequence_is_exact(P2):
    X, D = reducible_conic(P2)
    data = sections_of_M(D, X, (-2, 3))
    assert data["exact"]
    assert data["degrees"] == [-2, -1, 0, 1, 2, 3]


def test_quadric_anticanonical_divisor(quadric):
    E, d = anticanonical_divisor(quadric)
    assert d == -2
    for m in (1, 2):
        Y = twist_by_H(E, m)
        assert ag_shift(Y.ideal) == d + m


def test_divisor_serialization(quadric, P3):
    D = Divisor(quadric, Ideal(P3, ["x", "z"]), P3.parse("x + y + z + w"), name="L-H")
    data = D.to_dict()
    assert data["denominator"] == "x + y + z + w"
    assert not data["effective"]
    assert "den:" in D.to_text()


def test_anticanonical_class_untwists(quadric):
    E, d = anticanonical_divisor(quadric)
    M = anticanonical_class(quadric)
    assert M.name == "M"
    assert divisors_equal(twist_by_H(M, d), E)


def test_divisor_hilbert_data(quadric, P3):
    data = divisor_hilbert(quadric_line(P3, quadric))
    assert (data.degree, data.genus) == (1, 0)
    with pytest.raises(BiliaisonError):
        divisor_hilbert(twist_by_H(quadric_line(P3, quadric), -1))


def _ruling_line(P3, X, ruling, s):
    """Line of the given ruling through the parameter s on x*w - y*z"""
    gens = (f"x - {s}*y", f"z - {s}*w") if ruling == 0 else (f"x - {s}*z", f"y - {s}*w")
    return Divisor(X, Ideal(P3, list(gens)))


def _distinct_parameters(seed, count):
    return random.Random(seed).sample(range(1, 200), count)


@pytest.mark.parametrize("seed", range(2))
def test_sum_is_commutative_and_associative(quadric, P3, seed):
    s1, s2, t = _distinct_parameters(seed, 3)
    A = _ruling_line(P3, quadric, 0, s1)
    B = _ruling_line(P3, quadric, 0, s2)
    C = _ruling_line(P3, quadric, 1, t)
    assert divisors_equal(divisor_sum(A, B), divisor_sum(B, A))
    left = divisor_sum(divisor_sum(A, B), C)
    right = divisor_sum(A, divisor_sum(B, C))
    assert divisors_equal(left, right)
    assert left.ideal == intersect(intersect(A.ideal, B.ideal), C.ideal)
    assert divisors_equal(divisor_sum(A, quadric.zero_divisor()), A)


def test_negation_distributes_over_sum(quadric, P3):
    L = quadric_line(P3, quadric)
    H = quadric.hyperplane_divisor(1)
    whole = divisor_negate(divisor_sum(L, H))
    parts = divisor_sum(divisor_negate(L), divisor_negate(H))
    assert divisors_equal(whole, parts)


def test_difference_commutes_with_hyperplane(quadric, P3):
    L0 = quadric_line(P3, quadric, ruling=0)
    L1 = quadric_line(P3, quadric, ruling=1)
    H = quadric.hyperplane_divisor(1)
    assert divisors_equal(divisor_sub(divisor_sum(L0, H), L1), divisor_sum(divisor_sub(L0, L1), H))


def test_double_difference_returns_the_divisor(quadric, P3):
    E, _ = anticanonical_divisor(quadric)
    D1 = twist_by_H(E, 1)
    L = quadric_line(P3, quadric)
    assert divisors_equal(divisor_sub(D1, divisor_sub(D1, L)), L)


def test_difference_does_not_depend_on_the_regular_element(quadric, P3):
    L0 = quadric_line(P3, quadric, ruling=0)
    L1 = quadric_line(P3, quadric, ruling=1)
    u1, u2 = P3.parse("x - 3*z"), P3.parse("y - 3*w")
    results = [divisor_sub(L0, L1, u=u) for u in (u1, u2, u1 + u2 * 5)]
    assert all(divisors_equal(results[0], D) for D in results[1:])


def test_linear_equivalence_is_symmetric(quadric, P3):
    L0 = quadric_line(P3, quadric, ruling=0)
    C = twisted_cubic_on_quadric(P3, quadric)
    f = linearly_equivalent(L0, C, h=1)
    assert multiplier_witness(C, L0, f.inverse())
    back = linearly_equivalent(C, L0, h=-1)
    assert back is not None and back.shift == -1
    assert multiplier_witness(C, L0, back)


@pytest.mark.parametrize("seed", range(2))
def test_linear_equivalence_is_transitive(quadric, P3, seed):
    s1, s2, s3 = _distinct_parameters(seed, 3)
    A = _ruling_line(P3, quadric, 0, s1)
    B = _ruling_line(P3, quadric, 0, s2)
    A2 = _ruling_line(P3, quadric, 0, s3)
    f12 = linearly_equivalent(A, B, h=0)
    f23 = linearly_equivalent(B, A2, h=0)
    assert f12 is not None and f23 is not None
    assert multiplier_witness(A, A2, f12.compose(f23))
