import random

import pytest
import sympy

from biliaison.errors import ImproperIdealError, RingMismatchError
from biliaison.groebner import (
    Ideal,
    codimension,
    eliminate,
    groebner_basis,
    ideal_quotient,
    ideal_quotient_by_syzygies,
    intersect,
    is_nonzerodivisor,
    krull_dimension,
    quotient_by_element,
    saturation,
)
from biliaison.ring import Polynomial


def _random_ideal(ring, rng, count=3, degree=2):
    return Ideal(ring, [ring.random_form(degree, rng) for _ in range(count)])


def test_twisted_cubic_basis(twisted_cubic):
    gb = twisted_cubic.gb
    assert len(gb) == 3
    assert all(p.leading_coefficient == 1 for p in gb)
    assert twisted_cubic.contains(twisted_cubic.ring.parse("x*z^2 - y^2*z"))


def test_basis_matches_sympy(P3_QQ):
    gens = ["x^2 - y*z", "x*y - z^2 + w^2", "y^3 - x*z*w"]
    I = Ideal(P3_QQ, gens)
    x, y, z, w = sympy.symbols("x y z w")
    exprs = [sympy.sympify(g.replace("^", "**")) for g in gens]
    G = sympy.groebner(exprs, x, y, z, w, order="grevlex")
    expected = {str(P3_QQ.parse(str(g).replace("**", "^")).monic()) for g in G.exprs}
    assert {str(p.monic()) for p in I.gb} == expected


@pytest.mark.parametrize("seed", [
    *range(3),
    *(pytest.param(s, marks=pytest.mark.slow) for s in range(3, 203)),
])
def test_basis_is_idempotent(P3, seed):
    rng = random.Random(11 + seed)
    I = _random_ideal(P3, rng, count=rng.randint(1, 4), degree=rng.randint(1, 2))
    again = Ideal(P3, I.gb)
    assert again.gb == I.gb


@pytest.mark.parametrize("seed", range(3))
def test_prime_basis_is_the_rational_basis_reduced(P3, P3_QQ, seed):
    rng = random.Random(seed)
    gens = []
    for _ in range(3):
        terms = {e: rng.randint(-3, 3) for e in P3_QQ.exponents_of_degree(2)}
        gens.append(Polynomial(P3_QQ, terms))
    over_q = Ideal(P3_QQ, gens).gb
    over_p = Ideal(P3, [Polynomial(P3, g.term_dict()) for g in gens]).gb
    assert [Polynomial(P3, p.term_dict()) for p in over_q] == over_p


def test_normal_form_and_membership(P3):
    I = Ideal(P3, ["x*y", "z^2"])
    f = P3.parse("x*y*w + z^3 + x^2")
    assert I.normal_form(f) == P3.parse("x^2")
    assert P3.parse("x*y*z - z^2*w") in I


def test_zero_generators_are_dropped(P3):
    I = Ideal(P3, ["x", "0", "x - x"])
    assert len(I.generators) == 1


def test_non_homogeneous_generator_is_rejected(P3):
    with pytest.raises(ValueError):
        Ideal(P3, ["x^2 + y"])


def test_unit_and_codimension(P3):
    assert Ideal.unit(P3).is_unit()
    assert krull_dimension(Ideal.unit(P3)) == -1
    with pytest.raises(ImproperIdealError):
        codimension(Ideal.unit(P3))
    assert codimension(Ideal(P3, [])) == 0
    assert codimension(Ideal.maximal(P3)) == 4


def test_codimension_of_curves(twisted_cubic, ideal):
    assert codimension(twisted_cubic) == 2
    assert codimension(ideal("x*y", "x*w", "y*z", "z*w")) == 2
    assert codimension(ideal("x*y", "x*z", "y*z")) == 2


def test_quotient_by_element(ideal, P3):
    I = ideal("x*y", "x*z")
    assert quotient_by_element(I, P3.parse("x")) == ideal("y", "z")
    assert quotient_by_element(I, P3.parse("x*y")).is_unit()


@pytest.mark.parametrize("seed", [
    *range(10),
    *(pytest.param(s, marks=pytest.mark.slow) for s in range(10, 110)),
])
def test_quotient_algorithms_agree(P3, seed):
    rng = random.Random(seed)
    I = _random_ideal(P3, rng, count=2) * P3.parse("x")
    f = P3.random_form(1, rng) * P3.parse("x")
    assert ideal_quotient_by_syzygies(I, f) == quotient_by_element(I, f)


@pytest.mark.parametrize("seed", [
    *range(5),
    *(pytest.param(s, marks=pytest.mark.slow) for s in range(5, 105)),
])
def test_colon_by_a_nonzerodivisor_is_the_ideal(P3, seed):
    rng = random.Random(seed)
    I = _random_ideal(P3, rng)
    f = P3.random_form(1, rng)
    assert is_nonzerodivisor(f, I)
    assert quotient_by_element(I, f) == I
    assert ideal_quotient_by_syzygies(I, f) == I


def test_cached_bases_are_reduced(P3):
    rng = random.Random(23)
    x = P3.parse("x")
    I = _random_ideal(P3, rng, count=2) * x
    results = [
        quotient_by_element(I, P3.random_form(1, rng) * x),
        intersect(I, _random_ideal(P3, rng, count=2, degree=1)),
        eliminate(I + P3.random_form(1, rng), ["w"]),
    ]
    for Q in results:
        assert Q.gb == Ideal(P3, Q.generators).gb
        assert all(p.leading_coefficient == 1 for p in Q.gb)


@pytest.mark.parametrize("seed", [
    *range(3),
    *(pytest.param(s, marks=pytest.mark.slow) for s in range(3, 103)),
])
def test_colon_times_divisor_lands_in_ideal(P3, seed):
    rng = random.Random(17 + seed)
    I = _random_ideal(P3, rng, count=3)
    J = _random_ideal(P3, rng, count=1, degree=1) + P3.parse("x")
    Q = ideal_quotient(I, J)
    assert Q.contains_ideal(I)
    assert I.contains_ideal(Q * J)


def test_intersection_of_lines(ideal):
    meet = intersect(ideal("x", "y"), ideal("z", "w"))
    assert meet == ideal("x*z", "x*w", "y*z", "y*w")


def test_intersection_with_unit_and_zero(ideal, P3):
    I = ideal("x", "y")
    assert intersect(I, Ideal.unit(P3)) == I
    assert intersect(I, Ideal(P3, [])).is_zero()


def test_saturation_removes_embedded_point(ideal, P3):
    I = intersect(ideal("x"), Ideal.maximal(P3).power(2))
    assert saturation(I) == ideal("x")
    assert saturation(ideal("x", "y"), ideal("x")).is_unit()


@pytest.mark.parametrize("seed", range(3))
def test_saturation_is_idempotent(P3, seed):
    rng = random.Random(seed)
    C = _random_ideal(P3, rng, count=2)
    S = saturation(C * Ideal.maximal(P3))
    assert S == C
    assert saturation(Ideal(P3, S.generators)) == S


def test_eliminate(ideal):
    I = ideal("x - y", "y - z")
    assert eliminate(I, ["x"]) == ideal("y - z")
    assert eliminate(I, ["x", "y"]).is_zero()


def test_nonzerodivisor(twisted_cubic, ideal, P3):
    assert is_nonzerodivisor(P3.parse("x + w"), twisted_cubic)
    assert not is_nonzerodivisor(P3.parse("x"), ideal("x*y"))
    assert not is_nonzerodivisor(P3.zero(), ideal("x*y"))


def test_ideal_equality_ignores_generating_set(ideal):
    assert ideal("x", "y") == ideal("x + y", "x - y")
    assert ideal("x^2", "x*y") != ideal("x")


def test_ring_mismatch(P3, P2):
    with pytest.raises(RingMismatchError):
        Ideal(P3, ["x"]) + Ideal(P2, ["x"])


def test_groebner_basis_returns_the_ideal(twisted_cubic):
    I = groebner_basis(twisted_cubic)
    assert I is twisted_cubic
    assert len(I.gb) == 3
