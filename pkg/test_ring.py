import random
from fractions import Fraction

import pytest

from biliaison.errors import RingMismatchError
from biliaison.ring import (
    PolyRing,
    PrimeField,
    RationalField,
    homogeneous_component,
    make_field,
    monomials_of_degree,
    poly_arith,
    ring_from_dict,
)


def test_prime_field_arithmetic():
    F = PrimeField(7)
    assert F(10) == 3
    assert F.inv(3) * 3 % 7 == 1
    assert F.signed(6) == -1
    assert F(Fraction(1, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(15)
    with pytest.raises(ValueError):
        PrimeField(2)


def test_make_field():
    assert make_field("rational").name == "QQ"
    assert make_field("prime", 101).name == "ZZ/101"
    with pytest.raises(ValueError):
        make_field("reals")


def test_ring_needs_two_distinct_variables():
    with pytest.raises(ValueError):
        PolyRing(["x"])
    with pytest.raises(ValueError):
        PolyRing(["x", "x"])


def test_parse_and_print(P3):
    f = P3.parse("x^2*y - 3*z*w^2 + x^2*y")
    assert str(f) == "2*x^2*y - 3*z*w^2"
    assert f.degree() == 3
    assert f.is_homogeneous()
    assert P3.parse(str(f)) == f


def test_grevlex_leading_terms(P3):
    # w is the smallest variable, so y^2 beats x*w
    assert P3.parse("y^2 + x*w").leading_monomial == (0, 2, 0, 0)
    assert P3.parse("x*z + y^2").leading_monomial == (0, 2, 0, 0)
    assert P3.parse("x^2 + y*z").leading_monomial == (2, 0, 0, 0)


def test_exact_divide(P3):
    x, y, z, w = P3.gens
    f = (x * w - y * z) * (x + y)
    assert f.exact_divide(x + y) == x * w - y * z
    with pytest.raises(ValueError):
        f.exact_divide(z + w)


def test_constants_compare_with_ints(P3):
    assert P3.one() == 1
    assert P3.zero() == 0
    assert P3.parse("2 - 1") == 1


def test_rational_coefficients(P3_QQ):
    f = P3_QQ.parse("x/2 + 3*y")
    assert f.coefficient((1, 0, 0, 0)) == Fraction(1, 2)
    assert f.monic().leading_coefficient == 1


def test_ring_mismatch(P3, P2):
    with pytest.raises(RingMismatchError):
        P3.gens[0] + P2.gens[0]


def test_random_form_is_seeded_and_homogeneous(P3):
    a = P3.random_form(3, random.Random(5))
    b = P3.random_form(3, random.Random(5))
    assert a == b
    assert a.is_homogeneous() and a.degree() == 3


def test_ring_round_trip_through_dict():
    R = PolyRing(["a", "b", "c"], RationalField())
    assert ring_from_dict(R.to_dict()) == R
    S = PolyRing(["a", "b"], PrimeField(101))
    assert ring_from_dict(S.to_dict()) == S


def test_monomials_of_degree(P3):
    quadrics = monomials_of_degree(P3, 2)
    assert len(quadrics) == 10
    assert str(quadrics[0]) == "x^2"
    assert str(quadrics[-1]) == "w^2"
    assert monomials_of_degree(P3, 0) == [P3.one()]
    with pytest.raises(ValueError):
        monomials_of_degree(P3, -1)


def test_poly_arith_dispatch(P3, P2):
    x, y, z, w = P3.gens
    assert poly_arith(x, y, "add") == x + y
    assert poly_arith(x, y, "sub") == x - y
    assert poly_arith(x, y, "mul") == P3.parse("x*y")
    with pytest.raises(ValueError):
        poly_arith(x, y, "div")
    with pytest.raises(RingMismatchError):
        poly_arith(x, P2.gens[0], "add")


def test_poly_arith_examples():
    R = PolyRing(["x", "y"], PrimeField(5))
    x, y = R.gens
    assert poly_arith(x + y, x - y, "mul") == R.parse("x^2 - y^2")
    assert poly_arith(x + y, R.zero(), "mul").is_zero()
    assert (x + y) ** 5 == R.parse("x^5 + y^5")


def test_homogeneous_component(P3):
    f = P3.parse("x^2 + y")
    assert homogeneous_component(f, 2) == P3.parse("x^2")
    assert homogeneous_component(f, 1) == P3.parse("y")
    assert homogeneous_component(P3.zero(), 3).is_zero()


def _random_polynomial(ring, rng, top=2):
    return sum((ring.random_form(d, rng) for d in range(top + 1)), ring.zero())


@pytest.mark.parametrize(
    "field_kind,count",
    [
        ("prime", 100),
        ("rational", 100),
        pytest.param("prime", 1000, marks=pytest.mark.slow),
        pytest.param("rational", 1000, marks=pytest.mark.slow),
    ],
)
def test_ring_axioms_on_random_triples(field_kind, count):
    R = PolyRing(["x", "y", "z"], make_field(field_kind, 32003))
    rng = random.Random(count)
    for _ in range(count):
        a, b, c = (_random_polynomial(R, rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0


@pytest.mark.parametrize("field_kind", ["prime", "rational"])
def test_product_of_forms_is_a_form(field_kind):
    R = PolyRing(["x", "y", "z", "w"], make_field(field_kind, 32003))
    rng = random.Random(8)
    for _ in range(50):
        da, db = rng.randrange(4), rng.randrange(4)
        p = R.random_form(da, rng) * R.random_form(db, rng)
        assert p.is_zero() or (p.is_homogeneous() and p.degree() == da + db)
