import pytest

from biliaison.errors import ParseError, RingMismatchError
from utils.parser import (
    format_divisor,
    format_ideal,
    format_matrix,
    parse_document,
    parse_ideal,
    parse_matrix,
)


def test_document_with_every_block():
    doc = parse_document(
        """
        # comment line
        ring { x, y, z, w }
        ideal { x*z - y^2; y*w - z^2 }
        matrix rows=2 cols=3 rowdeg=[0,0] coldeg=[1,1,1] { x, y, z ; y, z, w }
        ambient { ideal { x*w - y*z } }
        divisor { ideal { x; z } den: x + y }
        poly { x + y + z }
        """
    )
    assert doc.ring.variables == ("x", "y", "z", "w")
    assert [str(g) for g in doc.ideals[0]] == ["-y^2 + x*z", "-z^2 + y*w"]
    assert doc.matrices[0].rows == 2 and doc.matrices[0].col_degrees == [1, 1, 1]
    assert doc.ambient == [doc.ring.parse("x*w - y*z")]
    assert [str(g) for g in doc.divisor] == ["x", "z"]
    assert str(doc.denominator) == "x + y"
    assert str(doc.polynomials[0]) == "x + y + z"


def test_implicit_multiplication_and_parentheses(P3):
    doc = parse_document("ideal { 2x(y + z); (x - y)^2 }", P3)
    assert doc.ideals[0][0] == P3.parse("2*x*y + 2*x*z")
    assert doc.ideals[0][1] == P3.parse("x^2 - 2*x*y + y^2")


def test_empty_ideal_block(P3):
    assert parse_ideal("ideal { }", P3) == []


def test_polynomial_before_ring_is_an_error():
    with pytest.raises(ParseError):
        parse_document("ideal { x }")


def test_unknown_variable_reports_position(P3):
    with pytest.raises(ParseError) as info:
        parse_ideal("ideal { x*q }", P3)
    assert info.value.position == 10


def test_matrix_shape_mismatch(P3):
    with pytest.raises(ParseError):
        parse_matrix("matrix rows=2 cols=2 { x, y ; z }", P3)


def test_declared_ring_must_match_session(P3):
    with pytest.raises(RingMismatchError):
        parse_document("ring { a, b } ideal { a }", P3)


def test_division_by_variable_is_rejected(P3):
    with pytest.raises(ParseError):
        parse_ideal("ideal { x / y }", P3)


def test_formatters_parse_back(P3):
    gens = [P3.parse("x*w - y*z"), P3.parse("x")]
    assert parse_ideal(format_ideal(gens), P3) == gens
    x, y, z, w = P3.gens
    text = format_matrix([[x, y], [z, w]], [0, 0], [1, 1])
    spec = parse_matrix(text, P3)
    assert spec.entries == [[x, y], [z, w]]
    assert spec.row_degrees == [0, 0]
    doc = parse_document(format_divisor([gens[0]], [x, z], x + y), P3)
    assert doc.denominator == x + y
