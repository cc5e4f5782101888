import pytest
import sympy

from biliaison.catalog import generic_4x6_matrix, projective_space, twisted_cubic_matrix
from biliaison.determinantal import (
    GaetaChain,
    HomogeneousMatrix,
    determinant,
    determinantal_ideal,
    determinantal_summary,
    gaeta_chain,
    gaeta_step,
    infer_degrees,
    lemma42_check,
    lemma42_sweep,
    maximal_minors,
    minor,
    random_linear_matrix,
)
from biliaison.errors import GaetaChainError, IndexClashError, NonStandardMatrixError
from biliaison.groebner import Ideal, codimension
from biliaison.liaison import hilbert_polynomial
from biliaison.resolve import M_SYMBOL, hilbert_data


def test_degrees_are_inferred(P3):
    x, y, z, w = P3.gens
    rows, cols = infer_degrees([[x, y * y], [z, w * z]])
    assert rows == [0, 0]
    assert cols == [1, 2]
    A = HomogeneousMatrix(P3, [[x, x * y], [P3.one(), y]])
    assert A.row_degrees == [0, -1]
    assert A.col_degrees == [1, 2]


def test_inconsistent_degrees_are_rejected(P3):
    x, y, z, w = P3.gens
    with pytest.raises(NonStandardMatrixError):
        HomogeneousMatrix(P3, [[x, y], [z, w * w]])


def test_determinant_methods_agree(P3_QQ):
    A = random_linear_matrix(P3_QQ, 3, 3, seed=4)
    assert determinant(A, "bareiss") == determinant(A, "laplace")

    def to_sympy(p):
        return sympy.sympify(str(p).replace("^", "**"))

    S = sympy.Matrix([[to_sympy(p) for p in row] for row in A.entries])
    assert sympy.expand(to_sympy(determinant(A)) - S.det()) == 0


def test_minor_deletes_rows_and_columns(P3):
    A = twisted_cubic_matrix(P3)
    assert minor(A, rows=[], cols=[0]) == P3.parse("y*w - z^2")
    with pytest.raises(ValueError):
        minor(A, rows=[0], cols=[0])
    with pytest.raises(IndexClashError):
        minor(A, rows=[], cols=[3])


def test_twisted_cubic_minors(P3, twisted_cubic):
    A = twisted_cubic_matrix(P3)
    assert len(maximal_minors(A, 2)) == 3
    assert determinantal_ideal(A, 2) == twisted_cubic
    assert determinantal_ideal(A, 0).is_unit()
    summary = determinantal_summary(A)
    assert summary["codimension"] == 2
    assert summary["expected_codimension"] == 2
    assert summary["standard"]


def _check_every_quadruple(A):
    results = lemma42_sweep(A)
    n = A.shape[0]
    assert len(results) == (n * (n - 1)) ** 2
    for result in results:
        assert result["holds"], result["indices"]
        assert result["sign"] == result["predicted_sign"]


@pytest.mark.parametrize(
    "field_kind,size,count",
    [("prime", size, 10) for size in (2, 3, 4)]
    + [("rational", size, 3) for size in (2, 3, 4)]
    + [pytest.param("prime", size, 100, marks=pytest.mark.slow) for size in (2, 3, 4, 5)]
    + [pytest.param("rational", size, 100, marks=pytest.mark.slow) for size in (2, 3, 4, 5)],
)
def test_minor_identity_on_random_matrices(field_kind, size, count):
    ring = projective_space(2, field_kind=field_kind)
    for trial in range(count):
        _check_every_quadruple(random_linear_matrix(ring, size, size, seed=1000 * size + trial))


def test_minor_identity_over_rationals(P3_QQ):
    A = random_linear_matrix(P3_QQ, 3, 3, seed=9)
    result = lemma42_check(A, 0, 2, 2, 0)
    assert result["holds"]
    assert result["predicted_sign"] == -1


def test_minor_identity_index_clash(P3):
    A = random_linear_matrix(P3, 3, 3)
    with pytest.raises(IndexClashError):
        lemma42_check(A, 1, 0, 1, 2)
    with pytest.raises(IndexClashError):
        lemma42_check(A, 0, 5, 1, 2)


def test_twisted_cubic_gaeta_step(P3, twisted_cubic):
    step = gaeta_step(twisted_cubic_matrix(P3))
    assert step.m == 1
    assert step.membership
    assert step.certificate.verified
    assert step.N == [P3.parse("x*w - y*z"), P3.parse("y*w - z^2")]
    assert step.N_prime == [P3.parse("x"), P3.parse("y")]
    assert step.S == Ideal(P3, ["x*z - y^2"])
    assert step.V == twisted_cubic
    assert step.V_prime == Ideal(P3, ["x", "y"])
    assert step.multiplier.shift == 1


def test_twisted_cubic_gaeta_chain(P3):
    chain = gaeta_chain(twisted_cubic_matrix(P3), seed=7)
    assert chain.length == 1
    assert chain.verified
    assert chain.terminal_type == "linear"
    data = chain.to_dict()
    assert data["shifts"] == [1]
    assert chain.invariants() == [{"shape": [2, 3], "degree": 3, "genus": 0, "m": 1}]


def _rebuild_from_terminal(chain):
    """Walk back from the terminal linear variety, one biliaison relation per step"""
    assert chain.steps[-1].V_prime == chain.terminal_ideal
    for earlier, later in zip(chain.steps, chain.steps[1:]):
        assert later.V == earlier.V_prime
    m = M_SYMBOL
    P = hilbert_polynomial(chain.terminal_ideal)
    for step in reversed(chain.steps):
        P_S = hilbert_polynomial(step.S)
        P = sympy.expand(P_S - P_S.subs(m, m - step.m) + P.subs(m, m - step.m))
        assert sympy.expand(P - hilbert_polynomial(step.V)) == 0
    return P


def test_twisted_cubic_chain_bookkeeping(P3):
    chain = gaeta_chain(twisted_cubic_matrix(P3), seed=7)
    assert sympy.expand(_rebuild_from_terminal(chain) - (3 * M_SYMBOL + 1)) == 0


def test_gaeta_rejects_nonstandard_input(P3):
    x, y, z, w = P3.gens
    with pytest.raises(NonStandardMatrixError):
        gaeta_step(HomogeneousMatrix(P3, [[x, y, z]]))
    with pytest.raises(NonStandardMatrixError):
        gaeta_step(HomogeneousMatrix(P3, [[x, y], [z, w], [y, x]]))
    # rank-one matrix: the 2x2 minors vanish
    with pytest.raises(NonStandardMatrixError):
        gaeta_step(HomogeneousMatrix(P3, [[x, y, z], [x, y, z]]))


def test_gaeta_chain_failure_keeps_partial_chain(P3):
    x, y, z, w = P3.gens
    with pytest.raises(GaetaChainError) as info:
        gaeta_chain(HomogeneousMatrix(P3, [[x, y, z], [x, y, z]]))
    assert isinstance(info.value.partial, GaetaChain)
    assert info.value.partial.length == 0


@pytest.mark.slow
def test_gaeta_chain_for_a_3x4_linear_matrix():
    ring = projective_space(4)
    A = random_linear_matrix(ring, 3, 4, seed=2)
    chain = gaeta_chain(A, seed=2)
    assert chain.length == 2
    assert chain.verified
    assert chain.terminal_type == "linear"
    assert codimension(determinantal_ideal(A, 3)) == 2
    _rebuild_from_terminal(chain)


@pytest.mark.slow
def test_degree_20_curve_invariants():
    A = generic_4x6_matrix(seed=0)
    V = determinantal_ideal(A, 4)
    assert codimension(V) == 3
    data = hilbert_data(V)
    assert (data.degree, data.genus) == (20, 26)


@pytest.mark.slow
def test_degree_20_curve_chain():
    chain = gaeta_chain(generic_4x6_matrix(seed=0), seed=0)
    assert chain.length == 3
    assert chain.verified
    assert [s["degree"] for s in chain.invariants()] == [20, 10, 4]
    data = hilbert_data(chain.steps[0].V)
    P = _rebuild_from_terminal(chain)
    assert (P.subs(M_SYMBOL, 0), data.degree) == (1 - data.genus, 20)
