import pytest

from hcx.acstruct import conjugate_triple, standard_quaternion_triple
from hcx.errors import LayoutError
from hcx.liealg import Vec, bracket
from hcx.nonexistence.obstruction import formal_jacobi_residual, hypercomplex_obstruction, jacobi_sum
from hcx.scalarpoly import Matrix


def _unimodular(rng, n):
    lower = [[1 if i == j else (rng.randint(-1, 1) if j < i else 0) for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (rng.randint(-1, 1) if j > i else 0) for j in range(n)] for i in range(n)]
    return Matrix.from_rows(lower) @ Matrix.from_rows(upper)


def test_formal_residual_is_lambda_times_the_bracket():
    residual, expected = formal_jacobi_residual()
    assert residual == expected
    assert not any(r.is_zero() for r in residual)


def test_jacobi_sum_of_the_brackets_vanishes(g2, rng):
    for _ in range(20):
        x, y, z = (Vec([rng.randint(-2, 2) for _ in range(g2.dim)]) for _ in range(3))
        assert jacobi_sum(g2, x, y, z).is_zero()


def test_jacobi_terms_when_the_adjoint_is_scalar(g2):
    # ad_x is 0 on the other factor, so the bracket sum matches lambda * [f, e] with lambda = 0
    x, e, f = g2.basis_vector(0), g2.basis_vector(3), g2.basis_vector(4)
    assert not bracket(g2, f, e).is_zero()
    assert jacobi_sum(g2, x, e, f) == 0 * bracket(g2, f, e)


def test_standard_triple_fails_at_integrability(g4):
    report = hypercomplex_obstruction(*standard_quaternion_triple(g4), 1, 2)
    assert not report.reached
    assert report.failed_hypothesis.startswith("integrability of")
    assert report.failing_pair is not None
    assert "integrability of" in report.message


def test_broken_axioms_are_reported_first(g4):
    I, J, K = standard_quaternion_triple(g4)
    report = hypercomplex_obstruction(I, J, -K, 1, 2)
    assert report.failed_hypothesis == "quaternion axiom IJ=K"


def test_conjugated_triples_never_reach_the_obstruction(g4, rng):
    base = standard_quaternion_triple(g4)
    for _ in range(25):
        triple = conjugate_triple(_unimodular(rng, 12), base)
        report = hypercomplex_obstruction(*triple, 1, 3)
        assert not report.reached
        assert report.failed_hypothesis.startswith("integrability of")


@pytest.mark.slow
def test_many_conjugated_triples(g4, rng):
    base = standard_quaternion_triple(g4)
    for _ in range(100):
        triple = conjugate_triple(_unimodular(rng, 12), base)
        j, k = rng.sample(range(1, 5), 2)
        assert not hypercomplex_obstruction(*triple, j, k).reached


def test_factors_must_differ(g4):
    with pytest.raises(LayoutError):
        hypercomplex_obstruction(*standard_quaternion_triple(g4), 2, 2)


def test_factor_out_of_range(g4):
    with pytest.raises(LayoutError):
        hypercomplex_obstruction(*standard_quaternion_triple(g4), 1, 5)
