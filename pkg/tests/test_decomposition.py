import pytest

from hcx.acstruct import Endomorphism, padded_fixture
from hcx.errors import DecompositionError, NotIntegrableError
from hcx.liealg import Subspace, Vec, abelian
from hcx.nonexistence.decomposition import (
    block_decompose,
    check_seven_conditions,
    coefficient_names,
    e_dimension_witness,
    invariant_part,
    subspace_dims,
    unique_invariant_subspace,
)
from hcx.scalarpoly import Matrix


def _e(dim, *indices):
    return [Vec.basis(dim, i) for i in indices]


@pytest.fixture(scope="module")
def padded_prime(fixtures):
    return padded_fixture(fixtures["J'"])


class TestBlockDecomposition:
    def test_j_first_factor(self, fixtures):
        d = block_decompose(fixtures["J"], 1)
        assert d.A == Vec([0, 1, 0, 0, 0, 0])
        assert d.B == Vec([-1, 0, 0, 0, 0, 0])
        assert d.C.is_zero()
        assert d.X.is_zero() and d.Y.is_zero()
        assert d.Z == Vec([0, 0, 0, 0, 0, 1])
        values = d.assignment()
        assert values["a2j"] == 1 and values["b1j"] == -1
        assert sum(abs(v) for v in values.values()) == 2

    def test_j_prime_second_factor(self, fixtures):
        d = block_decompose(fixtures["J'"], 2)
        assert d.C == Vec([0, 0, 0, 0, 0, -1])
        assert d.coefficients["c3"] == -1
        assert d.Z == Vec([0, 0, -2, 0, 0, 0])

    def test_reconstruction(self, fixtures, padded):
        for A in list(fixtures.values()) + [padded]:
            for j in range(1, A.algebra.factor_count + 1):
                d = block_decompose(A, j)
                for row, index in enumerate(A.algebra.block_indices(j), start=1):
                    assert d.image(row) == A.image(index)

    def test_assignment_names(self, fixtures):
        d = block_decompose(fixtures["J"], 2)
        assert sorted(d.assignment(2)) == sorted(coefficient_names(2))

    def test_needs_su2_power(self):
        g = abelian(4)
        with pytest.raises(DecompositionError):
            block_decompose(Endomorphism(Matrix.identity(4), g), 1)


class TestDimensions:
    def test_fixture_dims(self, fixtures):
        assert subspace_dims(block_decompose(fixtures["J"], 1)) == (2, 1)
        assert subspace_dims(block_decompose(fixtures["J'"], 1)) == (3, 1)

    def test_integrable_bounds(self, padded, padded_prime):
        for A in (padded, padded_prime):
            for j in range(1, 5):
                dim_e, dim_f = subspace_dims(block_decompose(A, j))
                assert dim_e >= 2
                assert dim_f == 1

    def test_witness_for_the_swap_structure(self, swap, g2):
        w = e_dimension_witness(swap, 1)
        assert w is not None
        assert w.spanning == "A"
        assert not w.value.is_zero()

    def test_no_witness_when_dim_e_is_large(self, fixtures):
        assert e_dimension_witness(fixtures["J"], 1) is None
        assert e_dimension_witness(fixtures["J'"], 2) is None


class TestSevenConditions:
    @pytest.mark.parametrize("j", [1, 2, 3, 4])
    def test_all_true_on_padded_fixtures(self, j, padded, padded_prime):
        for A in (padded, padded_prime):
            conditions = check_seven_conditions(A, j)
            assert all(conditions.values())
            assert conditions.agree

    def test_requires_integrability(self, swap):
        with pytest.raises(NotIntegrableError):
            check_seven_conditions(swap, 1)


class TestInvariantSubspace:
    def test_j_plus_j_first_factor(self, padded):
        result = unique_invariant_subspace(padded, 1)
        assert result.subspace == Subspace.span(_e(12, 0, 1))
        assert result.subspace.is_invariant(padded.matrix)

    def test_j_prime_plus_j_prime_second_factor(self, padded_prime):
        result = unique_invariant_subspace(padded_prime, 2)
        assert result.subspace == Subspace.span(_e(12, 3, 4))

    def test_matches_invariant_part(self, padded):
        for j in range(1, 5):
            assert unique_invariant_subspace(padded, j).subspace == invariant_part(padded, j)

    def test_accepts_other_bases_of_the_same_plane(self, padded):
        result = unique_invariant_subspace(padded, 1)
        e1, e2 = _e(12, 0, 1)
        assert result.accepts(Subspace.span([e1 + e2, e1 - e2]))

    def test_rejects_non_invariant_planes(self, padded):
        result = unique_invariant_subspace(padded, 1)
        assert not result.accepts(Subspace.span(_e(12, 0, 2)))
        assert not result.accepts(Subspace.span(_e(12, 0)))

    def test_requires_integrability(self, swap):
        with pytest.raises(NotIntegrableError):
            unique_invariant_subspace(swap, 1)
