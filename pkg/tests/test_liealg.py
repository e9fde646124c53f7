from fractions import Fraction

import pytest

from hcx.errors import DimensionMismatchError, InputError, LayoutError, NotABasisError
from hcx.liealg import (
    LieAlgebra,
    Subspace,
    Vec,
    ad_matrix,
    algebra_from_payload,
    bracket,
    brackets_of_basis,
    component,
    independent_iff_bracket_nonzero,
    inject,
    parse_algebra_spec,
    restrict,
    su2,
    su2_power,
)
from hcx.models import LieAlgebraPayload
from hcx.scalarpoly import rank


def _cross(x, y):
    return Vec([
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ])


def _random_vec(rng, n=3, spread=3):
    return Vec(Fraction(rng.randint(-spread, spread), rng.randint(1, 2)) for _ in range(n))


class TestSu2:
    def test_structure_constants(self, g1):
        e1, e2, e3 = (g1.basis_vector(i) for i in range(3))
        assert bracket(g1, e1, e2) == e3
        assert bracket(g1, e2, e3) == e1
        assert bracket(g1, e3, e1) == e2
        assert bracket(g1, e2, e1) == -e3

    def test_axioms(self, g1, g2):
        assert g1.is_antisymmetric()
        assert g1.satisfies_jacobi()
        assert g2.satisfies_jacobi()
        assert g2.respects_layout()

    def test_bracket_is_the_cross_product(self, g1, rng):
        for _ in range(1000):
            x, y = _random_vec(rng), _random_vec(rng)
            assert bracket(g1, x, y) == _cross(x, y)

    def test_independent_iff_bracket_nonzero(self, rng):
        for _ in range(1000):
            x = _random_vec(rng, spread=1)
            # force some dependent pairs
            y = Fraction(rng.randint(-2, 2)) * x if rng.random() < 0.3 else _random_vec(rng, spread=1)
            independent, nonzero = independent_iff_bracket_nonzero(x, y)
            assert independent == nonzero

    def test_brackets_of_a_basis_span(self, rng):
        checked = 0
        while checked < 200:
            x, y, z = (_random_vec(rng) for _ in range(3))
            if rank([x.coords, y.coords, z.coords]) != 3:
                with pytest.raises(NotABasisError):
                    brackets_of_basis(x, y, z)
                continue
            assert brackets_of_basis(x, y, z).dim == 3
            checked += 1

    def test_ad_matrix_columns(self, g1):
        e1 = g1.basis_vector(0)
        ad = ad_matrix(g1, e1)
        assert ad.column(1) == (0, 0, 1)
        assert ad.column(2) == (0, -1, 0)


class TestDirectSum:
    def test_layout(self, g4):
        assert g4.factor_count == 4
        assert g4.block(3) == (6, 3)
        assert list(g4.block_indices(2)) == [3, 4, 5]
        assert g4.factor_of(7) == 3
        with pytest.raises(LayoutError):
            g4.block(5)

    def test_factors_commute(self, g2):
        x = inject(Vec([1, 2, 3]), 1, 2)
        y = inject(Vec([3, -1, 4]), 2, 2)
        assert bracket(g2, x, y).is_zero()

    def test_component_and_restrict(self, g2):
        x = Vec([1, 2, 3, 4, 5, 6])
        assert component(g2, x, 2) == Vec([0, 0, 0, 4, 5, 6])
        assert restrict(g2, x, 1) == Vec([1, 2, 3])

    def test_inject_checks(self):
        with pytest.raises(LayoutError):
            inject(Vec([1, 0, 0]), 3, 2)
        with pytest.raises(DimensionMismatchError):
            inject(Vec([1, 0]), 1, 2)

    def test_no_layout(self):
        g = LieAlgebra(2, {})
        with pytest.raises(LayoutError):
            g.block(1)

    def test_bracket_dimension_check(self, g1, g2):
        with pytest.raises(DimensionMismatchError):
            bracket(g2, g1.basis_vector(0), g1.basis_vector(1))


class TestSubspace:
    def test_canonical_basis(self):
        a = Subspace.span([Vec([1, 1, 0]), Vec([0, 1, 0])])
        b = Subspace.span([Vec([1, 0, 0]), Vec([2, 3, 0])])
        assert a == b
        assert a.contains(Vec([5, -7, 0]))
        assert not a.contains(Vec([0, 0, 1]))

    def test_intersection(self):
        a = Subspace.span([Vec([1, 0, 0]), Vec([0, 1, 0])])
        b = Subspace.span([Vec([0, 1, 0]), Vec([0, 0, 1])])
        assert a.intersection(b) == Subspace.span([Vec([0, 1, 0])])

    def test_empty_span_needs_dimension(self):
        with pytest.raises(DimensionMismatchError):
            Subspace.span([])
        assert Subspace.span([], 3).dim == 0


class TestPayloads:
    def test_shorthand(self):
        assert parse_algebra_spec("su2^3") == su2_power(3)
        assert parse_algebra_spec("su2") == su2_power(1)
        assert parse_algebra_spec("algebra.json") is None
        with pytest.raises(InputError):
            parse_algebra_spec("su2^0")

    def test_partner_entries_are_filled(self):
        payload = LieAlgebraPayload(dim=3, structure=[[1, 2, 3, "1"], [2, 3, 1, "1"], [3, 1, 2, "1"]])
        g = algebra_from_payload(payload)
        assert g.structure == su2().structure

    def test_jacobi_violation_is_rejected(self):
        payload = LieAlgebraPayload(dim=3, structure=[[1, 2, 1, "1"], [1, 3, 2, "1"]])
        with pytest.raises(InputError):
            algebra_from_payload(payload)

    def test_inconsistent_partner_is_rejected(self):
        payload = LieAlgebraPayload(dim=3, structure=[[1, 2, 3, "1"], [2, 1, 3, "1"]])
        with pytest.raises(InputError):
            algebra_from_payload(payload)

    def test_out_of_range_entry(self):
        with pytest.raises(InputError):
            algebra_from_payload(LieAlgebraPayload(dim=2, structure=[[1, 2, 3, "1"]]))
