from fractions import Fraction

import pytest
import sympy

from hcx.errors import DimensionMismatchError, DivisionByZeroError, InputError, MissingVariableError
from hcx.scalarpoly import (
    Matrix,
    Polynomial,
    format_rational,
    linear_combination,
    poly_eval,
    poly_substitute,
    rank,
    rational_arith,
    to_rational,
    var,
    variable_key,
)


class TestRationals:
    def test_canonical_form(self):
        assert to_rational("6/4") == Fraction(3, 2)
        assert format_rational(Fraction(6, 4)) == "3/2"
        assert format_rational(Fraction(-4, 2)) == "-2"

    def test_bad_text_is_an_input_error(self):
        with pytest.raises(InputError):
            to_rational("3/x")
        with pytest.raises(InputError):
            to_rational("1/0")
        with pytest.raises(InputError):
            to_rational(True)

    def test_arith(self):
        assert rational_arith(Fraction(1, 2), Fraction(1, 3), "+") == Fraction(5, 6)
        assert rational_arith(1, 3, "÷") == Fraction(1, 3)
        assert rational_arith(2, 3, "−") == -1

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZeroError):
            rational_arith(1, 0, "/")

    def test_field_laws(self, rng):
        for _ in range(1000):
            a, b, c = (Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(3))
            assert rational_arith(a, rational_arith(b, c, "+"), "*") == a * b + a * c
            if b:
                assert rational_arith(rational_arith(a, b, "/"), b, "*") == a


class TestMatrix:
    def test_rank_and_nullspace(self):
        m = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert m.rank() == 2
        kernel = m.nullspace()
        assert len(kernel) == 1
        assert all(x == 0 for x in m.apply(kernel[0]))

    def test_inverse(self):
        m = Matrix.from_rows([[2, 1], [1, 1]])
        assert m @ m.inverse() == Matrix.identity(2)
        with pytest.raises(DivisionByZeroError):
            Matrix.from_rows([[1, 2], [2, 4]]).inverse()

    def test_shape_errors(self):
        with pytest.raises(DimensionMismatchError):
            Matrix.from_rows([[1, 2]]) @ Matrix.from_rows([[1, 2]])
        with pytest.raises(DimensionMismatchError):
            Matrix.from_rows([[1, 2], [3]])

    def test_columns_are_images(self):
        m = Matrix.from_columns([[0, 1], [-1, 0]])
        assert m.apply([1, 0]) == (0, 1)
        assert m @ m == -Matrix.identity(2)

    def test_determinant_matches_sympy(self, rng):
        for _ in range(1000):
            n = rng.randint(1, 4)
            rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            assert Matrix.from_rows(rows).determinant() == Fraction(int(sympy.Matrix(rows).det()))

    def test_rank_matches_sympy(self, rng):
        for _ in range(1000):
            r, c = rng.randint(1, 4), rng.randint(1, 4)
            rows = [[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)]
            assert rank(rows) == sympy.Matrix(rows).rank()

    def test_immutable(self):
        m = Matrix.identity(2)
        with pytest.raises(AttributeError):
            m.rows = 3


class TestPolynomial:
    def test_variable_order(self):
        names = ["c3j", "a1j", "b2j", "a2j", "lam"]
        assert sorted(names, key=variable_key) == ["a1j", "a2j", "b2j", "c3j", "lam"]
        assert variable_key("a34") < variable_key("a1j")

    def test_parse_and_print(self):
        p = Polynomial.parse("a1j*c3j - a3j**2 + 1")
        assert str(p) == "a1j*c3j - a3j**2 + 1"
        assert Polynomial.parse(str(p)) == p

    def test_zero_and_constants(self):
        assert str(Polynomial()) == "0"
        assert Polynomial.parse("2 - 2") == Polynomial()
        assert Polynomial.parse("1/2").constant_value() == Fraction(1, 2)

    def test_parse_rejects_non_polynomials(self):
        with pytest.raises(InputError):
            Polynomial.parse("1/a1j")
        with pytest.raises(InputError):
            Polynomial.parse("a1j +* b2j")

    def test_evaluate(self):
        p = Polynomial.parse("a1j*b2j - a2j*b1j + 1")
        assert poly_eval(p, {"a1j": 1, "b2j": 2, "a2j": 3, "b1j": Fraction(1, 3)}) == 2
        with pytest.raises(MissingVariableError) as info:
            p.evaluate({"a1j": 1})
        assert info.value.variable in {"a2j", "b1j", "b2j"}

    def test_substitute_and_solve(self):
        e1 = Polynomial.parse("b1j - a2j")
        assert e1.solve_for("b1j") == var("a2j")
        assert e1.solve_for("a1j") is None
        assert Polynomial.parse("b1j**2 + b1j").solve_for("b1j") is None
        p = Polynomial.parse("a1j*b2j - a2j*b1j + 1")
        assert poly_substitute(p, {"b1j": var("a2j")}) == Polynomial.parse("a1j*b2j - a2j**2 + 1")

    def test_rename_is_simultaneous(self):
        p = Polynomial.parse("a1j - 2*b2j")
        assert p.rename({"a1j": "b2j", "b2j": "a1j"}) == Polynomial.parse("b2j - 2*a1j")

    def test_linear_combination(self):
        ps = [Polynomial.parse("a1j"), Polynomial.parse("b1j")]
        assert linear_combination(ps, [var("b1j"), -var("a1j")]) == Polynomial()
        with pytest.raises(DimensionMismatchError):
            linear_combination(ps, [1])

    def test_ring_laws_against_sympy(self, rng):
        names = ["a1j", "a2j", "b1j", "c3j"]

        def random_poly():
            p = Polynomial()
            for _ in range(rng.randint(0, 4)):
                mono = Polynomial.constant(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
                for name in rng.sample(names, rng.randint(0, 2)):
                    mono = mono * var(name) ** rng.randint(1, 2)
                p = p + mono
            return p

        for _ in range(1000):
            p, q = random_poly(), random_poly()
            assert (p * q).to_sympy().expand() == (p.to_sympy() * q.to_sympy()).expand()
            assert p + q - q == p
            assert Polynomial.parse(str(p - q)) == p - q
