"""
Exact rational scalars, dense matrices and sparse multivariate polynomials
"""
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import operator
import re

import sympy
from sympy.parsing.sympy_parser import parse_expr

from .errors import DimensionMismatchError, DivisionByZeroError, InputError, MissingVariableError

Rational = Fraction
Scalar = Union[int, Fraction]

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
}


def to_rational(value: Union[int, str, Fraction]) -> Fraction:
    """
    Coerce an int, a Fraction or a "p/q" string into a canonical Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"not a rational: {value!r}") from e
    raise InputError(f"not a rational: {value!r}")


def format_rational(q: Scalar) -> str:
    """Serialize as "p" or "p/q" in lowest terms"""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_arith(a: Scalar, b: Scalar, op: str) -> Fraction:
    """
    Exact arithmetic on two rationals

    Args:
        a: Left operand
        b: Right operand
        op: One of "+", "-", "*", "/" (the unicode forms are accepted too)

    Returns:
        The result in canonical form
    """
    op = {"−": "-", "×": "*", "÷": "/"}.get(op, op)
    if op not in _OPS:
        raise ValueError(f"unknown operator {op!r}")
    if op == "/" and b == 0:
        raise DivisionByZeroError(f"division of {format_rational(a)} by zero")
    return Fraction(_OPS[op](Fraction(a), Fraction(b)))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

def _rref_rows(rows: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    m = [list(r) for r in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        found = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if found is None:
            continue
        m[r], m[found] = m[found], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


class Matrix:
    """Dense row-major matrix over the rationals"""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Scalar]):
        values = tuple(Fraction(x) for x in entries)
        if len(values) != rows * cols:
            raise DimensionMismatchError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(values)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", values)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "Matrix":
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        if any(len(r) != n_cols for r in rows):
            raise DimensionMismatchError("ragged rows")
        return cls(len(rows), n_cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]]) -> "Matrix":
        return cls.from_rows(columns).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    # access -------------------------------------------------------------

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def with_entry(self, i: int, j: int, value: Scalar) -> "Matrix":
        values = list(self.entries)
        values[i * self.cols + j] = Fraction(value)
        return Matrix(self.rows, self.cols, values)

    # arithmetic ---------------------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c: Scalar) -> "Matrix":
        c = Fraction(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        other_cols = [other.column(j) for j in range(other.cols)]
        values = []
        for i in range(self.rows):
            r = self.row(i)
            for col in other_cols:
                values.append(sum((a * b for a, b in zip(r, col) if a and b), Fraction(0)))
        return Matrix(self.rows, other.cols, values)

    def apply(self, coords: Sequence[Scalar]) -> Tuple[Fraction, ...]:
        """Matrix times column vector"""
        if len(coords) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(coords)} for {self.shape} matrix")
        return tuple(
            sum((a * Fraction(b) for a, b in zip(self.row(i), coords) if a and b), Fraction(0))
            for i in range(self.rows)
        )

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: {body})"

    # elimination --------------------------------------------------------

    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        """Reduced row-echelon form and pivot columns"""
        rows, pivots = _rref_rows(self.to_rows())
        return Matrix(self.rows, self.cols, [x for r in rows for x in r]), tuple(pivots)

    def rank(self) -> int:
        return len(_rref_rows(self.to_rows())[1])

    def nullspace(self) -> List[Tuple[Fraction, ...]]:
        """Basis of the right kernel, one vector per free column"""
        rows, pivots = _rref_rows(self.to_rows())
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for r, c in enumerate(pivots):
                v[c] = -rows[r][f]
            basis.append(tuple(v))
        return basis

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise DimensionMismatchError(f"cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        augmented = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        rows, pivots = _rref_rows(augmented)
        if tuple(pivots[:n]) != tuple(range(n)):
            raise DivisionByZeroError("matrix is singular")
        return Matrix(n, n, [x for r in rows for x in r[n:]])

    def determinant(self) -> Fraction:
        if not self.is_square:
            raise DimensionMismatchError(f"no determinant for a {self.rows}x{self.cols} matrix")
        m = self.to_rows()
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            found = next((i for i in range(c, n) if m[i][c] != 0), None)
            if found is None:
                return Fraction(0)
            if found != c:
                m[c], m[found] = m[found], m[c]
                det = -det
            p = m[c][c]
            det *= p
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] / p
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return det

    def leading_principal_minors(self) -> List[Fraction]:
        return [
            Matrix.from_rows([self.row(i)[:k] for i in range(k)]).determinant()
            for k in range(1, self.rows + 1)
        ]


def rank(m: Union[Matrix, Sequence[Sequence[Scalar]]]) -> int:
    """Rank over the rationals by exact Gaussian elimination"""
    if not isinstance(m, Matrix):
        rows = [list(r) for r in m]
        if not rows:
            return 0
        m = Matrix.from_rows(rows)
    return m.rank()


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

Monomial = Tuple[Tuple[str, int], ...]

# block coefficient names: letter, row, factor ("a1j", "c34")
_COEFFICIENT_NAME = re.compile(r"^([abc])([123])(j|\d+)$")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def variable_key(name: str) -> tuple:
    """
    Sort key of the global variable order: block coefficients first, ordered
    by factor, then letter, then row (a11 < a21 < a31 < b11 < ... < c34),
    then every other name alphabetically
    """
    m = _COEFFICIENT_NAME.match(name)
    if m:
        letter, row, factor = m.groups()
        factor_key = (0, int(factor), "") if factor.isdigit() else (1, 0, factor)
        return (0, factor_key, letter, int(row))
    return (1, (0, 0, ""), name, 0)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers = dict(m1)
    for v, e in m2:
        powers[v] = powers.get(v, 0) + e
    return tuple(sorted(powers.items(), key=lambda item: variable_key(item[0])))


def _mono_text(mono: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}**{e}" for v, e in mono)


class Polynomial:
    """
    Sparse multivariate polynomial over the rationals in named indeterminates

    Values are immutable and hashable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                mono = tuple(sorted(((v, e) for v, e in mono if e != 0), key=lambda item: variable_key(item[0])))
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if clean[mono] == 0:
                    del clean[mono]
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): 1})

    @classmethod
    def coerce(cls, value: Union["Polynomial", Scalar, str]) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls.constant(value)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        """
        Parse the canonical text form (or any polynomial expression in
        +, -, *, **, / by constants and parentheses)
        """
        names = set(_IDENTIFIER.findall(text))
        symbols = {name: sympy.Symbol(name) for name in names}
        try:
            expr = parse_expr(text, local_dict=symbols, evaluate=True)
        except (SyntaxError, TypeError, sympy.SympifyError) as e:
            raise InputError(f"cannot parse polynomial {text!r}") from e
        gens = sorted((symbols[n] for n in names), key=lambda s: variable_key(s.name))
        if not gens:
            value = sympy.Rational(expr)
            return cls.constant(Fraction(int(value.p), int(value.q)))
        try:
            poly = sympy.Poly(expr, *gens, domain="QQ")
        except sympy.PolynomialError as e:
            raise InputError(f"not a polynomial: {text!r}") from e
        terms = {}
        for exps, coeff in poly.terms():
            coeff = sympy.Rational(coeff)
            mono = tuple((g.name, e) for g, e in zip(gens, exps) if e)
            terms[mono] = Fraction(int(coeff.p), int(coeff.q))
        return cls(terms)

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial"""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> Tuple[str, ...]:
        names = {v for mono in self._terms for v, _ in mono}
        return tuple(sorted(names, key=variable_key))

    def degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self._terms), default=0)

    def degree_in(self, name: str) -> int:
        return max((e for mono in self._terms for v, e in mono if v == name), default=0)

    def linear_coefficient(self, name: str) -> Optional[Fraction]:
        """
        If the polynomial is c*name + r with c a nonzero constant and r free
        of name, return c
        """
        c = None
        for mono, coeff in self._terms.items():
            powers = dict(mono)
            if name not in powers:
                continue
            if mono != ((name, 1),):
                return None
            c = coeff
        return c

    def solve_for(self, name: str) -> Optional["Polynomial"]:
        """Solve self = 0 for a variable that occurs linearly with constant coefficient"""
        c = self.linear_coefficient(name)
        if c is None:
            return None
        rest = self - Polynomial({((name, 1),): c})
        return rest * (-1 / c)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        other = Polynomial.coerce(other)
        terms = dict(self._terms)
        for mono, c in other._terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return Polynomial(terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial({mono: c * other for mono, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # evaluation ---------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        for name in self.variables():
            if name not in assignment:
                raise MissingVariableError(name)
        total = Fraction(0)
        for mono, c in self._terms.items():
            value = c
            for v, e in mono:
                value *= Fraction(assignment[v]) ** e
            total += value
        return total

    def substitute(self, bindings: Mapping[str, Union["Polynomial", Scalar]]) -> "Polynomial":
        """Replace variables by polynomials and expand; unbound variables are kept"""
        if not bindings:
            return self
        bound = {name: Polynomial.coerce(p) for name, p in bindings.items()}
        cache: Dict[Tuple[str, int], Polynomial] = {}
        total = Polynomial()
        for mono, c in self._terms.items():
            term = Polynomial.constant(c)
            kept: List[Tuple[str, int]] = []
            for v, e in mono:
                if v in bound:
                    if (v, e) not in cache:
                        cache[(v, e)] = bound[v] ** e
                    term = term * cache[(v, e)]
                else:
                    kept.append((v, e))
            if kept:
                term = term * Polynomial({tuple(kept): 1})
            total = total + term
        return total

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Simultaneous renaming of variables"""
        terms: Dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            renamed: Dict[str, int] = {}
            for v, e in mono:
                target = mapping.get(v, v)
                renamed[target] = renamed.get(target, 0) + e
            key = tuple(sorted(renamed.items(), key=lambda item: variable_key(item[0])))
            terms[key] = terms.get(key, Fraction(0)) + c
        return Polynomial(terms)

    # serialization ------------------------------------------------------

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending lexicographic order, constant term last"""
        order = self.variables()

        def exponent_vector(mono: Monomial) -> Tuple[int, ...]:
            powers = dict(mono)
            return tuple(powers.get(v, 0) for v in order)

        return sorted(self._terms.items(), key=lambda item: exponent_vector(item[0]), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for mono, c in self.sorted_terms():
            magnitude = abs(c)
            if not mono:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = _mono_text(mono)
            else:
                body = f"{format_rational(magnitude)}*{_mono_text(mono)}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def to_sympy(self) -> sympy.Expr:
        return sympy.Add(*[
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[sympy.Symbol(v) ** e for v, e in mono])
            for mono, c in self._terms.items()
        ])


def var(name: str) -> Polynomial:
    return Polynomial.var(name)


def const(c: Scalar) -> Polynomial:
    return Polynomial.constant(c)


def poly_eval(p: Polynomial, assignment: Mapping[str, Scalar]) -> Fraction:
    """Exact value of p under an assignment covering all of its variables"""
    return p.evaluate(assignment)


def poly_substitute(p: Polynomial, bindings: Mapping[str, Union[Polynomial, Scalar]]) -> Polynomial:
    """p with each bound variable replaced, expanded into canonical form"""
    return p.substitute(bindings)


def linear_combination(polys: Sequence[Polynomial], multipliers: Sequence[Union[Polynomial, Scalar]]) -> Polynomial:
    if len(polys) != len(multipliers):
        raise DimensionMismatchError(f"{len(polys)} polynomials but {len(multipliers)} multipliers")
    total = Polynomial()
    for p, m in zip(polys, multipliers):
        total = total + Polynomial.coerce(m) * p
    return total
