"""
Almost complex structures: Nijenhuis tensor, integrability, quaternion
axioms, invariant inner products and the quaternionic block decomposition
"""
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from .errors import DecompositionError, DimensionMismatchError, QuaternionAxiomError
from .liealg import LieAlgebra, Subspace, Vec, bracket, su2_power, abelian
from .models import EndomorphismPayload, IntegrabilityReport, HypercomplexReport, NijenhuisFailure
from .scalarpoly import Matrix, Scalar, format_rational, rank, to_rational

logger = logging.getLogger(__name__)


class Endomorphism:
    """
    Linear map of an algebra's underlying vector space. Column i of the
    matrix is the image of e_i
    """

    __slots__ = ("matrix", "algebra")

    def __init__(self, matrix: Matrix, algebra: LieAlgebra):
        if not matrix.is_square or matrix.rows != algebra.dim:
            raise DimensionMismatchError(
                f"{matrix.rows}x{matrix.cols} matrix on a {algebra.dim}-dim algebra"
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "algebra", algebra)

    def __setattr__(self, name, value):
        raise AttributeError("Endomorphism is immutable")

    @classmethod
    def from_images(cls, algebra: LieAlgebra, images: Dict[int, Dict[int, Scalar]]) -> "Endomorphism":
        """Build from {i: {k: coeff}} meaning e_i -> sum_k coeff e_k (0-based)"""
        n = algebra.dim
        columns = [[Fraction(0)] * n for _ in range(n)]
        for i, image in images.items():
            for k, c in image.items():
                columns[i][k] = Fraction(c)
        return cls(Matrix.from_columns(columns), algebra)

    @classmethod
    def identity(cls, algebra: LieAlgebra) -> "Endomorphism":
        return cls(Matrix.identity(algebra.dim), algebra)

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def __call__(self, v: Vec) -> Vec:
        return Vec(self.matrix.apply(v.coords))

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        return Endomorphism(self.matrix @ other.matrix, self.algebra)

    def __add__(self, other: "Endomorphism") -> "Endomorphism":
        return Endomorphism(self.matrix + other.matrix, self.algebra)

    def __neg__(self) -> "Endomorphism":
        return Endomorphism(-self.matrix, self.algebra)

    def image(self, i: int) -> Vec:
        return Vec(self.matrix.column(i))

    def with_entry(self, row: int, col: int, value: Scalar) -> "Endomorphism":
        return Endomorphism(self.matrix.with_entry(row, col, value), self.algebra)

    def squares_to_minus_identity(self) -> bool:
        return (self.matrix @ self.matrix) == -Matrix.identity(self.dim)

    def on(self, algebra: LieAlgebra) -> "Endomorphism":
        return Endomorphism(self.matrix, algebra)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"Endomorphism(dim={self.dim}, algebra={self.algebra.name!r})"

    def to_payload(self) -> EndomorphismPayload:
        return EndomorphismPayload(
            dim=self.dim,
            matrix=[[format_rational(x) for x in self.matrix.row(i)] for i in range(self.dim)],
        )


def endomorphism_from_payload(payload: EndomorphismPayload, algebra: LieAlgebra) -> Endomorphism:
    if payload.dim != algebra.dim:
        raise DimensionMismatchError(f"structure of dimension {payload.dim} on a {algebra.dim}-dim algebra")
    rows = [[to_rational(x) for x in row] for row in payload.matrix]
    return Endomorphism(Matrix.from_rows(rows), algebra)


def block_diagonal(matrices: Sequence[Matrix]) -> Matrix:
    n = sum(m.rows for m in matrices)
    rows = [[Fraction(0)] * n for _ in range(n)]
    offset = 0
    for m in matrices:
        for i in range(m.rows):
            for j in range(m.cols):
                rows[offset + i][offset + j] = m[i, j]
        offset += m.rows
    return Matrix.from_rows(rows)


def direct_sum_structure(structures: Sequence[Endomorphism], algebra: LieAlgebra) -> Endomorphism:
    """Block-diagonal sum of structures on the factors of a direct sum"""
    return Endomorphism(block_diagonal([s.matrix for s in structures]), algebra)


# Nijenhuis tensor -------------------------------------------------------------

def nijenhuis(g: LieAlgebra, J: Endomorphism, x: Vec, y: Vec) -> Vec:
    """N_J(x, y) = J[Jx, y] + J[x, Jy] + [x, y] - [Jx, Jy], unnormalized"""
    if J.dim != g.dim:
        raise DimensionMismatchError(f"structure of dimension {J.dim} on a {g.dim}-dim algebra")
    Jx, Jy = J(x), J(y)
    return J(bracket(g, Jx, y)) + J(bracket(g, x, Jy)) + bracket(g, x, y) - bracket(g, Jx, Jy)


def is_integrable(g: LieAlgebra, J: Endomorphism) -> IntegrabilityReport:
    """
    Check J^2 = -id and N_J(e_i, e_j) = 0 over all basis pairs i < j

    Returns:
        IntegrabilityReport; the failing pair is reported 1-based
    """
    squares = J.squares_to_minus_identity()
    failure = None
    checked = 0
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            checked += 1
            value = nijenhuis(g, J, g.basis_vector(i), g.basis_vector(j))
            if not value.is_zero():
                factor = g.factor_of(i) if g.factor_layout is not None else None
                failure = NijenhuisFailure(pair=(i + 1, j + 1), value=value.to_strings(), factor=factor)
                break
        if failure is not None:
            break
    if failure is not None:
        logger.debug(f"Nijenhuis tensor nonzero at pair {failure.pair}")
    return IntegrabilityReport(
        squares_to_minus_id=squares,
        nijenhuis_zero=failure is None,
        pairs_checked=checked,
        first_failing_pair=failure,
    )


# Quaternion axioms ------------------------------------------------------------

def quaternion_axiom_checks(I: Endomorphism, J: Endomorphism, K: Endomorphism) -> List[Tuple[str, bool]]:
    """Each algebraic axiom, checked independently, in a fixed order"""
    minus_id = -Matrix.identity(I.dim)
    zero = Matrix.zeros(I.dim)
    Im, Jm, Km = I.matrix, J.matrix, K.matrix
    return [
        ("I^2=-id", Im @ Im == minus_id),
        ("J^2=-id", Jm @ Jm == minus_id),
        ("K^2=-id", Km @ Km == minus_id),
        ("IJ=K", Im @ Jm == Km),
        ("IJ+JI=0", Im @ Jm + Jm @ Im == zero),
        ("IK+KI=0", Im @ Km + Km @ Im == zero),
        ("JK+KJ=0", Jm @ Km + Km @ Jm == zero),
    ]


def check_quaternion_axioms(I: Endomorphism, J: Endomorphism, K: Endomorphism) -> None:
    if not I.dim == J.dim == K.dim:
        raise DimensionMismatchError("structures of different dimensions")
    for name, ok in quaternion_axiom_checks(I, J, K):
        if not ok:
            raise QuaternionAxiomError(name)


def is_hypercomplex(g: LieAlgebra, I: Endomorphism, J: Endomorphism, K: Endomorphism) -> HypercomplexReport:
    """Algebraic axioms first, then integrability of each structure"""
    if not g.dim == I.dim == J.dim == K.dim:
        raise DimensionMismatchError("structures and algebra have different dimensions")
    report = HypercomplexReport()
    for name, ok in quaternion_axiom_checks(I, J, K):
        report.checks[name] = ok
        if not ok and report.first_failure is None:
            report.first_failure = name
    for label, A in (("I", I), ("J", J), ("K", K)):
        sub = is_integrable(g, A)
        report.integrability[label] = sub
        name = f"integrability of {label}"
        report.checks[name] = sub.nijenhuis_zero
        if not sub.nijenhuis_zero and report.first_failure is None:
            report.first_failure = name
    return report


# Inner products ---------------------------------------------------------------

class BilinearForm:
    """Symmetric bilinear form given by its Gram matrix"""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Matrix):
        if not matrix.is_square:
            raise DimensionMismatchError("Gram matrix must be square")
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("BilinearForm is immutable")

    @classmethod
    def standard(cls, n: int) -> "BilinearForm":
        return cls(Matrix.identity(n))

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def __call__(self, u: Vec, v: Vec) -> Fraction:
        return u.dot(Vec(self.matrix.apply(v.coords)))

    def is_symmetric(self) -> bool:
        return self.matrix == self.matrix.transpose()

    def is_positive_definite(self) -> bool:
        """Sylvester's criterion on exact leading principal minors"""
        return self.is_symmetric() and all(m > 0 for m in self.matrix.leading_principal_minors())

    def pullback(self, A: Endomorphism) -> "BilinearForm":
        """(u, v) -> self(Au, Av)"""
        return BilinearForm(A.matrix.transpose() @ self.matrix @ A.matrix)

    def is_invariant(self, A: Endomorphism) -> bool:
        return self.pullback(A).matrix == self.matrix

    def __add__(self, other: "BilinearForm") -> "BilinearForm":
        return BilinearForm(self.matrix + other.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)


def invariant_inner_product(eta: BilinearForm, I: Endomorphism, J: Endomorphism, K: Endomorphism) -> BilinearForm:
    """<u, v> = eta(u, v) + eta(Iu, Iv) + eta(Ju, Jv) + eta(Ku, Kv)"""
    if not eta.is_positive_definite():
        raise DecompositionError("the seed form is not a positive definite inner product")
    check_quaternion_axioms(I, J, K)
    return eta + eta.pullback(I) + eta.pullback(J) + eta.pullback(K)


class QuaternionicDecomposition:
    """Pairwise orthogonal blocks (v, Iv, Jv, Kv) spanning the whole space"""

    __slots__ = ("blocks", "form")

    def __init__(self, blocks: Sequence[Tuple[Vec, Vec, Vec, Vec]], form: BilinearForm):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in blocks))
        object.__setattr__(self, "form", form)

    def __setattr__(self, name, value):
        raise AttributeError("QuaternionicDecomposition is immutable")

    def __len__(self) -> int:
        return len(self.blocks)

    def subspaces(self) -> List[Subspace]:
        return [Subspace.span(list(b)) for b in self.blocks]

    def vectors(self) -> List[Vec]:
        return [v for b in self.blocks for v in b]


def _orthogonal_projection(form: BilinearForm, W: List[Vec], v: Vec) -> Vec:
    """G-orthogonal projection of v onto span(W)"""
    gram = Matrix.from_rows([[form(a, b) for b in W] for a in W])
    rhs = [form(a, v) for a in W]
    coeffs = gram.inverse().apply(rhs)
    out = Vec.zero(v.dim)
    for c, w in zip(coeffs, W):
        out = out + c * w
    return out


def quaternionic_decomposition(
    dim: int, I: Endomorphism, J: Endomorphism, K: Endomorphism, eta: BilinearForm
) -> QuaternionicDecomposition:
    """
    Greedy splitting into quaternionic blocks: pick the projection of the
    first standard basis vector with a nonzero component in the current
    complement, take {v, Iv, Jv, Kv}, pass to its orthogonal complement
    """
    if not dim == I.dim == J.dim == K.dim == eta.dim:
        raise DimensionMismatchError("structures, form and dimension disagree")
    form = invariant_inner_product(eta, I, J, K)
    complement = [Vec.basis(dim, i) for i in range(dim)]
    blocks = []
    while complement:
        if len(complement) < 4:
            raise DecompositionError(f"complement of dimension {len(complement)} left over")
        pivot = None
        for i in range(dim):
            candidate = _orthogonal_projection(form, complement, Vec.basis(dim, i))
            if not candidate.is_zero():
                pivot = candidate
                break
        if pivot is None:
            raise DecompositionError("complement is nonzero but no basis vector projects onto it")
        block = (pivot, I(pivot), J(pivot), K(pivot))
        for a in range(4):
            for b in range(a + 1, 4):
                if form(block[a], block[b]) != 0:
                    raise DecompositionError(f"block vectors {a} and {b} are not orthogonal")
        if rank([v.coords for v in block]) != 4:
            raise DecompositionError("block vectors are not independent")
        blocks.append(block)
        # W' = W . ker(B^T G W)
        constraints = Matrix.from_rows([[form(b, w) for w in complement] for b in block])
        kernel = constraints.nullspace()
        next_complement = []
        for k in kernel:
            v = Vec.zero(dim)
            for c, w in zip(k, complement):
                if c:
                    v = v + c * w
            next_complement.append(v)
        complement = next_complement
    result = QuaternionicDecomposition(blocks, form)
    if rank([v.coords for v in result.vectors()]) != dim:
        raise DecompositionError("blocks do not span the space")
    logger.debug(f"quaternionic decomposition of dimension {dim} into {len(blocks)} blocks")
    return result


# Fixtures ---------------------------------------------------------------------

def _left_multiplication() -> Tuple[Matrix, Matrix, Matrix]:
    """Left multiplication by i, j, k on the quaternions in the basis (1, i, j, k)"""
    Li = Matrix.from_columns([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    Lj = Matrix.from_columns([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]])
    Lk = Matrix.from_columns([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]])
    return Li, Lj, Lk


def standard_quaternion_triple(algebra: LieAlgebra) -> Tuple[Endomorphism, Endomorphism, Endomorphism]:
    """Block-diagonal left multiplication by i, j, k on consecutive 4-dim blocks"""
    if algebra.dim % 4:
        raise DimensionMismatchError(f"dimension {algebra.dim} is not a multiple of 4")
    n = algebra.dim // 4
    return tuple(Endomorphism(block_diagonal([m] * n), algebra) for m in _left_multiplication())


def conjugate_triple(P: Matrix, triple: Sequence[Endomorphism]) -> Tuple[Endomorphism, Endomorphism, Endomorphism]:
    """(P A P^-1) for each member"""
    P_inv = P.inverse()
    return tuple(Endomorphism(P @ A.matrix @ P_inv, A.algebra) for A in triple)


def example_structures() -> Tuple[Endomorphism, Endomorphism]:
    """
    The integrable structures J and J' on su(2)+su(2); basis order
    e1(1), e2(1), e3(1), e1(2), e2(2), e3(2)
    """
    g = su2_power(2)
    J = Endomorphism.from_images(g, {
        0: {1: 1},
        1: {0: -1},
        2: {5: 1},
        3: {4: 1},
        4: {3: -1},
        5: {2: -1},
    })
    J_prime = Endomorphism.from_images(g, {
        0: {1: 1},
        1: {0: -1},
        2: {2: 1, 5: 1},
        3: {4: 1},
        4: {3: -1},
        5: {2: -2, 5: -1},
    })
    return J, J_prime


def swap_structure(m: int = 2) -> Endomorphism:
    """e_i(1) -> e_i(2), e_i(2) -> -e_i(1); squares to -id but is not integrable"""
    if m != 2:
        raise DimensionMismatchError("the swap structure is defined on su(2)+su(2)")
    g = su2_power(2)
    images = {}
    for i in range(3):
        images[i] = {i + 3: 1}
        images[i + 3] = {i: -1}
    return Endomorphism.from_images(g, images)


def padded_fixture(structure: Endomorphism, copies: int = 2) -> Endomorphism:
    """structure + structure + ... on su(2)^(2 * copies)"""
    g = su2_power(structure.algebra.factor_count * copies)
    return direct_sum_structure([structure] * copies, g)


def abelian_quaternion_triple(dim: int) -> Tuple[Endomorphism, Endomorphism, Endomorphism]:
    return standard_quaternion_triple(abelian(dim))
