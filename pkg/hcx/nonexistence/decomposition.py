"""
Block decomposition of a structure on su(2)^m, the seven equivalent
conditions on one factor, and the unique invariant plane
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union
import logging

from ..acstruct import Endomorphism, is_integrable, nijenhuis
from ..errors import DecompositionError, NotIntegrableError
from ..liealg import LieAlgebra, Subspace, Vec, bracket, component, su2_power
from ..models import SevenConditions
from ..scalarpoly import Matrix, rank

logger = logging.getLogger(__name__)

LETTERS = ("a", "b", "c")
FactorSymbol = Union[int, str]


def coefficient_name(letter: str, row: int, factor: FactorSymbol) -> str:
    """Name of the coefficient of e_row(factor) in the block part of I e_(letter)"""
    return f"{letter}{row}{factor}"


def coefficient_names(factor: FactorSymbol) -> List[str]:
    return [coefficient_name(letter, row, factor) for letter in LETTERS for row in (1, 2, 3)]


@dataclass(frozen=True)
class BlockDecomposition:
    """
    I e_1(j) = A + X, I e_2(j) = B + Y, I e_3(j) = C + Z with A, B, C in
    factor j and X, Y, Z in the complement
    """
    factor: int
    A: Vec
    B: Vec
    C: Vec
    X: Vec
    Y: Vec
    Z: Vec
    coefficients: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def block_parts(self) -> Tuple[Vec, Vec, Vec]:
        return self.A, self.B, self.C

    @property
    def off_block_parts(self) -> Tuple[Vec, Vec, Vec]:
        return self.X, self.Y, self.Z

    def image(self, row: int) -> Vec:
        """Reconstructed I e_row(j), row in 1..3"""
        return self.block_parts[row - 1] + self.off_block_parts[row - 1]

    def assignment(self, factor: FactorSymbol = "j") -> Dict[str, Fraction]:
        """Coefficient values keyed by the variable names used for factor"""
        return {
            coefficient_name(letter, row, factor): self.coefficients[f"{letter}{row}"]
            for letter in LETTERS for row in (1, 2, 3)
        }


def _check_shape(g: LieAlgebra) -> int:
    if g.factor_layout is None:
        raise DecompositionError("the algebra has no factor layout")
    m = len(g.factor_layout)
    if g != su2_power(m):
        raise DecompositionError(f"the algebra '{g.name}' is not su(2)^{m}")
    return m


def block_decompose(I: Endomorphism, j: int) -> BlockDecomposition:
    """Split the images of e_1(j), e_2(j), e_3(j) into factor j and its complement"""
    g = I.algebra
    _check_shape(g)
    indices = g.block_indices(j)
    parts = []
    coefficients: Dict[str, Fraction] = {}
    for letter, index in zip(LETTERS, indices):
        image = I.image(index)
        inside = component(g, image, j)
        parts.append((inside, image - inside))
        for row, k in enumerate(indices, start=1):
            coefficients[f"{letter}{row}"] = image[k]
    (A, X), (B, Y), (C, Z) = parts
    return BlockDecomposition(factor=j, A=A, B=B, C=C, X=X, Y=Y, Z=Z, coefficients=coefficients)


def subspace_dims(d: BlockDecomposition) -> Tuple[int, int]:
    """(dim E, dim F) with E = span{A, B, C} and F = span{X, Y, Z}"""
    dim_e = rank([v.coords for v in d.block_parts])
    dim_f = rank([v.coords for v in d.off_block_parts])
    return dim_e, dim_f


def off_block_kernel(d: BlockDecomposition) -> List[Tuple[Fraction, ...]]:
    """Kernel of (alpha, beta, gamma) -> alpha X + beta Y + gamma Z"""
    return Matrix.from_columns([v.coords for v in d.off_block_parts]).nullspace()


def _lift(g: LieAlgebra, j: int, coeffs: Tuple[Fraction, ...]) -> Vec:
    coords = [Fraction(0)] * g.dim
    for k, c in zip(g.block_indices(j), coeffs):
        coords[k] = c
    return Vec(coords)


def _require_integrable(I: Endomorphism) -> None:
    report = is_integrable(I.algebra, I)
    if not report.squares_to_minus_id:
        raise NotIntegrableError("the structure does not square to -id")
    if not report.nijenhuis_zero:
        pair = report.first_failing_pair.pair
        raise NotIntegrableError(f"Nijenhuis tensor is nonzero at pair {pair}", pair=pair)


def invariant_part(I: Endomorphism, j: int) -> Subspace:
    """{u in factor j : Iu in factor j}; always I-invariant"""
    d = block_decompose(I, j)
    g = I.algebra
    return Subspace([_lift(g, j, k) for k in off_block_kernel(d)], g.dim)


def check_seven_conditions(I: Endomorphism, j: int) -> SevenConditions:
    """
    Evaluate the seven equivalent conditions on factor j directly

    Raises:
        NotIntegrableError: the equivalence only holds for integrable I
    """
    _require_integrable(I)
    g = I.algebra
    d = block_decompose(I, j)
    X, Y, Z = d.off_block_parts
    kernel = off_block_kernel(d)
    plane = invariant_part(I, j)
    _, dim_f = subspace_dims(d)
    xy, yz, zx = bracket(g, X, Y).is_zero(), bracket(g, Y, Z).is_zero(), bracket(g, Z, X).is_zero()
    conditions = SevenConditions(
        factor=j,
        kernel_nonzero=bool(kernel),
        invariant_plane_unique=plane.dim == 2 and plane.is_invariant(I.matrix),
        off_block_dim_one=dim_f == 1,
        off_block_rank_le_two=dim_f <= 2,
        brackets_xy_zx_vanish=xy and zx,
        brackets_xy_yz_vanish=xy and yz,
        brackets_yz_zx_vanish=yz and zx,
    )
    if not conditions.agree:
        logger.error(f"conditions on factor {j} disagree: {conditions.values()}")
    return conditions


@dataclass(frozen=True)
class InvariantSubspace:
    """The unique 2-dim I-invariant subspace of one factor"""
    factor: int
    subspace: Subspace
    structure: Endomorphism

    def accepts(self, other: Subspace) -> bool:
        """
        Whether other is a 2-dim I-invariant subspace of the factor; such a
        subspace must coincide with this one
        """
        g = self.structure.algebra
        if other.dim != 2 or not other.is_invariant(self.structure.matrix):
            return False
        block = Subspace([g.basis_vector(i) for i in g.block_indices(self.factor)], g.dim)
        if not block.contains_subspace(other):
            return False
        if other != self.subspace:
            raise DecompositionError(f"two distinct invariant planes in factor {self.factor}")
        return True


def unique_invariant_subspace(I: Endomorphism, j: int) -> InvariantSubspace:
    _require_integrable(I)
    d = block_decompose(I, j)
    _, dim_f = subspace_dims(d)
    if dim_f != 1:
        raise DecompositionError(
            f"dim F_{j} = {dim_f} contradicts Prop. propNoRealSolutions"
        )
    plane = invariant_part(I, j)
    if plane.dim != 2 or not plane.is_invariant(I.matrix):
        raise DecompositionError(f"kernel plane of factor {j} is not I-invariant")
    return InvariantSubspace(factor=j, subspace=plane, structure=I)


@dataclass(frozen=True)
class DimensionWitness:
    """Pair u, v in factor j with N_I(u, v) != 0 when dim E <= 1"""
    spanning: str
    u: Vec
    v: Vec
    value: Vec


def _ratio(other: Vec, base: Vec) -> Optional[Fraction]:
    """lambda with other = lambda * base, if any"""
    if base.is_zero():
        return Fraction(0) if other.is_zero() else None
    i = base.support()[0]
    lam = other[i] / base[i]
    return lam if other == lam * base else None


def e_dimension_witness(I: Endomorphism, j: int) -> Optional[DimensionWitness]:
    """
    When dim E_j <= 1, one of A, B, C spans E_j; for each choice try
    u = e_p - lambda e_s, v = e_q - gamma e_s and return the first pair
    with a nonzero Nijenhuis value. None when dim E_j >= 2
    """
    d = block_decompose(I, j)
    dim_e, _ = subspace_dims(d)
    if dim_e >= 2:
        return None
    g = I.algebra
    basis = [g.basis_vector(i) for i in g.block_indices(j)]
    parts = d.block_parts
    for s in range(3):
        p, q = [i for i in range(3) if i != s]
        lam, gamma = _ratio(parts[p], parts[s]), _ratio(parts[q], parts[s])
        if lam is None or gamma is None:
            continue
        u = basis[p] - lam * basis[s]
        v = basis[q] - gamma * basis[s]
        value = nijenhuis(g, I, u, v)
        if not value.is_zero():
            return DimensionWitness(spanning="ABC"[s], u=u, v=v, value=value)
    logger.warning(f"dim E_{j} = {dim_e} but no spanning choice produced a witness")
    return None
