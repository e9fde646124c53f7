"""
Lie algebras by structure constants: su(2), direct sums, brackets,
factor projections and injections, and independence utilities
"""
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union
import itertools
import logging
import re

from .errors import DimensionMismatchError, InputError, LayoutError, NotABasisError
from .scalarpoly import Matrix, Scalar, format_rational, rank, to_rational

logger = logging.getLogger(__name__)


class Vec:
    """Coordinate vector over the rationals"""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[Union[Scalar, str]]):
        object.__setattr__(self, "coords", tuple(to_rational(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("Vec is immutable")

    @classmethod
    def zero(cls, n: int) -> "Vec":
        return cls([0] * n)

    @classmethod
    def basis(cls, n: int, i: int) -> "Vec":
        """Standard basis vector e_i, 0-based"""
        return cls([1 if k == i else 0 for k in range(n)])

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: "Vec") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"vectors of length {self.dim} and {other.dim}")

    def __add__(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Vec":
        return Vec(-a for a in self.coords)

    def __mul__(self, c: Scalar) -> "Vec":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return Vec(c * a for a in self.coords)

    __rmul__ = __mul__

    def dot(self, other: "Vec") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.coords, other.coords)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.coords) if a != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vec):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def to_strings(self) -> List[str]:
        return [format_rational(a) for a in self.coords]

    def __repr__(self) -> str:
        return f"Vec({', '.join(self.to_strings())})"


def _span_rows(vectors: Sequence[Vec], ambient_dim: int) -> Tuple[Vec, ...]:
    for v in vectors:
        if v.dim != ambient_dim:
            raise DimensionMismatchError(f"vector of length {v.dim} in a {ambient_dim}-dim space")
    if not vectors:
        return ()
    reduced, pivots = Matrix.from_rows([v.coords for v in vectors]).rref()
    return tuple(Vec(reduced.row(i)) for i in range(len(pivots)))


class Subspace:
    """
    Linear subspace stored by its reduced row-echelon basis, so that equal
    subspaces have equal bases
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, vectors: Sequence[Vec], ambient_dim: int):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", _span_rows(list(vectors), ambient_dim))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, vectors: Sequence[Vec], ambient_dim: Optional[int] = None) -> "Subspace":
        if ambient_dim is None:
            if not vectors:
                raise DimensionMismatchError("ambient dimension of an empty span is unknown")
            ambient_dim = vectors[0].dim
        return cls(vectors, ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vec) -> bool:
        return rank([b.coords for b in self.basis] + [v.coords]) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatchError("subspaces of different ambient spaces")
        if not self.basis or not other.basis:
            return Subspace([], self.ambient_dim)
        columns = [b.coords for b in self.basis] + [(-b).coords for b in other.basis]
        kernel = Matrix.from_columns(columns).nullspace()
        vectors = []
        for k in kernel:
            v = Vec.zero(self.ambient_dim)
            for alpha, b in zip(k[:self.dim], self.basis):
                v = v + alpha * b
            vectors.append(v)
        return Subspace(vectors, self.ambient_dim)

    def is_invariant(self, m: Matrix) -> bool:
        """Whether m (acting on column vectors) maps the subspace into itself"""
        return all(self.contains(Vec(m.apply(b.coords))) for b in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def to_strings(self) -> List[List[str]]:
        return [b.to_strings() for b in self.basis]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={[repr(b) for b in self.basis]})"


Layout = Tuple[Tuple[int, int], ...]


class LieAlgebra:
    """
    Finite-dimensional Lie algebra given by structure constants
    [e_i, e_j] = sum_k c[i][j][k] e_k in a fixed basis (0-based internally)
    """

    __slots__ = ("dim", "structure", "factor_layout", "name")

    def __init__(
        self,
        dim: int,
        structure: Mapping[Tuple[int, int, int], Scalar],
        factor_layout: Optional[Sequence[Tuple[int, int]]] = None,
        name: str = "",
    ):
        table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j, k), c in structure.items():
            if not all(0 <= n < dim for n in (i, j, k)):
                raise DimensionMismatchError(f"structure index ({i},{j},{k}) outside dimension {dim}")
            c = Fraction(c)
            if c != 0:
                table.setdefault((i, j), {})[k] = c
        frozen = {pair: tuple(sorted(row.items())) for pair, row in table.items()}
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "structure", frozen)
        object.__setattr__(self, "factor_layout", tuple(tuple(b) for b in factor_layout) if factor_layout is not None else None)
        object.__setattr__(self, "name", name)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return dict(self.structure.get((i, j), ())).get(k, Fraction(0))

    def basis_vector(self, i: int) -> Vec:
        return Vec.basis(self.dim, i)

    # factors ------------------------------------------------------------

    @property
    def factor_count(self) -> int:
        if self.factor_layout is None:
            raise LayoutError(f"algebra '{self.name or self.dim}' has no factor layout")
        return len(self.factor_layout)

    def block(self, j: int) -> Tuple[int, int]:
        """(offset, size) of factor j, 1-based"""
        m = self.factor_count
        if not 1 <= j <= m:
            raise LayoutError(f"factor index {j} outside 1..{m}")
        return self.factor_layout[j - 1]

    def block_indices(self, j: int) -> range:
        offset, size = self.block(j)
        return range(offset, offset + size)

    def factor_of(self, index: int) -> int:
        for j, (offset, size) in enumerate(self.factor_layout or (), start=1):
            if offset <= index < offset + size:
                return j
        raise LayoutError(f"basis index {index} lies in no factor")

    # axioms -------------------------------------------------------------

    def is_antisymmetric(self) -> bool:
        return all(
            self.constant(i, j, k) == -self.constant(j, i, k)
            for i in range(self.dim) for j in range(self.dim) for k in range(self.dim)
        )

    def jacobi_violations(self) -> List[Tuple[int, int, int]]:
        bad = []
        # the cyclic sum is alternating, so ordered triples suffice
        for i, j, k in itertools.combinations(range(self.dim), 3):
            ei, ej, ek = (self.basis_vector(n) for n in (i, j, k))
            total = (
                bracket(self, bracket(self, ei, ej), ek)
                + bracket(self, bracket(self, ej, ek), ei)
                + bracket(self, bracket(self, ek, ei), ej)
            )
            if not total.is_zero():
                bad.append((i, j, k))
        return bad

    def satisfies_jacobi(self) -> bool:
        return not self.jacobi_violations()

    def respects_layout(self) -> bool:
        if self.factor_layout is None:
            return True
        for (i, j), row in self.structure.items():
            fi, fj = self.factor_of(i), self.factor_of(j)
            if fi != fj:
                return False
            if any(self.factor_of(k) != fi for k, _ in row):
                return False
        return True

    def is_abelian(self) -> bool:
        return not self.structure

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim, self.structure, self.factor_layout) == (other.dim, other.structure, other.factor_layout)

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self.structure.items())), self.factor_layout))

    def __repr__(self) -> str:
        return f"LieAlgebra(name={self.name!r}, dim={self.dim})"


def su2() -> LieAlgebra:
    """su(2) with [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2"""
    structure = {}
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        structure[(i, j, k)] = 1
        structure[(j, i, k)] = -1
    return LieAlgebra(3, structure, name="su2")


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, name=f"abelian{n}")


def direct_sum(factors: Sequence[LieAlgebra], name: Optional[str] = None) -> LieAlgebra:
    """Componentwise direct sum; records the factor layout"""
    structure = {}
    layout = []
    offset = 0
    for g in factors:
        for (i, j), row in g.structure.items():
            for k, c in row:
                structure[(offset + i, offset + j, offset + k)] = c
        layout.append((offset, g.dim))
        offset += g.dim
    name = name or "+".join(g.name or str(g.dim) for g in factors)
    return LieAlgebra(offset, structure, factor_layout=layout, name=name)


def su2_power(m: int) -> LieAlgebra:
    return direct_sum([su2()] * m, name=f"su2^{m}")


def bracket(g: LieAlgebra, x: Vec, y: Vec) -> Vec:
    """Bilinear extension of the structure constants"""
    if x.dim != g.dim or y.dim != g.dim:
        raise DimensionMismatchError(f"bracket of vectors of length {x.dim}, {y.dim} in a {g.dim}-dim algebra")
    out = [Fraction(0)] * g.dim
    xs = [(i, a) for i, a in enumerate(x.coords) if a]
    ys = [(j, b) for j, b in enumerate(y.coords) if b]
    for i, a in xs:
        for j, b in ys:
            for k, c in g.structure.get((i, j), ()):
                out[k] += a * b * c
    return Vec(out)


def ad_matrix(g: LieAlgebra, x: Vec) -> Matrix:
    """Matrix of ad_x in the column-action convention"""
    columns = [bracket(g, x, g.basis_vector(i)).coords for i in range(g.dim)]
    return Matrix.from_columns(columns)


def inject(x: Vec, j: int, m: int) -> Vec:
    """Place an su(2) vector in factor j of su(2)^m"""
    if x.dim != 3:
        raise DimensionMismatchError(f"expected an su(2) vector, got length {x.dim}")
    if not 1 <= j <= m:
        raise LayoutError(f"factor index {j} outside 1..{m}")
    coords = [Fraction(0)] * (3 * m)
    coords[3 * (j - 1):3 * j] = x.coords
    return Vec(coords)


def component(g: LieAlgebra, x: Vec, j: int) -> Vec:
    """Keep block j of x and zero the rest; ambient dimension is preserved"""
    if x.dim != g.dim:
        raise DimensionMismatchError(f"vector of length {x.dim} in a {g.dim}-dim algebra")
    indices = g.block_indices(j)
    return Vec(a if i in indices else 0 for i, a in enumerate(x.coords))


def restrict(g: LieAlgebra, x: Vec, j: int) -> Vec:
    """Coordinates of block j of x, as a vector of the factor"""
    indices = g.block_indices(j)
    return Vec(x.coords[indices.start:indices.stop])


def independent_iff_bracket_nonzero(x: Vec, y: Vec) -> Tuple[bool, bool]:
    """
    For x, y in su(2): (x, y linearly independent, [x, y] != 0)

    The two flags always agree. When they are both true, {x, y, [x, y]} is a basis.
    """
    g = su2()
    independent = rank([x.coords, y.coords]) == 2
    z = bracket(g, x, y)
    nonzero = not z.is_zero()
    if independent != nonzero:
        logger.error(f"independence ({independent}) and bracket ({nonzero}) disagree for {x}, {y}")
    return independent, nonzero


def brackets_of_basis(x: Vec, y: Vec, z: Vec) -> Subspace:
    """span{[x,y], [y,z], [z,x]} for a basis {x, y, z} of su(2)"""
    if rank([x.coords, y.coords, z.coords]) != 3:
        raise NotABasisError("vectors do not form a basis of su(2)")
    g = su2()
    return Subspace.span([bracket(g, x, y), bracket(g, y, z), bracket(g, z, x)], 3)


# JSON -----------------------------------------------------------------------

_SU2_POWER = re.compile(r"^\s*su2\s*(?:\^\s*(\d+))?\s*$")


def parse_algebra_spec(text: str) -> Optional[LieAlgebra]:
    """"su2", "su2^m"; None if text is not such a shorthand"""
    m = _SU2_POWER.match(text)
    if not m:
        return None
    power = int(m.group(1) or 1)
    if power < 1:
        raise InputError("su2 power must be at least 1")
    return su2_power(power)


def algebra_from_payload(payload) -> LieAlgebra:
    """
    Build an algebra from a validated LieAlgebraPayload. Structure entries
    are 1-based [i, j, k, "p/q"]; the antisymmetric partner of an entry is
    filled in when absent
    """
    if payload.su2_power is not None:
        return su2_power(payload.su2_power)
    dim = payload.dim
    structure: Dict[Tuple[int, int, int], Fraction] = {}
    for i, j, k, c in payload.structure:
        key = (i - 1, j - 1, k - 1)
        if not all(0 <= n < dim for n in key):
            raise InputError(f"structure entry [{i}, {j}, {k}] outside 1..{dim}")
        structure[key] = to_rational(c)
    for (i, j, k), c in list(structure.items()):
        partner = structure.get((j, i, k))
        if partner is None:
            structure[(j, i, k)] = -c
        elif partner != -c:
            raise InputError(f"structure entries [{i + 1}, {j + 1}, {k + 1}] and [{j + 1}, {i + 1}, {k + 1}] are not antisymmetric")
    layout = [tuple(b) for b in payload.factor_layout] if payload.factor_layout else None
    g = LieAlgebra(dim, structure, factor_layout=layout, name="custom")
    if not g.satisfies_jacobi():
        raise InputError("structure constants violate the Jacobi identity")
    if not g.respects_layout():
        raise InputError("structure constants do not respect the factor layout")
    return g


def vec_from_strings(values: Sequence[Union[str, int]]) -> Vec:
    return Vec(to_rational(v) for v in values)
