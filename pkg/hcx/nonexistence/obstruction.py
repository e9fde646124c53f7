"""
The final obstruction: a hypercomplex triple on su(2)^m would make
ad_{KE_j} act on factor k as a nonzero scalar, which breaks the Jacobi
identity for KE_j, E_k, IE_k
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
import logging

from ..acstruct import Endomorphism, is_integrable, quaternion_axiom_checks
from ..errors import DecompositionError, LayoutError, NotIntegrableError
from ..liealg import LieAlgebra, Subspace, Vec, bracket
from ..models import ObstructionReport
from ..scalarpoly import Polynomial, format_rational, var
from .decomposition import unique_invariant_subspace

logger = logging.getLogger(__name__)


def _failed(j: int, k: int, hypothesis: str, pair: Optional[Tuple[int, int]] = None) -> ObstructionReport:
    report = ObstructionReport(j=j, k=k, reached=False, failed_hypothesis=hypothesis, failing_pair=pair)
    logger.info(f"obstruction for factors ({j}, {k}): {report.message}")
    return report


def _line_vector(line: Subspace) -> Vec:
    # echelon form already has leading coefficient 1
    return line.basis[0]


def _scalar_on_factor(I: Endomorphism, x: Vec, k: int) -> Optional[Fraction]:
    """lambda with [x, e] = lambda e for every e in factor k, or None"""
    g = I.algebra
    lam = None
    for i in g.block_indices(k):
        e = g.basis_vector(i)
        image = bracket(g, x, e)
        candidate = image[i]
        if image != candidate * e:
            return None
        if lam is None:
            lam = candidate
        elif lam != candidate:
            return None
    return lam


def jacobi_sum(g: LieAlgebra, x: Vec, y: Vec, z: Vec) -> Vec:
    """[x,[y,z]] + [y,[z,x]] + [z,[x,y]] from the structure constants"""
    return bracket(g, x, bracket(g, y, z)) + bracket(g, y, bracket(g, z, x)) + bracket(g, z, bracket(g, x, y))


def hypercomplex_obstruction(I: Endomorphism, J: Endomorphism, K: Endomorphism, j: int, k: int) -> ObstructionReport:
    """
    Chase the hypotheses of the final argument for factors j != k

    Every hypothesis is checked in order: quaternion axioms, integrability
    of I, J, K, existence of the invariant planes U_j, V_j, U_k, V_k, the
    lines U_j ∩ V_j and U_k ∩ V_k, ad_{KE_j} scalar on factor k, and a
    nonzero scalar. The first failure is reported; for genuine inputs this
    is integrability.

    Returns:
        ObstructionReport with the Jacobi residual when every hypothesis held
    """
    g = I.algebra
    if j == k:
        raise LayoutError(f"factors must differ, got j = k = {j}")
    for factor in (j, k):
        g.block(factor)  # LayoutError when out of range

    for name, ok in quaternion_axiom_checks(I, J, K):
        if not ok:
            return _failed(j, k, f"quaternion axiom {name}")
    for label, A in (("I", I), ("J", J), ("K", K)):
        report = is_integrable(g, A)
        if not report.passed:
            pair = report.first_failing_pair.pair if report.first_failing_pair else None
            return _failed(j, k, f"integrability of {label}", pair)

    planes = {}
    for label, A in (("I", I), ("J", J)):
        for factor in (j, k):
            try:
                planes[(label, factor)] = unique_invariant_subspace(A, factor).subspace
            except (DecompositionError, NotIntegrableError) as e:
                logger.warning(f"no invariant plane for {label} on factor {factor}: {e}")
                return _failed(j, k, f"invariant plane of {label} on factor {factor}")

    lines = {}
    for factor in (j, k):
        line = planes[("I", factor)].intersection(planes[("J", factor)])
        if line.dim != 1:
            return _failed(j, k, f"dim U_{factor} ∩ V_{factor} = 1")
        lines[factor] = _line_vector(line)
    E_j, E_k = lines[j], lines[k]

    KE_j = K(E_j)
    lam = _scalar_on_factor(I, KE_j, k)
    if lam is None:
        return _failed(j, k, f"ad_(KE_{j}) is scalar on factor {k}")
    if lam == 0:
        return _failed(j, k, f"lambda_{j}{k} != 0")

    IE_k = I(E_k)
    residual = jacobi_sum(g, KE_j, E_k, IE_k)
    # ad_{KE_j} = lam on factor k turns every term into lam times [E_k, IE_k] up to sign
    predicted = lam * bracket(g, IE_k, E_k)
    if residual != predicted:
        logger.warning(f"Jacobi sum {residual.to_strings()} differs from lambda*[IE_k,E_k] = {predicted.to_strings()}")
        return _failed(j, k, f"ad_(KE_{j}) = lambda on the Jacobi terms for factor {k}")
    logger.info(f"obstruction reached for factors ({j}, {k}) with lambda = {lam}")
    return ObstructionReport(
        j=j, k=k, reached=True,
        e_j=E_j.to_strings(),
        lambda_jk=format_rational(lam),
        jacobi_residual=residual.to_strings(),
        lambda_bracket=predicted.to_strings(),
    )


def _cross(u: Sequence[Polynomial], v: Sequence[Polynomial]) -> List[Polynomial]:
    return [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]


def formal_jacobi_residual() -> Tuple[List[Polynomial], List[Polynomial]]:
    """
    Coordinates of the Jacobi sum for KE_j, E_k, IE_k in su(2) with
    E_k = (p1, p2, p3), IE_k = (q1, q2, q3) and ad_{KE_j} = lam * id

    Returns:
        (residual, lam * [IE_k, E_k]); the two agree as polynomials
    """
    lam = var("lam")
    E = [var(f"p{i}") for i in (1, 2, 3)]
    F = [var(f"q{i}") for i in (1, 2, 3)]

    def ad(v: Sequence[Polynomial]) -> List[Polynomial]:
        return [lam * c for c in v]

    first = ad(_cross(E, F))                     # [KE_j, [E_k, IE_k]]
    second = _cross(E, [-c for c in ad(F)])      # [E_k, [IE_k, KE_j]]
    third = _cross(F, ad(E))                     # [IE_k, [KE_j, E_k]]
    residual = [a + b + c for a, b, c in zip(first, second, third)]
    expected = [lam * c for c in _cross(F, E)]
    return residual, expected
