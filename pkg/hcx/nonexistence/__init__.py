"""
Block decomposition, the symbolic constraint system, certificates and the
final obstruction for su(2)^m
"""
from .certificate import Certificate
from .checker import replay, verify
from .decomposition import block_decompose, check_seven_conditions, subspace_dims, unique_invariant_subspace
from .obstruction import formal_jacobi_residual, hypercomplex_obstruction
from .proofs import (
    derive_equalities,
    derive_identities,
    infeasibility_certificate,
    theorem_certificate,
    xyz_dependence_certificate,
)
from .symbolic import symbolic_system

__all__ = [
    "Certificate",
    "replay",
    "verify",
    "block_decompose",
    "check_seven_conditions",
    "subspace_dims",
    "unique_invariant_subspace",
    "formal_jacobi_residual",
    "hypercomplex_obstruction",
    "derive_equalities",
    "derive_identities",
    "infeasibility_certificate",
    "theorem_certificate",
    "xyz_dependence_certificate",
    "symbolic_system",
]
