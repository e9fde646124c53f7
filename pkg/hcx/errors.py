"""
Exception hierarchy for hcx
"""
from typing import Optional, Tuple


class HcxError(Exception):
    """Base class for every error raised by hcx"""


class DimensionMismatchError(HcxError):
    """Operands live in spaces of different dimension"""


class DivisionByZeroError(HcxError):
    """Exact division by a zero rational"""


class MissingVariableError(HcxError):
    """A polynomial was evaluated without a value for one of its variables"""

    def __init__(self, variable: str):
        super().__init__(f"no value assigned to variable '{variable}'")
        self.variable = variable


class NotABasisError(HcxError):
    """Vectors that were required to form a basis do not"""


class LayoutError(HcxError):
    """Missing factor layout or a factor index out of range"""


class QuaternionAxiomError(HcxError):
    """A triple violates one of the algebraic quaternion axioms"""

    def __init__(self, axiom: str):
        super().__init__(f"quaternion axiom violated: {axiom}")
        self.axiom = axiom


class NotIntegrableError(HcxError):
    """An endomorphism expected to be integrable is not"""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class DecompositionError(HcxError):
    """A structural decomposition could not be carried out"""


class CertificateError(HcxError):
    """Certificate construction or replay failed"""

    def __init__(self, message: str, step: Optional[int] = None):
        prefix = f"step {step}: " if step is not None else ""
        super().__init__(prefix + message)
        self.step = step


class InputError(HcxError):
    """A user supplied file or value could not be parsed"""
