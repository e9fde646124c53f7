"""
Symbolic expansion of N_I(e_p(j), e_q(j)) = 0 into nine scalar and three
vector equations in the block coefficients of I
"""
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Tuple, Union
import logging

import yaml

from ..errors import InputError
from ..liealg import LieAlgebra, Vec, bracket
from ..scalarpoly import Polynomial
from .decomposition import LETTERS, BlockDecomposition, FactorSymbol, coefficient_name
from .formal import FormalVector, canonical_atom_bracket, formal_bracket, split_label

logger = logging.getLogger(__name__)

BLOCK_LABELS = ("e1", "e2", "e3")
OFF_BLOCK_LABELS = ("X", "Y", "Z")
PAIRS = ((1, 2), (2, 3), (3, 1))

# name, anchor of each generated equation, in generation order
EQUATIONS: List[Tuple[str, str]] = [
    ("N12.e1", "eqE1E2coeffE1"),
    ("N12.e2", "eqE1E2coeffE2"),
    ("N12.e3", "eqE1E2coeffE3"),
    ("N23.e1", "eqE2E3coeffE1"),
    ("N23.e2", "eqE2E3coeffE2"),
    ("N23.e3", "eqE2E3coeffE3"),
    ("N31.e1", "eqE3E1coeffE1"),
    ("N31.e2", "eqE3E1coeffE2"),
    ("N31.e3", "eqE3E1coeffE3"),
    ("N12.other", "eqE1E2coeffOther"),
    ("N23.other", "eqE2E3coeffOther"),
    ("N31.other", "eqE3E1coeffOther"),
]
ANCHORS = dict(EQUATIONS)

_SU2 = {
    ("e1", "e2"): ("e3", 1),
    ("e2", "e3"): ("e1", 1),
    ("e3", "e1"): ("e2", 1),
}


def block_atom_bracket(a: str, b: str) -> FormalVector:
    """su(2) on e1, e2, e3; zero across the factor; formal among off-block labels"""
    a_block, b_block = a in BLOCK_LABELS, b in BLOCK_LABELS
    if a_block and b_block:
        if (a, b) in _SU2:
            label, sign = _SU2[(a, b)]
            return FormalVector.atom(label, sign)
        if (b, a) in _SU2:
            label, sign = _SU2[(b, a)]
            return FormalVector.atom(label, -sign)
        return FormalVector()
    if a_block or b_block:
        return FormalVector()
    return canonical_atom_bracket(a, b)


@dataclass(frozen=True)
class ConstraintSystem:
    """Nine scalar and three vector equations for one factor"""
    factor: FactorSymbol
    scalar_equations: Tuple[Polynomial, ...]
    vector_equations: Tuple[FormalVector, ...]

    def __post_init__(self):
        if len(self.scalar_equations) != 9 or len(self.vector_equations) != 3:
            raise ValueError("a constraint system has 9 scalar and 3 vector equations")

    def named(self) -> List[Tuple[str, Union[Polynomial, FormalVector]]]:
        values = list(self.scalar_equations) + list(self.vector_equations)
        return [(name, value) for (name, _), value in zip(EQUATIONS, values)]

    def equation(self, name: str) -> Union[Polynomial, FormalVector]:
        return dict(self.named())[name]

    def variables(self) -> List[str]:
        return [coefficient_name(letter, row, self.factor) for letter in LETTERS for row in (1, 2, 3)]

    def to_text(self) -> str:
        return "\n".join(f"{name}: {value} = 0" for name, value in self.named()) + "\n"


class _SymbolicStructure:
    """I e_r = (block part with coefficient symbols) + off-block symbol"""

    def __init__(self, factor: FactorSymbol):
        self.images: Dict[str, FormalVector] = {}
        for letter, label, off in zip(LETTERS, BLOCK_LABELS, OFF_BLOCK_LABELS):
            pairs = [(BLOCK_LABELS[row - 1], Polynomial.var(coefficient_name(letter, row, factor))) for row in (1, 2, 3)]
            self.images[label] = FormalVector.from_pairs(pairs + [(off, 1)])

    def __call__(self, v: FormalVector) -> FormalVector:
        total = FormalVector()
        for label, c in v.items():
            if label not in self.images:
                raise ValueError(f"the structure is only known on the factor basis, not on {label!r}")
            total = total + self.images[label].scale(c)
        return total


def symbolic_nijenhuis(factor: FactorSymbol, p: int, q: int) -> FormalVector:
    I = _SymbolicStructure(factor)
    ep, eq = FormalVector.atom(f"e{p}"), FormalVector.atom(f"e{q}")
    Iep, Ieq = I(ep), I(eq)

    def br(u, v):
        return formal_bracket(u, v, block_atom_bracket)

    return I(br(Iep, eq)) + I(br(ep, Ieq)) + br(ep, eq) - br(Iep, Ieq)


def symbolic_system(factor: FactorSymbol = "j") -> ConstraintSystem:
    """
    Expand the Nijenhuis tensor on the three basis pairs of factor j and
    collect coefficients of e1, e2, e3 and of the off-block labels
    """
    scalars: List[Polynomial] = []
    vectors: List[FormalVector] = []
    for p, q in PAIRS:
        n = symbolic_nijenhuis(factor, p, q)
        scalars.extend(n.coefficient(label) for label in BLOCK_LABELS)
        vectors.append(FormalVector({label: c for label, c in n.items() if label not in BLOCK_LABELS}))
    logger.debug(f"generated the constraint system for factor {factor}")
    return ConstraintSystem(factor=factor, scalar_equations=tuple(scalars), vector_equations=tuple(vectors))


# Reference comparison ----------------------------------------------------------

@dataclass(frozen=True)
class EquationMatch:
    name: str
    anchor: str
    sign: int
    generated: str
    reference: str

    @property
    def matched(self) -> bool:
        return self.sign != 0


def load_reference_equations() -> List[dict]:
    """Printed equations, written with the factor symbol j"""
    text = resources.files("hcx.data").joinpath("reference_equations.yaml").read_text(encoding="utf-8")
    data = yaml.safe_load(text)
    return data["equations"]


def _rename_factor(factor: FactorSymbol) -> Dict[str, str]:
    return {
        coefficient_name(letter, row, "j"): coefficient_name(letter, row, factor)
        for letter in LETTERS for row in (1, 2, 3)
    }


def _parse_reference(entry: dict, factor: FactorSymbol) -> Union[Polynomial, FormalVector]:
    mapping = _rename_factor(factor)
    if entry["kind"] == "vector":
        return FormalVector.parse(entry["text"]).map_coefficients(lambda c: c.rename(mapping))
    if entry["kind"] == "scalar":
        return Polynomial.parse(entry["text"]).rename(mapping)
    raise InputError(f"unknown reference equation kind {entry['kind']!r}")


def compare_with_reference(system: ConstraintSystem, reference: Optional[List[dict]] = None) -> List[EquationMatch]:
    """Match each generated equation against its printed form up to overall sign"""
    reference = reference if reference is not None else load_reference_equations()
    by_name = {entry["name"]: entry for entry in reference}
    matches = []
    for name, value in system.named():
        entry = by_name.get(name)
        if entry is None:
            matches.append(EquationMatch(name, ANCHORS[name], 0, str(value), "<missing>"))
            continue
        expected = _parse_reference(entry, system.factor)
        if value == expected:
            sign = 1
        elif value == -expected:
            sign = -1
        else:
            sign = 0
            logger.warning(f"{name} does not match {entry['anchor']}")
        matches.append(EquationMatch(name, entry["anchor"], sign, str(value), str(expected)))
    return matches


# Evaluation on concrete structures -----------------------------------------------

def _label_vector(g: LieAlgebra, d: BlockDecomposition, label: str) -> Vec:
    prefix, args, base = split_label(label)
    if prefix:
        raise ValueError(f"cannot evaluate operator label {label!r}")
    if args is None:
        return dict(zip(OFF_BLOCK_LABELS, d.off_block_parts))[base]
    return bracket(g, _label_vector(g, d, args[0]), _label_vector(g, d, args[1]))


def evaluate_system(system: ConstraintSystem, d: BlockDecomposition, g: LieAlgebra) -> Dict[str, Union[Fraction, Vec]]:
    """Value of every equation on a concrete decomposition; all vanish for integrable I"""
    assignment = d.assignment(system.factor)
    values: Dict[str, Union[Fraction, Vec]] = {}
    for name, eq in system.named():
        if isinstance(eq, Polynomial):
            values[name] = eq.evaluate(assignment)
            continue
        total = Vec.zero(g.dim)
        for label, c in eq.items():
            total = total + c.evaluate(assignment) * _label_vector(g, d, label)
        values[name] = total
    return values


def system_vanishes(values: Dict[str, Union[Fraction, Vec]]) -> bool:
    return all((v.is_zero() if isinstance(v, Vec) else v == 0) for v in values.values())
