"""
Formal vectors: linear combinations of named labels with polynomial
coefficients, and the canonical orientation of formal brackets
"""
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import re

from ..errors import InputError
from ..scalarpoly import Polynomial, Scalar

# Cyclic triples whose brackets are written in cyclic order: [X,Y], [Y,Z], [Z,X]
CYCLES: Tuple[Tuple[str, str, str], ...] = (
    ("X", "Y", "Z"),
    ("KEj", "Ek", "IEk"),
)

_PREFERRED_ORDER = ["e1", "e2", "e3", "X", "Y", "Z", "[X,Y]", "[Y,Z]", "[Z,X]"]
_OPERATORS = "IJK"

Coefficient = Union[Polynomial, Scalar]


def label_key(label: str) -> tuple:
    if label in _PREFERRED_ORDER:
        return (0, _PREFERRED_ORDER.index(label), label)
    return (1 + label.count("["), 0, label)


def split_label(label: str) -> Tuple[str, Optional[Tuple[str, str]], str]:
    """
    Split a label into (operator prefix, bracket arguments or None, base)

    "I[KEj,Ek]" -> ("I", ("KEj", "Ek"), "")
    "IJEj"      -> ("IJ", None, "Ej")
    """
    i = 0
    while i < len(label) and label[i] in _OPERATORS and i + 1 < len(label) and (
        label[i + 1] in _OPERATORS or label[i + 1] == "[" or label[i + 1].isupper()
    ):
        i += 1
    prefix, core = label[:i], label[i:]
    if not core.startswith("["):
        return prefix, None, core
    if not core.endswith("]"):
        raise InputError(f"malformed bracket label {label!r}")
    depth = 0
    inner = core[1:-1]
    for pos, ch in enumerate(inner):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            return prefix, (inner[:pos], inner[pos + 1:]), ""
    raise InputError(f"malformed bracket label {label!r}")


def rename_label(label: str, mapping: Mapping[str, str]) -> str:
    prefix, args, base = split_label(label)
    if args is None:
        return prefix + mapping.get(base, base)
    return f"{prefix}[{rename_label(args[0], mapping)},{rename_label(args[1], mapping)}]"


def _rewrite_prefix(prefix: str, rules: Sequence[Tuple[str, str, int]]) -> Tuple[int, str]:
    sign = 1
    changed = True
    while changed:
        changed = False
        for lhs, rhs, rule_sign in rules:
            if lhs in prefix:
                prefix = prefix.replace(lhs, rhs, 1)
                sign *= rule_sign
                changed = True
    return sign, prefix


def orient(a: str, b: str) -> Tuple[int, Optional[str]]:
    """
    Canonical form of the bracket [a, b] as (sign, label); (0, None) when a == b
    """
    if a == b:
        return 0, None
    for cycle in CYCLES:
        if a in cycle and b in cycle:
            pa, pb = cycle.index(a), cycle.index(b)
            if (pb - pa) % 3 == 1:
                return 1, f"[{a},{b}]"
            return -1, f"[{b},{a}]"
    if a < b:
        return 1, f"[{a},{b}]"
    return -1, f"[{b},{a}]"


def canonical_label(label: str, rules: Sequence[Tuple[str, str, int]] = ()) -> Tuple[int, Optional[str]]:
    """
    Rewrite operator prefixes by the rules and orient every bracket;
    returns (sign, label) or (0, None) for a vanishing label
    """
    prefix, args, base = split_label(label)
    sign, prefix = _rewrite_prefix(prefix, rules)
    if args is None:
        return sign, prefix + base
    sa, a = canonical_label(args[0], rules)
    sb, b = canonical_label(args[1], rules)
    if not sa or not sb:
        return 0, None
    so, core = orient(a, b)
    if not so:
        return 0, None
    return sign * sa * sb * so, prefix + core


def parse_rule(text: str) -> Tuple[str, str, int]:
    """"IJ=>K" or "JI=>-K" """
    m = re.match(r"^\s*([IJK]+)\s*=>\s*(-?)([IJK]*)\s*$", text)
    if not m:
        raise InputError(f"malformed rewrite rule {text!r}")
    lhs, minus, rhs = m.groups()
    return lhs, rhs, -1 if minus else 1


class FormalVector:
    """Finite formal combination sum_label coeff * label with polynomial coefficients"""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Optional[Mapping[str, Coefficient]] = None):
        clean: Dict[str, Polynomial] = {}
        for label, c in (coeffs or {}).items():
            c = Polynomial.coerce(c)
            if not c.is_zero():
                clean[label] = clean[label] + c if label in clean else c
                if clean[label].is_zero():
                    del clean[label]
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FormalVector is immutable")

    @classmethod
    def atom(cls, label: str, coeff: Coefficient = 1) -> "FormalVector":
        return cls({label: coeff})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, Coefficient]]) -> "FormalVector":
        total = cls()
        for label, c in pairs:
            total = total + cls.atom(label, c)
        return total

    @classmethod
    def parse(cls, text: str) -> "FormalVector":
        """"<X: -a3j | Y: -b3j | [X,Y]: -1>" or "<0>" """
        text = text.strip()
        if not (text.startswith("<") and text.endswith(">")):
            raise InputError(f"not a formal vector: {text!r}")
        body = text[1:-1].strip()
        if body == "0" or not body:
            return cls()
        coeffs: Dict[str, Polynomial] = {}
        for part in body.split(" | "):
            label, sep, value = part.partition(": ")
            if not sep:
                raise InputError(f"malformed formal vector term {part!r}")
            coeffs[label.strip()] = Polynomial.parse(value)
        return cls(coeffs)

    # inspection ---------------------------------------------------------

    def labels(self) -> Tuple[str, ...]:
        return tuple(sorted(self._coeffs, key=label_key))

    def coefficient(self, label: str) -> Polynomial:
        return self._coeffs.get(label, Polynomial())

    def items(self) -> List[Tuple[str, Polynomial]]:
        return [(label, self._coeffs[label]) for label in self.labels()]

    def is_zero(self) -> bool:
        return not self._coeffs

    def support(self) -> frozenset:
        return frozenset(self._coeffs)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: "FormalVector") -> "FormalVector":
        if not isinstance(other, FormalVector):
            return NotImplemented
        coeffs = dict(self._coeffs)
        for label, c in other._coeffs.items():
            coeffs[label] = coeffs[label] + c if label in coeffs else c
        return FormalVector(coeffs)

    def __neg__(self) -> "FormalVector":
        return FormalVector({label: -c for label, c in self._coeffs.items()})

    def __sub__(self, other: "FormalVector") -> "FormalVector":
        if not isinstance(other, FormalVector):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Coefficient) -> "FormalVector":
        c = Polynomial.coerce(c)
        return FormalVector({label: c * v for label, v in self._coeffs.items()})

    def __rmul__(self, c: Coefficient) -> "FormalVector":
        if not isinstance(c, (Polynomial, int, Fraction)):
            return NotImplemented
        return self.scale(c)

    def map_coefficients(self, fn: Callable[[Polynomial], Polynomial]) -> "FormalVector":
        return FormalVector({label: fn(c) for label, c in self._coeffs.items()})

    def substitute(self, bindings: Mapping[str, Coefficient]) -> "FormalVector":
        """Substitute variables inside the coefficients"""
        return self.map_coefficients(lambda c: c.substitute(bindings))

    def canonical(self, rules: Sequence[Tuple[str, str, int]] = ()) -> "FormalVector":
        total: Dict[str, Polynomial] = {}
        for label, c in self._coeffs.items():
            sign, new_label = canonical_label(label, rules)
            if not sign:
                continue
            term = c * sign
            total[new_label] = total[new_label] + term if new_label in total else term
        return FormalVector(total)

    def relabel(self, mapping: Mapping[str, str]) -> "FormalVector":
        """Rename atomic labels everywhere, including inside brackets, then reorient"""
        return FormalVector.from_pairs(
            (rename_label(label, mapping), c) for label, c in self._coeffs.items()
        ).canonical()

    def with_prefix(self, prefix: str) -> "FormalVector":
        """Apply a formal linear operator to every label"""
        if not prefix:
            return self
        return FormalVector({prefix + label: c for label, c in self._coeffs.items()})

    def replace_labels(self, bindings: Mapping[str, "FormalVector"], inside_brackets: bool = False) -> "FormalVector":
        """
        Replace labels (or the bracket core of an operator-prefixed label)
        by formal vectors

        With inside_brackets, bound labels that occur as bracket arguments are
        replaced too and the bracket is expanded bilinearly.
        """
        total = FormalVector()
        for label, c in self._coeffs.items():
            total = total + _replace_label(label, bindings, inside_brackets).scale(c)
        return total.canonical()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalVector):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __str__(self) -> str:
        if not self._coeffs:
            return "<0>"
        return "<" + " | ".join(f"{label}: {c}" for label, c in self.items()) + ">"

    def __repr__(self) -> str:
        return f"FormalVector({str(self)!r})"


def _replace_label(label: str, bindings: Mapping[str, FormalVector], inside_brackets: bool) -> FormalVector:
    if label in bindings:
        return bindings[label]
    prefix, args, _ = split_label(label)
    if args is None:
        return FormalVector.atom(label)
    core = label[len(prefix):]
    if prefix and core in bindings:
        return bindings[core].with_prefix(prefix)
    if inside_brackets:
        left = _replace_label(args[0], bindings, True)
        right = _replace_label(args[1], bindings, True)
        if left != FormalVector.atom(args[0]) or right != FormalVector.atom(args[1]):
            return formal_bracket(left, right).with_prefix(prefix)
    return FormalVector.atom(label)


AtomBracket = Callable[[str, str], FormalVector]


def canonical_atom_bracket(a: str, b: str) -> FormalVector:
    sign, label = orient(a, b)
    if not sign:
        return FormalVector()
    return FormalVector.atom(label, sign)


def formal_bracket(u: FormalVector, v: FormalVector, atom_bracket: AtomBracket = canonical_atom_bracket) -> FormalVector:
    """Bilinear extension of a bracket on labels"""
    total = FormalVector()
    for a, ca in u.items():
        for b, cb in v.items():
            total = total + atom_bracket(a, b).scale(ca * cb)
    return total


def binding_from_license(license: FormalVector, label: str) -> Optional[FormalVector]:
    """
    If license = c*label + rest with c a nonzero constant, return the value
    -rest/c that license = 0 assigns to label
    """
    c = license.coefficient(label)
    if c.is_zero() or not c.is_constant():
        return None
    value = c.constant_value()
    rest = license - FormalVector.atom(label, c)
    return rest.scale(Fraction(-1) / value)


def is_bracket_label(label: str) -> bool:
    return "[" in label
