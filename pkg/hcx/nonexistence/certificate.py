"""
Certificate data types and the line-oriented text format

A certificate is a list of premises followed by numbered steps:

    P <name> <role> [from <ref>,<ref>] -> <value> ; <anchor>
    <index> <kind> <json data> -> <output> ; <anchor>
    QED <contradiction kind>

Lines starting with "#" are comments. A premise with a "from" list is a consequence
of the listed premises or discharged steps and may only be used once they are established.
"""
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple, Union
import json
import logging
import re

from ..errors import CertificateError, InputError
from ..models import PremiseRole, StepKind
from ..scalarpoly import Polynomial
from .formal import FormalVector, parse_rule

logger = logging.getLogger(__name__)

Value = Union[Polynomial, FormalVector]
PremiseValue = Union[Polynomial, FormalVector, Tuple[str, ...], str]


def dump_data(data: Dict[str, Any]) -> str:
    """Compact, key-sorted JSON; polynomial and rational objects become their text"""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)


def normalize_data(data: Dict[str, Any]) -> Dict[str, Any]:
    return json.loads(dump_data(data))


def parse_value(text: str) -> Value:
    text = text.strip()
    if text.startswith("<"):
        return FormalVector.parse(text)
    return Polynomial.parse(text)


def coerce_value(value: Union[Value, str, int]) -> Value:
    if isinstance(value, (Polynomial, FormalVector)):
        return value
    if isinstance(value, str):
        return parse_value(value)
    return Polynomial.constant(value)


_STEP_REF = re.compile(r"#(\d+)")


def renumber_refs(obj: Any, mapping: Callable[[int], int]) -> Any:
    """Rewrite every "#n" step reference inside strings, lists and dicts through mapping"""
    if isinstance(obj, str):
        return _STEP_REF.sub(lambda m: f"#{mapping(int(m.group(1)))}", obj)
    if isinstance(obj, list):
        return [renumber_refs(item, mapping) for item in obj]
    if isinstance(obj, dict):
        return {key: renumber_refs(value, mapping) for key, value in obj.items()}
    return obj


@dataclass(frozen=True)
class Premise:
    """
    A named assumption: an equation, a non-vanishing, a basis, a rewrite rule or a hypothesis

    A premise with givens is a consequence of those premise names, earlier steps ("#n")
    or discharged hypotheses ("#n!name"); the checker resolves them when it is cited.
    """
    name: str
    role: PremiseRole
    value: PremiseValue
    anchor: str
    given: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name or any(c in self.name for c in " @!,") or self.name.startswith("#"):
            raise CertificateError(f"invalid premise name {self.name!r}")
        expected = {
            PremiseRole.EQ: Polynomial, PremiseRole.NZ: Polynomial, PremiseRole.HYP: Polynomial,
            PremiseRole.VEQ: FormalVector, PremiseRole.VNZ: FormalVector,
            PremiseRole.BASIS: tuple, PremiseRole.HYP_BASIS: tuple, PremiseRole.RULE: str,
        }[self.role]
        if not isinstance(self.value, expected):
            raise CertificateError(f"premise {self.name} with role {self.role.value} needs a {expected.__name__}")
        if self.role == PremiseRole.RULE:
            parse_rule(self.value)
        if self.role.is_hypothesis and self.given:
            raise CertificateError(f"hypothesis {self.name} cannot have givens")
        if any(not ref or " " in ref or "," in ref for ref in self.given):
            raise CertificateError(f"premise {self.name} has a malformed given list {self.given!r}")

    def value_text(self) -> str:
        if self.role in (PremiseRole.BASIS, PremiseRole.HYP_BASIS):
            return json.dumps(list(self.value), separators=(",", ":"))
        return str(self.value)

    def to_line(self) -> str:
        given = f" from {','.join(self.given)}" if self.given else ""
        return f"P {self.name} {self.role.value}{given} -> {self.value_text()} ; {self.anchor}"

    @classmethod
    def parse_value(cls, role: PremiseRole, text: str) -> PremiseValue:
        if role in (PremiseRole.EQ, PremiseRole.NZ, PremiseRole.HYP):
            return Polynomial.parse(text)
        if role in (PremiseRole.VEQ, PremiseRole.VNZ):
            return FormalVector.parse(text)
        if role in (PremiseRole.BASIS, PremiseRole.HYP_BASIS):
            labels = json.loads(text)
            if not isinstance(labels, list) or not all(isinstance(label, str) for label in labels):
                raise InputError(f"basis premise must be a JSON list of labels, got {text!r}")
            return tuple(labels)
        return text.strip()


@dataclass(frozen=True)
class Step:
    """One derivation step; output is what the named kind produces from data"""
    index: int
    kind: StepKind
    data: Dict[str, Any]
    output: Value
    anchor: str

    def to_line(self) -> str:
        return f"{self.index} {self.kind.value} {dump_data(self.data)} -> {self.output} ; {self.anchor}"


@dataclass
class Certificate:
    premises: List[Premise] = field(default_factory=list)
    steps: List[Step] = field(default_factory=list)
    qed: Optional[StepKind] = None
    title: str = ""

    @property
    def final_kind(self) -> Optional[StepKind]:
        return self.steps[-1].kind if self.steps else None

    def premise(self, name: str) -> Premise:
        for p in self.premises:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_text(self) -> str:
        lines = []
        if self.title:
            lines.append(f"# {self.title}")
        lines.extend(p.to_line() for p in self.premises)
        lines.extend(s.to_line() for s in self.steps)
        if self.qed is not None:
            lines.append(f"QED {self.qed.value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Certificate":
        """
        Parse the text form

        Raises:
            InputError: on any malformed line
        """
        cert = cls()
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if not cert.title and not cert.premises and not cert.steps:
                    cert.title = line[1:].strip()
                continue
            try:
                if line.startswith("QED "):
                    cert.qed = StepKind(line[4:].strip())
                    continue
                body, sep, anchor = line.rpartition(" ; ")
                if not sep:
                    raise InputError("missing ' ; <anchor>'")
                head, sep, value_text = body.rpartition(" -> ")
                if not sep:
                    raise InputError("missing ' -> <value>'")
                if head.startswith("P "):
                    parts = head.split(" ")
                    given: Tuple[str, ...] = ()
                    if len(parts) == 5 and parts[3] == "from":
                        given = tuple(parts[4].split(","))
                    elif len(parts) != 3:
                        raise InputError("premise head must be 'P <name> <role> [from <refs>]'")
                    role = PremiseRole(parts[2])
                    cert.premises.append(
                        Premise(parts[1], role, Premise.parse_value(role, value_text), anchor.strip(), given)
                    )
                    continue
                index_text, kind_text, data_text = head.split(" ", 2)
                data = json.loads(data_text)
                if not isinstance(data, dict):
                    raise InputError("step data must be a JSON object")
                cert.steps.append(Step(int(index_text), StepKind(kind_text), data, parse_value(value_text), anchor.strip()))
            except (ValueError, CertificateError, InputError) as e:
                raise InputError(f"certificate line {number}: {e}") from e
        logger.debug(f"parsed certificate with {len(cert.premises)} premises and {len(cert.steps)} steps")
        return cert

    def without_step(self, position: int) -> "Certificate":
        """
        Copy with the step at 1-based position removed and later steps renumbered

        References to later steps shift down by one; references to the removed step are
        left as they are and so land on whatever now occupies its number.
        """
        def shift(n: int) -> int:
            return n - 1 if n > position else n

        premises = [replace(p, given=tuple(renumber_refs(list(p.given), shift))) for p in self.premises]
        steps = [
            Step(shift(s.index), s.kind, renumber_refs(s.data, shift), s.output, s.anchor)
            for i, s in enumerate(self.steps, start=1) if i != position
        ]
        return Certificate(premises, steps, self.qed, self.title)
