"""
Incremental certificate construction

Every step output is computed by the checker's own handlers, so a built
certificate replays by construction; an optional expected output guards
the derivation against drift. build(prune=True) keeps only what the final
step rests on, which is how sub-certificates are cut out of a longer chain.
"""
from fractions import Fraction
from dataclasses import replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Union
import logging

from ..errors import CertificateError, HcxError
from ..models import PremiseRole, StepKind
from ..scalarpoly import Polynomial, format_rational
from .certificate import Certificate, Premise, Step, Value, coerce_value, normalize_data, renumber_refs
from .checker import ReplayContext

logger = logging.getLogger(__name__)

Term = Union[Polynomial, int, Fraction, str]


def text(term: Term) -> str:
    """Canonical text of a multiplier, square, weight or constant"""
    if isinstance(term, Fraction):
        return format_rational(term)
    if isinstance(term, str):
        return str(Polynomial.parse(term))
    return str(Polynomial.coerce(term))


class CertificateBuilder:
    """Collects premises and steps; refs are premise names or "#n" for step n"""

    def __init__(self, title: str = ""):
        self.title = title
        self.premises: List[Premise] = []
        self.steps: List[Step] = []
        self._ctx = ReplayContext([])
        self._facts: Dict[Value, str] = {}

    def premise(self, name: str, role: PremiseRole, value: Any, anchor: str, given: Sequence[str] = ()) -> str:
        if role in (PremiseRole.EQ, PremiseRole.NZ, PremiseRole.HYP):
            value = Polynomial.coerce(value)
        elif role in (PremiseRole.VEQ, PremiseRole.VNZ):
            value = coerce_value(value)
        elif role in (PremiseRole.BASIS, PremiseRole.HYP_BASIS):
            value = tuple(value)
        p = Premise(name, role, value, anchor, tuple(given))
        if name in self._ctx.premises:
            raise CertificateError(f"duplicate premise '{name}'")
        self.premises.append(p)
        self._ctx.premises[name] = p
        if role in (PremiseRole.EQ, PremiseRole.VEQ, PremiseRole.HYP):
            self._facts.setdefault(value, name)
        return name

    def has_premise(self, name: str) -> bool:
        return name in self._ctx.premises

    def step(self, kind: StepKind, data: Dict[str, Any], anchor: str, expect: Optional[Union[Value, str, int]] = None) -> str:
        """
        Append a step, computing its output

        Raises:
            CertificateError: the handler rejects the data or the output differs from expect
        """
        index = len(self.steps) + 1
        data = normalize_data(data)
        try:
            output = self._ctx.apply(kind, data)
        except (HcxError, ValueError) as e:
            raise CertificateError(f"{kind.value} failed: {e}", step=index) from e
        if expect is not None:
            expected = coerce_value(expect)
            if output != expected:
                raise CertificateError(f"{kind.value} produced {output}, expected {expected}", step=index)
        self.steps.append(Step(index, kind, data, output, anchor))
        self._ctx.push(kind, output)
        if not kind.is_contradiction:
            self._facts.setdefault(output, f"#{index}")
        logger.debug(f"step {index} {kind.value} -> {output}")
        return f"#{index}"

    def value(self, ref: str) -> Value:
        return self._ctx.fact(ref)

    def find(self, value: Union[Value, str]) -> str:
        """Ref of the first recorded fact equal to value"""
        value = coerce_value(value)
        ref = self._facts.get(value)
        if ref is None:
            raise CertificateError(f"no recorded fact equals {value}")
        return ref

    # step shorthands ----------------------------------------------------

    def substitute(self, source: str, bind: Iterable[Sequence[str]] = (), anchor: str = "", rules: Sequence[str] = (), expect=None) -> str:
        data: Dict[str, Any] = {"in": source, "bind": [list(b) for b in bind]}
        if rules:
            data["rules"] = list(rules)
        return self.step(StepKind.SUBSTITUTE, data, anchor, expect)

    def combine(self, sources: Sequence[str], mul: Sequence[Term], anchor: str, basis: Optional[str] = None, expect=None) -> str:
        data: Dict[str, Any] = {"in": list(sources), "mul": [text(m) for m in mul]}
        if basis is not None:
            data["basis"] = basis
        return self.step(StepKind.LINEAR_COMBINE, data, anchor, expect)

    def jacobi(self, triple: Sequence[str], using: Sequence[str], anchor: str, expect=None) -> str:
        return self.step(StepKind.JACOBI, {"triple": list(triple), "using": list(using)}, anchor, expect)

    def sum_of_squares(self, source: str, squares: Sequence[Term], weights: Sequence[Term], const: Term, anchor: str) -> str:
        data = {
            "in": source,
            "squares": [text(s) for s in squares],
            "weights": [text(w) for w in weights],
            "const": text(const),
        }
        return self.step(StepKind.SUM_OF_SQUARES_CONTRADICTION, data, anchor)

    def zero_vs_nonzero(self, source: str, nonzero: Sequence[str], const: Term, anchor: str) -> str:
        data = {"in": source, "nonzero": list(nonzero), "const": text(const)}
        return self.step(StepKind.ZERO_VS_NONZERO_CONTRADICTION, data, anchor)

    def build(self, prune: bool = False) -> Certificate:
        """
        Assemble the certificate

        Args:
            prune: Drop the steps and premises the final step does not rest on
                and renumber the rest
        """
        qed = None
        if self.steps and self.steps[-1].kind.is_contradiction:
            qed = self.steps[-1].kind
        if not prune or not self.steps:
            return Certificate(list(self.premises), list(self.steps), qed, self.title)
        keep: Set[int] = {len(self.steps)}
        used: Set[str] = set()
        for n in range(len(self.steps), 0, -1):
            if n not in keep:
                continue
            for ref in self._ctx.refs[n - 1]:
                if ref.startswith("#"):
                    keep.add(int(ref[1:]))
                else:
                    used.add(ref)
        order = {old: new for new, old in enumerate(sorted(keep), start=1)}
        steps = [
            Step(order[s.index], s.kind, renumber_refs(s.data, order.__getitem__), s.output, s.anchor)
            for s in self.steps if s.index in keep
        ]
        premises = [
            replace(p, given=tuple(renumber_refs(list(p.given), order.__getitem__)))
            for p in self.premises if p.name in used
        ]
        logger.debug(f"pruned {len(self.steps) - len(steps)} steps and {len(self.premises) - len(premises)} premises")
        return Certificate(premises, steps, qed, self.title)
