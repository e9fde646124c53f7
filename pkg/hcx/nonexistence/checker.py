"""
Independent certificate checker

Knows only the five step kinds. Each kind is a handler registered with
@register; replay recomputes every step output from its data and the
earlier facts and compares it with the recorded output. After the last
step it checks that the derivation is connected: every premise is used and,
for a contradiction, every earlier step is cited and every hypothesis premise
has been discharged through "#n!name".
"""
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple
import logging

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import CertificateError, HcxError
from ..models import PremiseRole, ReplayResult, StepKind
from ..scalarpoly import Polynomial, to_rational
from .certificate import Certificate, Premise, Value
from .formal import (
    FormalVector,
    binding_from_license,
    canonical_atom_bracket,
    formal_bracket,
    parse_rule,
)

logger = logging.getLogger(__name__)

Rule = Tuple[str, str, int]


class ReplayContext:
    """
    Premises and the outputs of the steps checked so far

    Also tracks which premises and steps get cited, and for every step the set of
    hypotheses its output rests on. A reference "#n!name" discharges hypothesis
    name through the contradiction at step n.
    """

    def __init__(self, premises: Sequence[Premise]):
        self.premises: Dict[str, Premise] = {}
        for p in premises:
            if p.name in self.premises:
                raise CertificateError(f"duplicate premise '{p.name}'")
            self.premises[p.name] = p
        self.outputs: List[Value] = []
        self.kinds: List[StepKind] = []
        self.deps: List[FrozenSet[str]] = []
        self.refs: List[FrozenSet[str]] = []
        self.cited: Set[str] = set()
        self._deps: Set[str] = set()
        self._refs: Set[str] = set()
        self._resolving: Set[str] = set()

    @property
    def index(self) -> int:
        """Index of the step being checked"""
        return len(self.outputs) + 1

    def apply(self, kind: StepKind, data: Mapping) -> Value:
        handler = HANDLERS.get(kind)
        if handler is None:
            raise CertificateError(f"no handler for {kind.value}")
        self._deps, self._refs = set(), set()
        return handler(data, self)

    def push(self, kind: StepKind, output: Value) -> None:
        self.kinds.append(kind)
        self.outputs.append(output)
        self.deps.append(frozenset(self._deps))
        self.refs.append(frozenset(self._refs))
        self._deps, self._refs = set(), set()

    def _step(self, ref: str) -> int:
        try:
            n = int(ref[1:])
        except ValueError:
            raise CertificateError(f"malformed step reference '{ref}'")
        if not 1 <= n < self.index:
            raise CertificateError(f"step reference '{ref}' is not an earlier step")
        return n

    def _cite(self, n: int, deps: FrozenSet[str]) -> None:
        self.cited.add(f"#{n}")
        self._refs.add(f"#{n}")
        self._deps |= deps

    def _derived(self, ref: str) -> int:
        n = self._step(ref)
        if self.kinds[n - 1].is_contradiction:
            raise CertificateError(f"step reference '{ref}' names a contradiction")
        self._cite(n, self.deps[n - 1])
        return n

    def _discharge(self, ref: str) -> Premise:
        head, _, name = ref.partition("!")
        n = self._step(head)
        if not self.kinds[n - 1].is_contradiction:
            raise CertificateError(f"'{ref}' does not discharge through a contradiction")
        hypothesis = self.premises.get(name)
        if hypothesis is None or not hypothesis.role.is_hypothesis:
            raise CertificateError(f"'{name}' is not a hypothesis premise")
        if name not in self.deps[n - 1]:
            raise CertificateError(f"step {n} does not rest on hypothesis '{name}'")
        self._cite(n, self.deps[n - 1] - {name})
        return hypothesis

    def _use(self, p: Premise) -> None:
        self.cited.add(p.name)
        self._refs.add(p.name)
        if p.role.is_hypothesis:
            self._deps.add(p.name)
        if p.name in self._resolving:
            raise CertificateError(f"premise '{p.name}' is among its own givens")
        self._resolving.add(p.name)
        try:
            for given in p.given:
                if "!" in given:
                    self._discharge(given)
                elif given.startswith("#"):
                    self._derived(given)
                elif given in self.premises:
                    self._use(self.premises[given])
                else:
                    raise CertificateError(f"premise '{p.name}' is given by unknown '{given}'")
        except CertificateError as e:
            raise CertificateError(f"premise '{p.name}' is not established: {e}")
        finally:
            self._resolving.discard(p.name)

    def _premise(self, ref: str, *roles: PremiseRole) -> Premise:
        p = self.premises.get(ref)
        if p is None:
            raise CertificateError(f"unknown premise '{ref}'")
        if p.role not in roles:
            wanted = "/".join(r.value for r in roles)
            raise CertificateError(f"premise '{ref}' has role {p.role.value}, expected {wanted}")
        self._use(p)
        return p

    def fact(self, ref: str) -> Value:
        """A value known to vanish: an eq/veq/hyp premise or an earlier derivation step"""
        if "!" in ref:
            raise CertificateError(f"discharge '{ref}' is not a vanishing fact")
        if ref.startswith("#"):
            return self.outputs[self._derived(ref) - 1]
        return self._premise(ref, PremiseRole.EQ, PremiseRole.VEQ, PremiseRole.HYP).value

    def polynomial_fact(self, ref: str) -> Polynomial:
        value = self.fact(ref)
        if not isinstance(value, Polynomial):
            raise CertificateError(f"'{ref}' is a vector, expected a polynomial")
        return value

    def vector_fact(self, ref: str) -> FormalVector:
        value = self.fact(ref)
        if not isinstance(value, FormalVector):
            raise CertificateError(f"'{ref}' is a polynomial, expected a vector")
        return value

    def nonzero(self, ref: str) -> Value:
        """A value known not to vanish: an nz/vnz premise or a discharged hyp premise"""
        if "!" in ref:
            hypothesis = self._discharge(ref)
            if hypothesis.role != PremiseRole.HYP:
                raise CertificateError(f"discharging '{hypothesis.name}' gives a dependence, not a nonzero value")
            return hypothesis.value
        return self._premise(ref, PremiseRole.NZ, PremiseRole.VNZ).value

    def basis(self, ref: str) -> Tuple[str, ...]:
        return self._premise(ref, PremiseRole.BASIS, PremiseRole.HYP_BASIS).value

    def rule(self, ref: str) -> Rule:
        return parse_rule(self._premise(ref, PremiseRole.RULE).value)


Handler = Callable[[Mapping, ReplayContext], Value]
HANDLERS: Dict[StepKind, Handler] = {}


def register(kind: StepKind):
    def decorator(fn: Handler) -> Handler:
        HANDLERS[kind] = fn
        return fn
    return decorator


# Step data ----------------------------------------------------------------------

class _StepData(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class SubstituteData(_StepData):
    source: str = Field(..., alias="in")
    bind: List[Tuple[str, str]] = Field(default_factory=list, description="[license ref, variable or label]")
    rules: List[str] = Field(default_factory=list)


class LinearCombineData(_StepData):
    sources: List[str] = Field(..., alias="in", min_length=1)
    mul: List[str]
    basis: Optional[str] = None


class JacobiData(_StepData):
    triple: Tuple[str, str, str]
    using: List[str] = Field(default_factory=list)


class SumOfSquaresData(_StepData):
    source: str = Field(..., alias="in")
    squares: List[str] = Field(..., min_length=1)
    weights: List[str]
    const: str


class ZeroVsNonzeroData(_StepData):
    source: str = Field(..., alias="in")
    nonzero: List[str] = Field(default_factory=list)
    const: str


# Handlers ----------------------------------------------------------------------

@register(StepKind.SUBSTITUTE)
def check_substitute(raw: Mapping, ctx: ReplayContext) -> Value:
    data = SubstituteData.model_validate(raw)
    value = ctx.fact(data.source)
    variables: Dict[str, Polynomial] = {}
    labels: Dict[str, FormalVector] = {}
    for license_ref, target in data.bind:
        license = ctx.fact(license_ref)
        if isinstance(license, FormalVector):
            bound = binding_from_license(license, target)
            if bound is None:
                raise CertificateError(f"'{license_ref}' does not determine label {target}")
            labels[target] = bound
        else:
            bound = license.solve_for(target)
            if bound is None:
                raise CertificateError(f"'{license_ref}' cannot be solved for {target}")
            variables[target] = bound
    rules = [ctx.rule(ref) for ref in data.rules]
    if isinstance(value, Polynomial):
        if labels or rules:
            raise CertificateError("label bindings and rules only apply to vectors")
        return value.substitute(variables)
    value = value.canonical(rules).replace_labels(labels, inside_brackets=True).canonical(rules)
    return value.substitute(variables)


def _coordinate(ref: str, basis: Optional[Tuple[str, ...]], ctx: ReplayContext) -> Polynomial:
    source, _, label = ref.partition("@")
    if basis is None:
        raise CertificateError(f"coordinate '{ref}' needs a basis premise")
    vector = ctx.vector_fact(source)
    outside = vector.support() - set(basis)
    if outside:
        raise CertificateError(f"'{source}' has labels {sorted(outside)} outside the basis")
    if label not in basis:
        raise CertificateError(f"label {label} is not in the basis")
    return vector.coefficient(label)


@register(StepKind.LINEAR_COMBINE)
def check_linear_combine(raw: Mapping, ctx: ReplayContext) -> Value:
    data = LinearCombineData.model_validate(raw)
    if len(data.sources) != len(data.mul):
        raise CertificateError(f"{len(data.sources)} inputs but {len(data.mul)} multipliers")
    basis = ctx.basis(data.basis) if data.basis is not None else None
    values = [
        _coordinate(ref, basis, ctx) if "@" in ref else ctx.fact(ref)
        for ref in data.sources
    ]
    multipliers = [Polynomial.parse(m) for m in data.mul]
    if all(isinstance(v, Polynomial) for v in values):
        total = Polynomial()
        for v, m in zip(values, multipliers):
            total = total + m * v
        return total
    if all(isinstance(v, FormalVector) for v in values):
        total = FormalVector()
        for v, m in zip(values, multipliers):
            total = total + v.scale(m)
        return total
    raise CertificateError("cannot combine polynomials with vectors")


def _rewrite_by_licenses(v: FormalVector, licenses: Sequence[FormalVector], nested_only: bool) -> FormalVector:
    bindings: Dict[str, FormalVector] = {}
    for label in v.labels():
        if nested_only and label.count("[") < 2:
            continue
        for license in licenses:
            bound = binding_from_license(license, label)
            if bound is not None:
                bindings[label] = bound
                break
    return v.replace_labels(bindings)


@register(StepKind.JACOBI)
def check_jacobi(raw: Mapping, ctx: ReplayContext) -> Value:
    """
    Cyclic sum [[p,q],r] + [[q,r],p] + [[r,p],q] with inner brackets and then
    nested brackets rewritten by the licenses
    """
    data = JacobiData.model_validate(raw)
    licenses = [ctx.vector_fact(ref) for ref in data.using]
    p, q, r = data.triple
    total = FormalVector()
    for a, b, c in ((p, q, r), (q, r, p), (r, p, q)):
        inner = _rewrite_by_licenses(canonical_atom_bracket(a, b), licenses, nested_only=False)
        outer = formal_bracket(inner, FormalVector.atom(c))
        total = total + _rewrite_by_licenses(outer, licenses, nested_only=True)
    return total


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


@register(StepKind.SUM_OF_SQUARES_CONTRADICTION)
def check_sum_of_squares(raw: Mapping, ctx: ReplayContext) -> Value:
    """0 = sum w_i s_i^2 + c with every w_i of the sign of c != 0 has no real solution"""
    data = SumOfSquaresData.model_validate(raw)
    value = ctx.polynomial_fact(data.source)
    if len(data.squares) != len(data.weights):
        raise CertificateError(f"{len(data.squares)} squares but {len(data.weights)} weights")
    const = to_rational(data.const)
    if const == 0:
        raise CertificateError("the constant of a sum-of-squares contradiction must be nonzero")
    weights = [to_rational(w) for w in data.weights]
    if any(_sign(w) != _sign(const) for w in weights):
        raise CertificateError("every weight must have the sign of the constant")
    expected = Polynomial.constant(const)
    for s, w in zip(data.squares, weights):
        expected = expected + Polynomial.parse(s) ** 2 * w
    if value != expected:
        raise CertificateError(f"input {value} is not {expected}")
    return Polynomial.constant(const)


@register(StepKind.ZERO_VS_NONZERO_CONTRADICTION)
def check_zero_vs_nonzero(raw: Mapping, ctx: ReplayContext) -> Value:
    """A vanishing value that is a nonzero constant times a product of nonzero factors"""
    data = ZeroVsNonzeroData.model_validate(raw)
    value = ctx.fact(data.source)
    const = to_rational(data.const)
    if const == 0:
        raise CertificateError("the constant of a zero-vs-nonzero contradiction must be nonzero")
    witnesses = [(ref, ctx.nonzero(ref)) for ref in data.nonzero]
    product = Polynomial.constant(const)
    for _, w in witnesses:
        if isinstance(w, Polynomial):
            product = product * w
    vector_witnesses = [(ref, w) for ref, w in witnesses if isinstance(w, FormalVector)]
    if isinstance(value, Polynomial):
        if vector_witnesses:
            raise CertificateError("a polynomial input takes only polynomial non-vanishing premises")
        if value != product:
            raise CertificateError(f"input {value} is not {product}")
        return Polynomial.constant(const)
    if len(vector_witnesses) != 1:
        raise CertificateError("a vector input needs exactly one vector non-vanishing premise")
    ref, witness = vector_witnesses[0]
    labels = witness.labels()
    if len(labels) != 1 or witness != FormalVector.atom(labels[0]):
        raise CertificateError(f"premise '{ref}' is not a single label")
    label = labels[0]
    if value.support() != {label}:
        raise CertificateError(f"input {value} is not a multiple of {label}")
    if value.coefficient(label) != product:
        raise CertificateError(f"coefficient {value.coefficient(label)} is not {product}")
    return Polynomial.constant(const)


# Replay ------------------------------------------------------------------------

def _failure(step: int, message: str, checked: int) -> ReplayResult:
    logger.warning(f"replay failed at step {step}: {message}")
    return ReplayResult(ok=False, steps_checked=checked, failed_step=step, message=message)


def _connectivity(ctx: ReplayContext, expect_contradiction: bool) -> Optional[str]:
    """Every premise is used; a contradiction certificate also cites every step but the last
    and closes with every hypothesis discharged"""
    unused = [name for name in ctx.premises if name not in ctx.cited]
    if unused:
        return f"premises never used: {', '.join(unused)}"
    if not expect_contradiction:
        return None
    uncited = [n for n in range(1, len(ctx.outputs)) if f"#{n}" not in ctx.cited]
    if uncited:
        return f"steps never cited: {', '.join(str(n) for n in uncited)}"
    if ctx.deps[-1]:
        return f"final contradiction rests on undischarged hypotheses {', '.join(sorted(ctx.deps[-1]))}"
    return None


def replay(cert: Certificate, expect_contradiction: bool = True) -> ReplayResult:
    """
    Recompute every step and check the closing contradiction

    Args:
        cert: Parsed or freshly built certificate
        expect_contradiction: Whether the last step must be a contradiction
            matching the QED trailer; identity certificates pass False

    Returns:
        ReplayResult naming the first failing step, if any
    """
    try:
        ctx = ReplayContext(cert.premises)
    except CertificateError as e:
        return _failure(0, str(e), 0)
    for position, step in enumerate(cert.steps, start=1):
        if step.index != position:
            return _failure(position, f"expected step index {position}, found {step.index}", position - 1)
        try:
            output = ctx.apply(step.kind, step.data)
        except ValidationError as e:
            return _failure(position, f"malformed data: {e.errors()[0]['msg']}", position - 1)
        except (HcxError, ValueError) as e:
            return _failure(position, str(e), position - 1)
        if output != step.output:
            return _failure(position, f"recorded {step.output}, recomputed {output}", position - 1)
        ctx.push(step.kind, output)
        logger.debug(f"step {position} {step.kind.value} ok")
    checked = len(cert.steps)
    if not cert.steps:
        return _failure(1, "certificate has no steps", 0)
    last = cert.steps[-1]
    # trailer and connectivity problems are charged to the position after the last step
    if expect_contradiction and not last.kind.is_contradiction:
        return _failure(checked + 1, f"final step is {last.kind.value}, not a contradiction", checked)
    if expect_contradiction and cert.qed is None:
        return _failure(checked + 1, "missing QED trailer", checked)
    if cert.qed is not None and cert.qed != last.kind:
        return _failure(checked + 1, f"QED {cert.qed.value} does not match the final step {last.kind.value}", checked)
    problem = _connectivity(ctx, expect_contradiction)
    if problem:
        return _failure(checked + 1, problem, checked)
    return ReplayResult(
        ok=True,
        steps_checked=checked,
        message="replay succeeded",
        contradiction=last.kind if last.kind.is_contradiction else None,
    )


def verify(cert: Certificate, expect_contradiction: bool = True) -> ReplayResult:
    """
    Replay and raise on failure

    Raises:
        CertificateError: carries the failing step index
    """
    result = replay(cert, expect_contradiction)
    if not result.ok:
        raise CertificateError(result.message, step=result.failed_step)
    return result
