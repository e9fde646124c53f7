"""
Certificates for the non-existence argument

Each public function builds a certificate with CertificateBuilder. Stages
share one builder so that later stages cite earlier facts by "#n".
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union
import logging

from ..errors import CertificateError
from ..models import PremiseRole
from ..scalarpoly import Polynomial
from .builder import CertificateBuilder
from .certificate import Certificate
from .checker import verify
from .decomposition import LETTERS, FactorSymbol, coefficient_name
from .formal import FormalVector, canonical_label, rename_label
from .symbolic import ANCHORS, ConstraintSystem, symbolic_system

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

# e1 -> e2 -> e3 -> e1 acting on the coefficient symbols
ROTATION = {
    "a1": "b2", "a2": "b3", "a3": "b1",
    "b1": "c2", "b2": "c3", "b3": "c1",
    "c1": "a2", "c2": "a3", "c3": "a1",
}
LABEL_ROTATION = {"X": "Y", "Y": "Z", "Z": "X"}
EQUATION_ROTATION = {"N12": "N23", "N23": "N31", "N31": "N12", "e1": "e2", "e2": "e3", "e3": "e1"}

CASES = ("A", "A2", "A3", "B")
VARIANTS = ("v", "vi", "vii")

# X, Y, Z independent: assumed outright, or as a hypothesis the case split refutes
INDEPENDENCE = "indep.XYZ"


@dataclass(frozen=True)
class Rotation:
    """Power of the cyclic index rotation, applied to symbols, labels and equation names"""
    factor: FactorSymbol
    power: int = 0

    def _short_map(self) -> Dict[str, str]:
        mapping = {name: name for name in ROTATION}
        for _ in range(self.power % 3):
            mapping = {k: ROTATION[v] for k, v in mapping.items()}
        return mapping

    def variable_map(self) -> Dict[str, str]:
        return {
            coefficient_name(k[0], int(k[1]), self.factor): coefficient_name(v[0], int(v[1]), self.factor)
            for k, v in self._short_map().items()
        }

    def name(self, short: str) -> str:
        target = self._short_map()[short]
        return coefficient_name(target[0], int(target[1]), self.factor)

    def poly(self, template: Union[str, int, Fraction]) -> Polynomial:
        """Template written in a1..c3, renamed to the factor and rotated"""
        if not isinstance(template, str):
            return Polynomial.constant(template)
        mapping = {short: self.name(short) for short in ROTATION}
        return Polynomial.parse(template).rename(mapping)

    def label(self, label: str) -> str:
        mapping = {k: k for k in LABEL_ROTATION}
        for _ in range(self.power % 3):
            mapping = {k: LABEL_ROTATION[v] for k, v in mapping.items()}
        _, canonical = canonical_label(rename_label(label, mapping))
        return canonical

    def vector(self, v: FormalVector) -> FormalVector:
        """Rotate a vector already written in the factor's symbols"""
        full = self.variable_map()
        mapping = {k: k for k in LABEL_ROTATION}
        for _ in range(self.power % 3):
            mapping = {k: LABEL_ROTATION[x] for k, x in mapping.items()}
        return v.map_coefficients(lambda c: c.rename(full)).relabel(mapping)

    def equation(self, name: str) -> str:
        pair, part = name.split(".")
        for _ in range(self.power % 3):
            pair = EQUATION_ROTATION[pair]
            part = EQUATION_ROTATION.get(part, part)
        return f"{pair}.{part}"


def _template_vector(pairs, rot: Rotation) -> FormalVector:
    return FormalVector.from_pairs((rot.label(label), rot.poly(c)) for label, c in pairs)


# Stages -------------------------------------------------------------------------

def _system_premises(b: CertificateBuilder, system: ConstraintSystem, names: Sequence[str]) -> Dict[str, str]:
    """Declare the named generated equations, in generation order"""
    refs = {}
    for name, value in system.named():
        if name not in names:
            continue
        role = PremiseRole.EQ if isinstance(value, Polynomial) else PremiseRole.VEQ
        refs[name] = b.premise(f"sys.{name}", role, value, ANCHORS[name])
    return refs


_OFF_BLOCK = ("N12.other", "N23.other", "N31.other")


def _equalities_stage(
    b: CertificateBuilder, system: ConstraintSystem, sys_refs: Dict[str, str],
    independence: PremiseRole = PremiseRole.BASIS,
) -> Dict[str, str]:
    """
    b1 = a2, c2 = b3, a3 = c1 from the Jacobi identity on X, Y, Z

    independence is BASIS when X, Y, Z are taken as independent outright and
    HYP_BASIS when a later contradiction discharges that assumption.
    """
    P = Rotation(system.factor).poly
    b.premise(INDEPENDENCE, independence, ["X", "Y", "Z"], "lemXYZIndependence")
    b.premise("basis.brackets", PremiseRole.BASIS, ["[X,Y]", "[Y,Z]", "[Z,X]"], "corBracketsLI", given=[INDEPENDENCE])
    residual = b.jacobi(
        ["X", "Y", "Z"],
        [sys_refs[name] for name in _OFF_BLOCK],
        "lemABCequalities",
        expect=FormalVector.from_pairs([
            ("[X,Y]", P("b1 - a2")), ("[Y,Z]", P("c2 - b3")), ("[Z,X]", P("a3 - c1")),
        ]),
    )
    facts = {}
    for name, label, expected in (("E1", "[X,Y]", "b1 - a2"), ("E2", "[Y,Z]", "c2 - b3"), ("E3", "[Z,X]", "a3 - c1")):
        facts[name] = b.combine(
            [f"{residual}@{label}"], [1], "corBracketsLI", basis="basis.brackets", expect=P(expected)
        )
    logger.info(f"derived the three coefficient equalities for factor {system.factor}")
    return facts


# (name, assumed-zero sum, variable solved from it, equation, basis containing its support)
_NONVANISHING = (
    ("a1b2", "a1 + b2", "a1", "N12.other", ("X", "Y", "[X,Y]")),
    ("b2c3", "b2 + c3", "b2", "N23.other", ("Y", "Z", "[Y,Z]")),
    ("a1c3", "a1 + c3", "a1", "N31.other", ("Z", "X", "[Z,X]")),
)


def _nonvanishing_stage(b: CertificateBuilder, system: ConstraintSystem, sys_refs: Dict[str, str]) -> List[str]:
    """
    a1 + b2, b2 + c3 and a1 + c3 are nonzero: each vanishing sum leaves a bracket
    that is a combination of its own two arguments
    """
    rot = Rotation(system.factor)
    P, n = rot.poly, rot.name
    anchor = "lemXYZIndependence"
    refuted = []
    for name, total, solved, equation, labels in _NONVANISHING:
        hyp = b.premise(f"hyp.{name}", PremiseRole.HYP, P(total), anchor)
        basis = b.premise(f"basis.{labels[0]}{labels[1]}", PremiseRole.BASIS, labels, "propSU2XY", given=[INDEPENDENCE])
        reduced = b.substitute(sys_refs[equation], [[hyp, n(solved)]], anchor)
        coordinate = b.combine([f"{reduced}@{labels[2]}"], [1], anchor, basis=basis, expect=-1)
        refuted.append(b.zero_vs_nonzero(coordinate, [], -1, anchor))
    logger.info(f"derived the three non-vanishing sums for factor {system.factor}")
    return refuted


# coefficient equations after b1 -> a2, c2 -> b3, c1 -> a3; the other three reduce to
# repeats of N12.e1, N23.e2 and N12.e2
_REDUCED = {
    "N12.e1": "2*a3*b2 - 2*a2*b3",
    "N12.e2": "2*a1*b3 - 2*a2*a3",
    "N12.e3": "a1*c3 - a3**2 + b2*c3 - b3**2 + 1 - a1*b2 + a2**2",
    "N23.e1": "a1*b2 - a2**2 + a1*c3 - a3**2 - b2*c3 + b3**2 + 1",
    "N23.e2": "2*a2*c3 - 2*a3*b3",
    "N31.e2": "b2*c3 - b3**2 + a1*b2 - a2**2 - a1*c3 + a3**2 + 1",
}

_CHAIN_EQUATIONS = _OFF_BLOCK + tuple(_REDUCED)


def _identities_stage(b: CertificateBuilder, system: ConstraintSystem, sys_refs: Dict[str, str], eq: Dict[str, str]) -> Dict[str, str]:
    """Six vanishing minors and the three minors equal to -1"""
    rot = Rotation(system.factor)
    P, n = rot.poly, rot.name
    bind = [[eq["E1"], n("b1")], [eq["E2"], n("c2")], [eq["E3"], n("c1")]]
    R = {
        name: b.substitute(sys_refs[name], bind, "lemMoreIdentities", expect=P(expected))
        for name, expected in _REDUCED.items()
    }
    E1, E2, E3 = eq["E1"], eq["E2"], eq["E3"]
    f: Dict[str, str] = {}
    f["m1"] = b.combine([R["N12.e1"]], [HALF], "eqRankA1", expect=P("a3*b2 - a2*b3"))
    f["m2"] = b.combine([f["m1"], E3, E1, E2], [1, P("-b2"), P("-c2"), P("-a2")], "eqRankA1", expect=P("b2*c1 - b1*c2"))
    rho2 = b.combine([R["N12.e2"]], [HALF], "eqRankB", expect=P("a1*b3 - a2*a3"))
    f["m3"] = b.combine([rho2, E2, E3], [1, P("a1"), P("a2")], "eqRankB1", expect=P("a1*c2 - a2*c1"))
    f["m4"] = b.combine([rho2, E1], [1, P("-a3")], "eqRankB1", expect=P("a1*b3 - a3*b1"))
    rho3 = b.combine([R["N23.e2"]], [HALF], "eqRankC", expect=P("a2*c3 - a3*b3"))
    f["m5"] = b.combine([rho3, E1, E3], [1, P("c3"), P("b3")], "eqRankC1", expect=P("b1*c3 - b3*c1"))
    f["m6"] = b.combine([rho3, E2], [1, P("-a3")], "eqRankC1", expect=P("a2*c3 - a3*c2"))
    rank_d = b.combine(
        [R["N12.e3"], R["N23.e1"], E1, E2], [HALF, -HALF, P("a2"), P("-b3")], "eqRankD",
        expect=P("b2*c3 - b3*c2 - a1*b2 + a2*b1"),
    )
    rank_e = b.combine(
        [R["N12.e3"], R["N31.e2"], E3, E1], [HALF, -HALF, P("a3"), P("a2")], "eqRankE",
        expect=P("a1*c3 - a3*c1 - a1*b2 + a2*b1"),
    )
    f["Dab"] = b.combine(
        [R["N12.e3"], rank_d, rank_e, E1, E2, E3], [1, -1, -1, P("a2"), P("-b3"), P("a3")], "eqRankD1",
        expect=P("a1*b2 - a2*b1 + 1"),
    )
    f["Dbc"] = b.combine([f["Dab"], rank_d], [1, 1], "eqRankD1", expect=P("b2*c3 - b3*c2 + 1"))
    f["Dac"] = b.combine([f["Dab"], rank_e], [1, 1], "eqRankD1", expect=P("a1*c3 - a3*c1 + 1"))
    logger.info(f"derived the rank identities for factor {system.factor}")
    return f


def _case_a_stage(b: CertificateBuilder, factor: FactorSymbol, case: str, role: PremiseRole = PremiseRole.EQ) -> str:
    """
    b1 = a2 = 0 (and its rotations) forces a1^2 + 1 = 0

    Facts are looked up by their rotated polynomial, so the same template
    serves all three subcases. With role HYP the assumption a2 = 0 can be
    discharged from the returned contradiction.
    """
    rot = Rotation(factor, CASES.index(case))
    P, n = rot.poly, rot.name
    anchor = "propNoRealSolutions"
    hyp = b.premise(f"hyp.{case}", role, P("a2"), anchor)
    E1, E2 = b.find(P("b1 - a2")), b.find(P("c2 - b3"))
    d_ab, d_bc, d_ac = b.find(P("a1*b2 - a2*b1 + 1")), b.find(P("b2*c3 - b3*c2 + 1")), b.find(P("a1*c3 - a3*c1 + 1"))
    m1, m4 = b.find(P("a3*b2 - a2*b3")), b.find(P("a1*b3 - a3*b1"))

    b1 = b.combine([E1, hyp], [1, 1], anchor, expect=P("b1"))
    s_ab = b.substitute(d_ab, [[hyp, n("a2")], [b1, n("b1")]], anchor, expect=P("a1*b2 + 1"))
    s_m1 = b.substitute(m1, [[hyp, n("a2")]], anchor, expect=P("a3*b2"))
    a3 = b.combine([s_ab, s_m1], [P("a3"), P("-a1")], anchor, expect=P("a3"))
    s_m4 = b.substitute(m4, [[b1, n("b1")]], anchor, expect=P("a1*b3"))
    b3 = b.combine([s_ab, s_m4], [P("b3"), P("-b2")], anchor, expect=P("b3"))
    s_bc = b.substitute(d_bc, [[b3, n("b3")]], anchor, expect=P("b2*c3 + 1"))
    s_ac = b.substitute(d_ac, [[a3, n("a3")]], anchor, expect=P("a1*c3 + 1"))
    squares = b.combine(
        [s_bc, s_ab, s_ac], [P("a1**2"), P("-a1*c3"), 1], anchor, expect=P("a1**2 + 1")
    )
    return b.sum_of_squares(squares, [P("a1")], [1], 1, anchor)


def _case_b_stage(b: CertificateBuilder, factor: FactorSymbol, nonzero: Optional[Sequence[str]] = None) -> str:
    """
    a2, b3, c1 all nonzero: the minors force a2*b3*c1 = 0

    nonzero lists the refs asserting a2, b3, c1 != 0, normally the discharged
    case A hypotheses; without it they become premises.
    """
    P = Rotation(factor).poly
    anchor = "propNoRealSolutions"
    if nonzero is None:
        nonzero = [b.premise(f"nz.B.{short}", PremiseRole.NZ, P(short), anchor) for short in ("a2", "b3", "c1")]
    refs = [
        b.find(P("a1*b3 - a3*b1")),
        b.find(P("a3*b2 - a2*b3")),
        b.find(P("a1*b2 - a2*b1 + 1")),
        b.find(P("a3 - c1")),
    ]
    product = b.combine(
        refs, [P("a2*a3*b2"), P("a2*a3*b1"), P("-a2*a3*b3"), P("a2*b3")], anchor, expect=P("-a2*b3*c1")
    )
    return b.zero_vs_nonzero(product, list(nonzero), -1, anchor)


def _cases_stage(b: CertificateBuilder, factor: FactorSymbol) -> str:
    """Cases A, A2, A3 refute a2 = 0, b3 = 0, c1 = 0; case B then refutes what is left"""
    discharged = []
    for case in CASES[:3]:
        contradiction = _case_a_stage(b, factor, case, PremiseRole.HYP)
        discharged.append(f"{contradiction}!hyp.{case}")
    return _case_b_stage(b, factor, discharged)


def _label(raw: str) -> str:
    return canonical_label(raw)[1]


def _span(bracket: str, coefficients: Sequence[str]) -> FormalVector:
    """bracket - c1 Ek - c2 IEk - c3 JEk"""
    pairs = [(bracket, 1)] + [(label, -Polynomial.var(c)) for label, c in zip(("Ek", "IEk", "JEk"), coefficients)]
    return FormalVector.from_pairs(pairs).canonical()


def _hypercomplex_stage(b: CertificateBuilder, given: Sequence[str] = ()) -> str:
    """
    Cross-factor expansions of N_I(JE_j, E_k) and N_J(IE_j, E_k) show that
    ad_{KE_j} acts on E_k, IE_k, JE_k as lam * id; the Jacobi identity on
    KE_j, E_k, IE_k then leaves lam * [E_k, IE_k] = 0

    given names what the factor-level premises rest on: the discharged
    independence of X, Y, Z in the full chain.
    """
    anchor = "lemHypercomplex1"
    lam = Polynomial.var("lam")
    b.premise("nij.I", PremiseRole.VEQ, FormalVector.from_pairs([
        ("I[IJEj,Ek]", 1), ("I[JEj,IEk]", 1), ("[JEj,Ek]", 1), ("[IJEj,IEk]", -1),
    ]).canonical(), anchor)
    b.premise("nij.J", PremiseRole.VEQ, FormalVector.from_pairs([
        ("J[JIEj,Ek]", 1), ("J[IEj,JEk]", 1), ("[IEj,Ek]", 1), ("[JIEj,JEk]", -1),
    ]).canonical(), anchor)
    for name, rule in (("IJ", "IJ=>K"), ("JI", "JI=>-K"), ("II", "II=>-"), ("JJ", "JJ=>-")):
        b.premise(f"rule.{name}", PremiseRole.RULE, rule, anchor)
    zeros = {}
    for name, raw in (("JEj.Ek", "[JEj,Ek]"), ("JEj.IEk", "[JEj,IEk]"), ("IEj.Ek", "[IEj,Ek]"), ("IEj.JEk", "[IEj,JEk]")):
        zeros[name] = b.premise(
            f"zero.{name}", PremiseRole.VEQ, FormalVector.atom(raw).canonical(), "propInvariant2Dspace", given=given
        )
    basis = b.premise("basis.k", PremiseRole.BASIS, ["Ek", "IEk", "JEk", "KEk"], "propInvariant2Dspace", given=given)
    span_ek = b.premise("span.KEjEk", PremiseRole.VEQ, _span("[KEj,Ek]", ("lam", "mu", "nu")), "propSU2XY", given=given)
    span_iek = b.premise("span.KEjIEk", PremiseRole.VEQ, _span("[KEj,IEk]", ("p1", "p2", "p3")), "propSU2XY", given=given)
    span_jek = b.premise("span.KEjJEk", PremiseRole.VEQ, _span("[KEj,JEk]", ("q1", "q2", "q3")), "propSU2XY", given=given)
    span_bracket = b.premise("span.EkIEk", PremiseRole.VEQ, _span("[Ek,IEk]", ("s1", "s2", "s3")), "propSU2XY", given=given)
    nz_lam = b.premise("nz.lam", PremiseRole.NZ, lam, "thmMainTheorem", given=given)
    nz_bracket = b.premise("vnz.EkIEk", PremiseRole.VNZ, FormalVector.atom("[Ek,IEk]"), "propSU2XY", given=given)

    expand_i = b.substitute(
        "nij.I",
        [[zeros["JEj.Ek"], _label("[JEj,Ek]")], [zeros["JEj.IEk"], _label("[JEj,IEk]")]],
        anchor, rules=["rule.IJ"],
        expect=FormalVector.from_pairs([("I[KEj,Ek]", 1), ("[IEk,KEj]", 1)]),
    )
    expand_j = b.substitute(
        "nij.J",
        [[zeros["IEj.JEk"], _label("[IEj,JEk]")], [zeros["IEj.Ek"], _label("[IEj,Ek]")]],
        anchor, rules=["rule.JI"],
        expect=FormalVector.from_pairs([("J[KEj,Ek]", -1), ("[JEk,KEj]", -1)]),
    )
    mu, nu = Polynomial.var("mu"), Polynomial.var("nu")
    on_iek = b.substitute(
        expand_i, [[span_ek, "[KEj,Ek]"]], anchor, rules=["rule.II", "rule.IJ"],
        expect=FormalVector.from_pairs([("IEk", lam), ("Ek", -mu), ("KEk", nu), ("[IEk,KEj]", 1)]),
    )
    on_jek = b.substitute(
        expand_j, [[span_ek, "[KEj,Ek]"]], anchor, rules=["rule.JI", "rule.JJ"],
        expect=FormalVector.from_pairs([("JEk", -lam), ("KEk", mu), ("Ek", nu), ("[JEk,KEj]", -1)]),
    )
    # [KE_j, IE_k] and [KE_j, JE_k] have no KE_k component
    inside_i = b.combine([on_iek, span_iek], [1, 1], "propInvariant2Dspace")
    nu_zero = b.combine([f"{inside_i}@KEk"], [1], "propInvariant2Dspace", basis=basis, expect=nu)
    inside_j = b.combine([on_jek, span_jek], [1, -1], "propInvariant2Dspace")
    mu_zero = b.combine([f"{inside_j}@KEk"], [1], "propInvariant2Dspace", basis=basis, expect=mu)
    scalars = [[mu_zero, "mu"], [nu_zero, "nu"]]
    ad_ek = b.substitute(
        span_ek, scalars, "thmMainTheorem",
        expect=FormalVector.from_pairs([("[KEj,Ek]", 1), ("Ek", -lam)]),
    )
    ad_iek = b.substitute(
        on_iek, scalars, "thmMainTheorem",
        expect=FormalVector.from_pairs([("IEk", lam), ("[IEk,KEj]", 1)]),
    )
    ad_jek = b.substitute(
        on_jek, scalars, "thmMainTheorem",
        expect=FormalVector.from_pairs([("JEk", -lam), ("[JEk,KEj]", -1)]),
    )
    cyclic = b.jacobi(
        ["KEj", "Ek", "IEk"], [ad_ek, ad_iek], "thmMainTheorem",
        expect=FormalVector.from_pairs([("[Ek,IEk]", 2 * lam), ("[KEj,[Ek,IEk]]", -1)]),
    )
    s1, s2, s3 = Polynomial.var("s1"), Polynomial.var("s2"), Polynomial.var("s3")
    expanded = b.substitute(cyclic, [[span_bracket, "[Ek,IEk]"]], "thmMainTheorem")
    applied = b.substitute(
        expanded, [[ad_ek, "[KEj,Ek]"], [ad_iek, "[IEk,KEj]"], [ad_jek, "[JEk,KEj]"]], "thmMainTheorem",
        expect=FormalVector.from_pairs([("Ek", lam * s1), ("IEk", lam * s2), ("JEk", lam * s3)]),
    )
    residual = b.combine(
        [applied, span_bracket], [1, lam], "thmMainTheorem", expect=FormalVector.atom("[Ek,IEk]", lam),
    )
    logger.info("reached the final Jacobi contradiction")
    return b.zero_vs_nonzero(residual, [nz_lam, nz_bracket], 1, "thmMainTheorem")


def _xyz_stage(b: CertificateBuilder, system: ConstraintSystem, variant: str) -> str:
    """
    Independent X, Y, Z together with two vanishing brackets force
    a1^2 + 1 = 0; (vi) and (vii) are rotations of (v)
    """
    rot = Rotation(system.factor, VARIANTS.index(variant))
    P, n = rot.poly, rot.name
    anchor = "propXYZdependence"
    refs = {}
    for template in ("N12.other", "N31.other", "N12.e3"):
        name = rot.equation(template)
        template_value = system.equation(template)
        rotated = rot.vector(template_value) if isinstance(template_value, FormalVector) else template_value.rename(rot.variable_map())
        actual = system.equation(name)
        if rotated != actual:
            logger.warning(f"rotation {variant} of {template} is {rotated}, the system has {name} = {actual}")
            raise CertificateError(f"rotated premise {name} does not match the generated system")
        role = PremiseRole.EQ if isinstance(actual, Polynomial) else PremiseRole.VEQ
        refs[template] = b.premise(f"sys.{name}", role, actual, ANCHORS[name])
    basis = b.premise("basis.XYZ", PremiseRole.BASIS, ["X", "Y", "Z"], anchor)
    first = b.premise(f"hyp.{variant}.1", PremiseRole.VEQ, FormalVector.atom(rot.label("[X,Y]")), anchor)
    second = b.premise(f"hyp.{variant}.2", PremiseRole.VEQ, FormalVector.atom(rot.label("[Z,X]")), anchor)

    u = b.substitute(
        refs["N12.other"], [[first, rot.label("[X,Y]")]], anchor,
        expect=_template_vector([("X", "-a3"), ("Y", "-b3"), ("Z", "a1 + b2")], rot),
    )
    v = b.substitute(
        refs["N31.other"], [[second, rot.label("[Z,X]")]], anchor,
        expect=_template_vector([("X", "-a2"), ("Y", "a1 + c3"), ("Z", "-c2")], rot),
    )
    coords = []
    for source, label, expected, solved in (
        (u, "X", "-a3", "a3"), (u, "Y", "-b3", "b3"), (u, "Z", "a1 + b2", "b2"),
        (v, "X", "-a2", "a2"), (v, "Y", "a1 + c3", "c3"), (v, "Z", "-c2", "c2"),
    ):
        ref = b.combine([f"{source}@{rot.label(label)}"], [1], anchor, basis=basis, expect=P(expected))
        coords.append([ref, n(solved)])
    squares = b.substitute(refs["N12.e3"], coords, anchor, expect=P("a1**2 + 1"))
    return b.sum_of_squares(squares, [P("a1")], [1], 1, anchor)


# Public constructors ---------------------------------------------------------------

def derive_equalities(system: Optional[ConstraintSystem] = None) -> Certificate:
    """Identity certificate for b1 = a2, c2 = b3, a3 = c1 and the three non-vanishing sums"""
    system = system or symbolic_system()
    b = CertificateBuilder(f"coefficient equalities, factor {system.factor}")
    sys_refs = _system_premises(b, system, _OFF_BLOCK)
    _equalities_stage(b, system, sys_refs)
    _nonvanishing_stage(b, system, sys_refs)
    return b.build()


def derive_identities(system: Optional[ConstraintSystem] = None, equalities: Optional[Certificate] = None) -> Certificate:
    """
    Identity certificate for the vanishing minors and the three -1 minors;
    restates the equalities stage it builds on

    Raises:
        CertificateError: a supplied equalities certificate does not replay
    """
    system = system or symbolic_system()
    if equalities is not None:
        verify(equalities, expect_contradiction=False)
    b = CertificateBuilder(f"rank identities, factor {system.factor}")
    sys_refs = _system_premises(b, system, _CHAIN_EQUATIONS)
    eq = _equalities_stage(b, system, sys_refs)
    _identities_stage(b, system, sys_refs, eq)
    return b.build()


def infeasibility_certificate(case: Optional[str] = None, factor: FactorSymbol = "j") -> Certificate:
    """
    The equalities and identities have no real solution: the three
    rotations of case A end in a sum of squares, case B in 0 = -1

    Args:
        case: One of "A", "A2", "A3", "B" for that case alone, cut down to
            the facts it uses; the full case split when None
    """
    if case is not None and case not in CASES:
        raise CertificateError(f"unknown case {case!r}")
    system = symbolic_system(factor)
    b = CertificateBuilder(f"no real solutions, factor {factor}" + (f", case {case}" if case else ""))
    sys_refs = _system_premises(b, system, _CHAIN_EQUATIONS)
    eq = _equalities_stage(b, system, sys_refs)
    _identities_stage(b, system, sys_refs, eq)
    if case is None:
        _cases_stage(b, factor)
    elif case == "B":
        _case_b_stage(b, factor)
    else:
        _case_a_stage(b, factor, case)
    return b.build(prune=case is not None)


def xyz_dependence_certificate(variant: str = "v", factor: FactorSymbol = "j") -> Certificate:
    """(i) follows from (v), (vi) or (vii): independence plus two vanishing brackets is impossible"""
    if variant not in VARIANTS:
        raise CertificateError(f"unknown variant {variant!r}")
    system = symbolic_system(factor)
    b = CertificateBuilder(f"dependence of X, Y, Z from ({variant}), factor {factor}")
    _xyz_stage(b, system, variant)
    return b.build()


def theorem_certificate(factor: FactorSymbol = "j") -> Certificate:
    """
    Full chain: independence of X, Y, Z is refuted by the case split, the
    resulting dependence gives the invariant planes, and those end in
    lam * [E_k, IE_k] = 0 with lam and [E_k, IE_k] nonzero
    """
    system = symbolic_system(factor)
    b = CertificateBuilder("SU(2)^4 admits no left-invariant hypercomplex structure")
    sys_refs = _system_premises(b, system, _CHAIN_EQUATIONS)
    eq = _equalities_stage(b, system, sys_refs, PremiseRole.HYP_BASIS)
    _identities_stage(b, system, sys_refs, eq)
    dependence = _cases_stage(b, factor)
    _hypercomplex_stage(b, [f"{dependence}!{INDEPENDENCE}"])
    cert = b.build()
    logger.info(f"theorem certificate has {len(cert.premises)} premises and {len(cert.steps)} steps")
    return cert


def certificate_for_case(case: str, factor: FactorSymbol = "j") -> Certificate:
    if case in CASES:
        return infeasibility_certificate(case, factor)
    if case in VARIANTS:
        return xyz_dependence_certificate(case, factor)
    raise CertificateError(f"unknown case {case!r}")
