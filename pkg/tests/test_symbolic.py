import pytest

from hcx.acstruct import padded_fixture
from hcx.nonexistence.decomposition import LETTERS, block_decompose, coefficient_name
from hcx.nonexistence.formal import FormalVector
from hcx.nonexistence.symbolic import (
    EQUATIONS,
    ConstraintSystem,
    compare_with_reference,
    evaluate_system,
    load_reference_equations,
    symbolic_system,
    system_vanishes,
)
from hcx.scalarpoly import Polynomial


@pytest.fixture(scope="module")
def system():
    return symbolic_system("j")


def test_shape(system):
    assert len(system.scalar_equations) == 9
    assert len(system.vector_equations) == 3
    assert [name for name, _ in system.named()] == [name for name, _ in EQUATIONS]
    assert system.variables() == [f"{l}{r}j" for l in "abc" for r in (1, 2, 3)]


def test_wrong_size_is_rejected(system):
    with pytest.raises(ValueError):
        ConstraintSystem("j", system.scalar_equations[:8], system.vector_equations)


def test_known_equations(system):
    assert system.equation("N12.e3") == Polynomial.parse(
        "a1j*c3j - a3j**2 + b2j*c3j - b3j**2 + 1 - a1j*b2j + a2j*b1j"
    )
    assert system.equation("N12.other") == FormalVector.parse("<X: -a3j | Y: -b3j | Z: a1j + b2j | [X,Y]: -1>")
    assert system.equation("N23.other") == FormalVector.parse("<X: b2j + c3j | Y: -b1j | Z: -c1j | [Y,Z]: -1>")
    assert system.equation("N31.other") == FormalVector.parse("<X: -a2j | Y: a1j + c3j | Z: -c2j | [Z,X]: -1>")


def test_all_equations_match_the_printed_forms(system):
    matches = compare_with_reference(system)
    assert len(matches) == 12
    assert all(m.matched for m in matches)


def test_numeric_factor_matches_the_printed_forms():
    assert all(m.matched for m in compare_with_reference(symbolic_system(3)))


def test_tampered_reference_is_flagged(system):
    reference = [dict(entry) for entry in load_reference_equations()]
    for entry in reference:
        if entry["name"] == "N12.e3":
            entry["text"] = "a1j*c3j"
    matches = {m.name: m for m in compare_with_reference(system, reference)}
    assert not matches["N12.e3"].matched
    assert sum(m.matched for m in matches.values()) == 11


def test_missing_reference_entry(system):
    reference = [entry for entry in load_reference_equations() if entry["name"] != "N31.other"]
    matches = {m.name: m for m in compare_with_reference(system, reference)}
    assert matches["N31.other"].reference == "<missing>"
    assert not matches["N31.other"].matched


def test_factors_differ_only_by_renaming():
    two, three = symbolic_system(2), symbolic_system(3)
    mapping = {coefficient_name(l, r, 2): coefficient_name(l, r, 3) for l in LETTERS for r in (1, 2, 3)}
    for (name, a), (_, b) in zip(two.named(), three.named()):
        if isinstance(a, Polynomial):
            assert a.rename(mapping) == b, name
        else:
            assert a.map_coefficients(lambda c: c.rename(mapping)) == b, name


def test_text_is_deterministic(system):
    text = system.to_text()
    assert text == symbolic_system("j").to_text()
    assert text.splitlines()[0].startswith("N12.e1: ")
    assert all(line.endswith(" = 0") for line in text.splitlines())


@pytest.mark.parametrize("name", ["J", "J'"])
def test_vanishes_on_integrable_fixtures(name, fixtures, system):
    A = padded_fixture(fixtures[name])
    for j in range(1, 5):
        d = block_decompose(A, j)
        assert system_vanishes(evaluate_system(system, d, A.algebra))


def test_does_not_vanish_on_the_swap_structure(swap, system):
    values = evaluate_system(system, block_decompose(swap, 1), swap.algebra)
    assert not system_vanishes(values)
    assert values["N12.e3"] == 1
