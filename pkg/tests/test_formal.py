import pytest

from hcx.errors import InputError
from hcx.nonexistence.formal import (
    CYCLES,
    FormalVector,
    binding_from_license,
    canonical_label,
    formal_bracket,
    orient,
    parse_rule,
    split_label,
)
from hcx.scalarpoly import Polynomial


class TestLabels:
    def test_cyclic_orientation(self):
        assert orient("X", "Y") == (1, "[X,Y]")
        assert orient("Y", "X") == (-1, "[X,Y]")
        assert orient("X", "Z") == (-1, "[Z,X]")
        assert orient("X", "X") == (0, None)
        assert orient("IEk", "KEj") == (1, "[IEk,KEj]")

    def test_cycles_are_fixed(self):
        assert isinstance(CYCLES, tuple)
        assert CYCLES == (("X", "Y", "Z"), ("KEj", "Ek", "IEk"))

    def test_lexicographic_orientation_outside_cycles(self):
        assert orient("JEk", "IEj") == (-1, "[IEj,JEk]")

    def test_split(self):
        assert split_label("I[KEj,Ek]") == ("I", ("KEj", "Ek"), "")
        assert split_label("IJEj") == ("IJ", None, "Ej")
        assert split_label("Ek") == ("", None, "Ek")
        assert split_label("[KEj,[Ek,IEk]]") == ("", ("KEj", "[Ek,IEk]"), "")
        with pytest.raises(InputError):
            split_label("[X,Y")

    def test_rules(self):
        assert parse_rule("IJ=>K") == ("IJ", "K", 1)
        assert parse_rule("JI=>-K") == ("JI", "K", -1)
        with pytest.raises(InputError):
            parse_rule("IJ->K")

    def test_canonical_label_with_rules(self):
        assert canonical_label("I[Ek,IJEj]", [parse_rule("IJ=>K")]) == (-1, "I[KEj,Ek]")
        assert canonical_label("[JEk,JIEj]", [parse_rule("JI=>-K")]) == (-1, "[JEk,KEj]")
        assert canonical_label("[X,X]") == (0, None)


class TestFormalVector:
    def test_text_round_trip(self):
        text = "<X: -a3j | Y: -b3j | Z: a1j + b2j | [X,Y]: -1>"
        v = FormalVector.parse(text)
        assert str(v) == text
        assert FormalVector.parse("<0>").is_zero()
        assert str(FormalVector()) == "<0>"

    def test_malformed(self):
        with pytest.raises(InputError):
            FormalVector.parse("X: 1")
        with pytest.raises(InputError):
            FormalVector.parse("<X 1>")

    def test_zero_coefficients_are_dropped(self):
        v = FormalVector.atom("X", 2) - FormalVector.atom("X", 2)
        assert v.is_zero()

    def test_bracket(self):
        u = FormalVector.from_pairs([("X", 1), ("Y", 1)])
        assert formal_bracket(u, FormalVector.atom("Y")) == FormalVector.atom("[X,Y]")
        assert formal_bracket(FormalVector.atom("Z"), FormalVector.atom("X")) == FormalVector.atom("[Z,X]")

    def test_binding_from_license(self):
        license = FormalVector.parse("<X: 2 | [X,Y]: 1>")
        assert binding_from_license(license, "[X,Y]") == FormalVector.parse("<X: -2>")
        assert binding_from_license(FormalVector.parse("<X: a1j>"), "X") is None
        assert binding_from_license(license, "Y") is None

    def test_relabel_reorients(self):
        v = FormalVector.atom("[Z,X]")
        assert v.relabel({"X": "Y", "Y": "Z", "Z": "X"}) == FormalVector.atom("[X,Y]")

    def test_replace_labels_under_an_operator(self):
        v = FormalVector.from_pairs([("I[IEk,JEj]", 1), ("[IEk,KEj]", 1)])
        out = v.replace_labels({"[IEk,JEj]": FormalVector()})
        assert out == FormalVector.atom("[IEk,KEj]")

    def test_replace_labels_inside_brackets(self):
        lam, mu = Polynomial.var("lam"), Polynomial.var("mu")
        v = FormalVector.from_pairs([("[KEj,[Ek,IEk]]", 1), ("[Ek,IEk]", 2)])
        value = FormalVector.from_pairs([("Ek", lam), ("JEk", mu)])
        out = v.replace_labels({"[Ek,IEk]": value}, inside_brackets=True)
        expected = FormalVector.from_pairs([
            ("[KEj,Ek]", lam), ("[JEk,KEj]", -mu), ("Ek", 2 * lam), ("JEk", 2 * mu),
        ])
        assert out == expected
        # without the flag the nested label is left alone
        assert v.replace_labels({"[Ek,IEk]": value}).coefficient("[KEj,[Ek,IEk]]") == 1

    def test_coefficient_substitution(self):
        v = FormalVector.parse("<X: b1j - a2j>")
        assert v.substitute({"b1j": Polynomial.var("a2j")}).is_zero()
