import pytest

from hcx.errors import CertificateError
from hcx.models import StepKind
from hcx.nonexistence.certificate import Certificate
from hcx.nonexistence.checker import HANDLERS, replay, verify

SQUARES = """# tiny sum of squares
P h eq -> a1j**2 + 1 ; propNoRealSolutions
1 sum-of-squares-contradiction {"const":"1","in":"h","squares":["a1j"],"weights":["1"]} -> 1 ; propNoRealSolutions
QED sum-of-squares-contradiction
"""

COMBINE = """P e1 eq -> a1j - b1j ; x
P e2 eq -> b1j - 1 ; x
1 linear-combine {"in":["e1","e2"],"mul":["1","1"]} -> a1j - 1 ; x
"""

SUBSTITUTE = """P f eq -> a1j*b1j + 1 ; x
P l eq -> b1j - 2 ; x
1 substitute {"bind":[["l","b1j"]],"in":"f"} -> 2*a1j + 1 ; x
"""

NONZERO = """P f eq -> -b3j*c1j ; x
P n1 nz -> b3j ; x
P n2 nz -> c1j ; x
1 zero-vs-nonzero-contradiction {"const":"-1","in":"f","nonzero":["n1","n2"]} -> -1 ; x
QED zero-vs-nonzero-contradiction
"""

VECTOR_NONZERO = """P f veq -> <[X,Y]: 3> ; x
P w vnz -> <[X,Y]: 1> ; x
1 zero-vs-nonzero-contradiction {"const":"3","in":"f","nonzero":["w"]} -> 3 ; x
QED zero-vs-nonzero-contradiction
"""

HYPOTHESIS = """P e eq -> a1j*b1j + 1 ; x
P h hyp -> a1j ; x
P g eq -> a1j ; x
1 substitute {"bind":[["h","a1j"]],"in":"e"} -> 1 ; x
2 zero-vs-nonzero-contradiction {"const":"1","in":"#1","nonzero":[]} -> 1 ; x
3 zero-vs-nonzero-contradiction {"const":"1","in":"g","nonzero":["#2!h"]} -> 1 ; x
QED zero-vs-nonzero-contradiction
"""

BRIDGE = """P h hyp-basis -> ["X","Y","Z"] ; x
P f veq -> <X: 1 | Y: 1> ; x
P k basis from h -> ["X","Y"] ; x
P w nz from #2!h -> b1j ; x
P g eq -> b1j ; x
1 linear-combine {"basis":"k","in":["f@X"],"mul":["1"]} -> 1 ; x
2 zero-vs-nonzero-contradiction {"const":"1","in":"#1","nonzero":[]} -> 1 ; x
3 zero-vs-nonzero-contradiction {"const":"1","in":"g","nonzero":["w"]} -> 1 ; x
QED zero-vs-nonzero-contradiction
"""


def _replay(text, **kwargs):
    return replay(Certificate.parse(text), **kwargs)


def test_every_step_kind_has_a_handler():
    assert set(HANDLERS) == set(StepKind)


class TestAccepted:
    def test_sum_of_squares(self):
        result = _replay(SQUARES)
        assert result.ok
        assert result.steps_checked == 1
        assert result.contradiction == StepKind.SUM_OF_SQUARES_CONTRADICTION

    def test_zero_vs_nonzero(self):
        assert _replay(NONZERO).ok
        assert _replay(VECTOR_NONZERO).ok

    def test_identity_certificates(self):
        for text in (COMBINE, SUBSTITUTE):
            result = _replay(text, expect_contradiction=False)
            assert result.ok
            assert result.contradiction is None

    def test_discharged_hypothesis(self):
        result = _replay(HYPOTHESIS)
        assert result.ok
        assert result.steps_checked == 3

    def test_premise_given_by_a_discharge(self):
        assert _replay(BRIDGE).ok


class TestRejected:
    def test_tampered_output(self):
        result = _replay(SUBSTITUTE.replace("-> 2*a1j + 1", "-> 2*a1j - 1"), expect_contradiction=False)
        assert not result.ok
        assert result.failed_step == 1
        assert "recomputed" in result.message

    def test_wrong_multiplier(self):
        result = _replay(COMBINE.replace('"mul":["1","1"]', '"mul":["1","2"]'), expect_contradiction=False)
        assert not result.ok
        assert result.failed_step == 1

    def test_multiplier_count(self):
        result = _replay(COMBINE.replace('"mul":["1","1"]', '"mul":["1"]'), expect_contradiction=False)
        assert not result.ok
        assert "multipliers" in result.message

    def test_zero_constant(self):
        text = SQUARES.replace('"const":"1"', '"const":"0"')
        result = _replay(text)
        assert not result.ok
        assert "nonzero" in result.message

    def test_weight_of_the_wrong_sign(self):
        result = _replay(SQUARES.replace('"weights":["1"]', '"weights":["-1"]'))
        assert not result.ok
        assert result.failed_step == 1

    def test_missing_nonzero_premise(self):
        result = _replay(NONZERO.replace('"nonzero":["n1","n2"]', '"nonzero":["n1"]'))
        assert not result.ok
        assert result.failed_step == 1

    def test_nonzero_premise_must_have_the_nonzero_role(self):
        result = _replay(NONZERO.replace('"nonzero":["n1","n2"]', '"nonzero":["n1","f"]'))
        assert not result.ok
        assert "role" in result.message

    def test_missing_qed(self):
        text = SQUARES.replace("QED sum-of-squares-contradiction\n", "")
        result = _replay(text)
        assert not result.ok
        assert result.failed_step == 2
        assert result.steps_checked == 1

    def test_mismatched_qed(self):
        text = SQUARES.replace("QED sum-of-squares-contradiction", "QED zero-vs-nonzero-contradiction")
        result = _replay(text)
        assert not result.ok
        assert result.failed_step == 2

    def test_identity_certificate_is_not_a_contradiction(self):
        result = _replay(COMBINE)
        assert not result.ok
        assert result.failed_step == 2

    def test_unknown_premise(self):
        result = _replay(COMBINE.replace('"in":["e1","e2"]', '"in":["e1","e9"]'), expect_contradiction=False)
        assert not result.ok
        assert "unknown premise" in result.message

    def test_forward_step_reference(self):
        result = _replay(COMBINE.replace('"in":["e1","e2"]', '"in":["e1","#1"]'), expect_contradiction=False)
        assert not result.ok
        assert "earlier step" in result.message

    def test_renumbered_step(self):
        result = _replay(SQUARES.replace("\n1 sum-of", "\n2 sum-of"))
        assert not result.ok
        assert result.failed_step == 1

    def test_duplicate_premise(self):
        result = _replay(COMBINE.replace("P e2 eq", "P e1 eq"), expect_contradiction=False)
        assert not result.ok
        assert result.failed_step == 0

    def test_unexpected_data_key(self):
        result = _replay(COMBINE.replace('"mul"', '"extra":1,"mul"'), expect_contradiction=False)
        assert not result.ok
        assert result.message.startswith("malformed data")

    def test_non_linear_substitution(self):
        result = _replay(SUBSTITUTE.replace("P l eq -> b1j - 2", "P l eq -> b1j**2 - 2"), expect_contradiction=False)
        assert not result.ok
        assert "cannot be solved" in result.message

    def test_empty_certificate(self):
        result = replay(Certificate())
        assert not result.ok
        assert result.failed_step == 1

    def test_open_hypothesis(self):
        text = HYPOTHESIS.replace("P g eq -> a1j ; x\n", "").replace(
            '3 zero-vs-nonzero-contradiction {"const":"1","in":"g","nonzero":["#2!h"]} -> 1 ; x\n', ""
        )
        result = _replay(text)
        assert not result.ok
        assert result.failed_step == 3
        assert "undischarged" in result.message

    def test_discharge_needs_a_hypothesis(self):
        result = _replay(HYPOTHESIS.replace('"#2!h"', '"#2!e"'))
        assert not result.ok
        assert result.failed_step == 3
        assert "not a hypothesis" in result.message

    def test_discharge_needs_a_contradiction(self):
        result = _replay(HYPOTHESIS.replace('"#2!h"', '"#1!h"'))
        assert not result.ok
        assert "does not discharge" in result.message

    def test_discharge_is_not_a_vanishing_fact(self):
        result = _replay(HYPOTHESIS.replace('"in":"g"', '"in":"#2!h"'))
        assert not result.ok
        assert result.failed_step == 3

    def test_dependence_is_not_a_nonzero_value(self):
        result = _replay(BRIDGE.replace('"nonzero":["w"]', '"nonzero":["#2!h"]'))
        assert not result.ok
        assert "dependence" in result.message

    def test_premise_cited_before_its_givens_hold(self):
        result = _replay(BRIDGE.replace("from #2!h", "from #3!h"))
        assert not result.ok
        assert result.failed_step == 3
        assert "not established" in result.message

    def test_premise_among_its_own_givens(self):
        text = """P a nz from b -> a1j ; x
P b nz from a -> a1j ; x
P g eq -> a1j ; x
1 zero-vs-nonzero-contradiction {"const":"1","in":"g","nonzero":["a"]} -> 1 ; x
QED zero-vs-nonzero-contradiction
"""
        result = _replay(text)
        assert not result.ok
        assert "own givens" in result.message

    def test_uncited_step(self):
        text = SQUARES.replace(
            "\n1 sum-of-squares-contradiction",
            '\n1 linear-combine {"in":["h"],"mul":["2"]} -> 2*a1j**2 + 2 ; x\n2 sum-of-squares-contradiction',
        )
        result = _replay(text)
        assert not result.ok
        assert result.failed_step == 3
        assert "never cited: 1" in result.message

    def test_unused_premise(self):
        text = SQUARES.replace("P h eq", "P u eq -> b1j ; x\nP h eq")
        result = _replay(text)
        assert not result.ok
        assert result.failed_step == 2
        assert "never used: u" in result.message

    def test_unused_premise_in_an_identity_certificate(self):
        result = _replay(COMBINE + "P u eq -> b1j ; x\n", expect_contradiction=False)
        assert not result.ok
        assert result.failed_step == 2
        assert "never used: u" in result.message


def test_verify_raises_with_the_step():
    with pytest.raises(CertificateError) as info:
        verify(Certificate.parse(SQUARES.replace('"const":"1"', '"const":"0"')))
    assert info.value.step == 1
