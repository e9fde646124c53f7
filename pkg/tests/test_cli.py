from datetime import timezone
import json

import pytest

from hcx.acstruct import standard_quaternion_triple
from hcx.cli import main
from hcx.models import RunConfig, Subcommand


def _write_structure(path, A):
    path.write_text(A.to_payload().model_dump_json(), encoding="utf-8")
    return str(path)


class TestExamples:
    def test_fixtures_pass(self, capsys):
        assert main(["examples"]) == 0
        out = capsys.readouterr().out
        assert "J: integrable;" in out
        assert "J': integrable;" in out

    def test_factor_dims(self, capsys):
        assert main(["examples", "--factor-dims"]) == 0
        out = capsys.readouterr().out
        assert "J: (dim E, dim F) = (2, 1)" in out
        assert "J': (dim E, dim F) = (3, 1)" in out

    def test_mutation_fails(self, capsys):
        assert main(["examples", "--mutate", "J:1:1"]) == 1
        assert "J: NOT integrable" in capsys.readouterr().out

    @pytest.mark.parametrize("spec", ["J:0:1", "K:1:1", "J-1-1"])
    def test_bad_mutation(self, spec):
        assert main(["examples", "--mutate", spec]) == 64


class TestUsage:
    def test_help(self, capsys):
        assert main(["--help"]) == 0

    def test_no_subcommand(self):
        assert main([]) == 64

    def test_non_positive_trials(self):
        assert main(["search", "--trials", "0"]) == 64

    def test_unknown_case(self):
        assert main(["certify", "--case", "Z"]) == 64

    def test_config_is_stamped_in_utc(self):
        config = RunConfig(subcommand=Subcommand.SEARCH)
        assert config.created_at.tzinfo == timezone.utc


class TestCheck:
    def test_integrable_structure(self, tmp_path, fixtures, capsys):
        path = _write_structure(tmp_path / "J.json", fixtures["J"])
        assert main(["check", "--algebra", "su2^2", path]) == 0
        assert "structure: integrable" in capsys.readouterr().out

    def test_swap_structure_names_the_lemma(self, tmp_path, swap, capsys):
        path = _write_structure(tmp_path / "S.json", swap)
        assert main(["check", "--algebra", "su2^2", path]) == 2
        out = capsys.readouterr().out
        assert "NOT integrable" in out
        assert "Lemma lemSUj2dim violated in factor 1" in out

    def test_triple_reports_the_obstruction_chase(self, tmp_path, g4, capsys):
        paths = [_write_structure(tmp_path / f"{n}.json", A) for n, A in zip("IJK", standard_quaternion_triple(g4))]
        assert main(["check", "--algebra", "su2^4", *paths]) == 2
        out = capsys.readouterr().out
        assert "hypercomplex: no (first failure: integrability of" in out
        assert "obstruction (factors 1, 2):" in out

    @pytest.mark.parametrize("factor, pair", [("3", "3, 4"), ("4", "4, 1")])
    def test_triple_chases_the_requested_factor(self, tmp_path, g4, capsys, factor, pair):
        paths = [_write_structure(tmp_path / f"{n}.json", A) for n, A in zip("IJK", standard_quaternion_triple(g4))]
        assert main(["check", "--algebra", "su2^4", "--factor", factor, *paths]) == 2
        out = capsys.readouterr().out
        assert f"obstruction (factors {pair}):" in out
        assert "obstruction (factors 1, 2):" not in out

    def test_triple_factor_out_of_range(self, tmp_path, g4):
        paths = [_write_structure(tmp_path / f"{n}.json", A) for n, A in zip("IJK", standard_quaternion_triple(g4))]
        assert main(["check", "--algebra", "su2^4", "--factor", "5", *paths]) == 64

    def test_missing_file(self, tmp_path):
        assert main(["check", "--algebra", "su2^2", str(tmp_path / "nope.json")]) == 3

    def test_unreadable_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["check", "--algebra", "su2^2", str(path)]) == 3

    def test_dimension_mismatch(self, tmp_path, fixtures):
        path = _write_structure(tmp_path / "J.json", fixtures["J"])
        assert main(["check", "--algebra", "su2^4", path]) == 3

    def test_two_structures(self, tmp_path, fixtures):
        path = _write_structure(tmp_path / "J.json", fixtures["J"])
        assert main(["check", "--algebra", "su2^2", path, path]) == 64


class TestDerive:
    def test_prints_the_system(self, capsys):
        assert main(["derive-system"]) == 0
        out = capsys.readouterr().out
        assert len(out.splitlines()) == 12
        assert out.startswith("N12.e1: ")

    def test_compare(self, capsys):
        assert main(["derive-system", "--factor", "2", "--compare-paper"]) == 0
        assert "12/12 matched" in capsys.readouterr().out

    def test_bad_factor(self):
        assert main(["derive-system", "--factor", "k"]) == 64


class TestCertify:
    def test_emit_and_replay(self, tmp_path, capsys):
        path = tmp_path / "theorem.cert"
        assert main(["certify", "--output", str(path)]) == 0
        assert "replay ok:" in capsys.readouterr().out
        assert path.read_text(encoding="utf-8").rstrip().endswith("QED zero-vs-nonzero-contradiction")
        assert main(["certify", "--replay", str(path)]) == 0

    def test_case_to_stdout(self, capsys):
        assert main(["certify", "--case", "A2"]) == 0
        captured = capsys.readouterr()
        assert "QED sum-of-squares-contradiction" in captured.out
        assert "replay ok:" in captured.err

    def test_truncated_certificate(self, tmp_path, capsys):
        path = tmp_path / "theorem.cert"
        assert main(["certify", "--output", str(path)]) == 0
        lines = path.read_text(encoding="utf-8").splitlines()
        steps = [line for line in lines if line[:1].isdigit()]
        truncated = [line for line in lines if line != steps[-1]]
        path.write_text("\n".join(truncated) + "\n", encoding="utf-8")
        capsys.readouterr()
        assert main(["certify", "--replay", str(path)]) == 4
        assert f"replay failed at step {len(steps)}" in capsys.readouterr().out

    def test_garbage_certificate(self, tmp_path, capsys):
        path = tmp_path / "bad.cert"
        path.write_text("P h eq a1j\n", encoding="utf-8")
        assert main(["certify", "--replay", str(path)]) == 4
        assert "certificate rejected" in capsys.readouterr().out

    def test_missing_certificate(self, tmp_path):
        assert main(["certify", "--replay", str(tmp_path / "missing.cert")]) == 3


class TestSearch:
    def test_reproducible_report(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["search", "--trials", "4", "--seed", "3", "--output", str(first)]) == 0
        assert main(["search", "--trials", "4", "--seed", "3", "--output", str(second)]) == 0
        assert first.read_text() == second.read_text()
        report = json.loads(first.read_text())
        assert report["trials"] == 4
        assert report["best_residual"] > 1e-6
        assert report["best_seed"].startswith("3/")

    def test_system_oracle(self, capsys):
        assert main(["search", "--system-oracle", "--trials", "32", "--steps", "40", "--seed", "2"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["starts"] == 32
        assert report["minimum"] > 1e-3
