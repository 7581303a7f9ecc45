import json

import numpy as np
import pytest

from cosk import ctj
from cosk.cli import main
from cosk.model_spaces import fubini_study, s2xs2, space_form
from cosk.operators import cosk_spectrum
from cosk.tensor_core import random_act
from cosk.verify import default_fixture_dir

FIX = default_fixture_dir()


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "-")
    return code, json.loads(out)


class TestSpectrum:
    @pytest.mark.parametrize("name, eigs, amax", [
        ("s2xs2.ctj", [-1, 0, 0, 0, 0, 1, 1, 1, 1], 6.0),
        ("cp2_c4.ctj", [-2, -2, -2, 4, 4, 4, 4, 4, 4], 4.5),
        ("sphere4.ctj", [1] * 9, 9),
    ])
    def test_fixtures(self, capsys, name, eigs, amax):
        code, rep = report(capsys, "spectrum", FIX / name)
        assert code == 0
        assert rep["schema"] == "report-1" and rep["command"]["name"] == "spectrum"
        assert np.allclose(rep["results"]["eigs"], eigs, atol=1e-10)
        assert rep["results"]["max_alpha"] == pytest.approx(amax, abs=1e-9)
        assert rep["input_digest"].startswith("sha256:")
        assert "wall_time_s" not in rep

    def test_table_output(self, capsys):
        code, out, _ = run(capsys, "spectrum", FIX / "s2xs2.ctj")
        assert code == 0 and "max_alpha" in out and "alpha_sum(6)" in out

    def test_model_then_spectrum_is_bit_exact(self, capsys, tmp_path):
        path = tmp_path / "fs.ctj"
        assert run(capsys, "model", "fubini-study", "--m", 2, "--c", 4, "-o", path)[0] == 0
        _, rep = report(capsys, "spectrum", path)
        lib = cosk_spectrum(fubini_study(2, 4.0)[0])
        assert rep["results"]["eigs"] == [float(x) for x in lib.eigs]
        assert rep["results"]["scalar"] == lib.scalar

    def test_json_file_and_timing(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        run(capsys, "spectrum", FIX / "sphere4.ctj", "--json", out, "--timing")
        assert json.loads(out.read_text())["wall_time_s"] >= 0


class TestModel:
    def test_prints_digest(self, capsys, tmp_path):
        path = tmp_path / "p.ctj"
        code, out, _ = run(capsys, "model", "product-surfaces", "--k1", 1, "--k2", 2, "-o", path)
        assert code == 0 and out.strip() == ctj.digest(path.read_bytes())
        doc, _ = ctj.read(path)
        assert doc.R[0, 1, 0, 1] == 1.0 and doc.R[2, 3, 2, 3] == 2.0 and doc.J is None

    @pytest.mark.parametrize("name, argv", [
        ("s2xs2.ctj", ["s2xs2"]),
        ("cp2_c4.ctj", ["fubini-study", "--m", "2", "--c", "4"]),
        ("sphere4.ctj", ["space-form", "--n", "4", "--kappa", "1"]),
    ])
    def test_regenerates_fixtures_byte_for_byte(self, capsys, tmp_path, name, argv):
        path = tmp_path / name
        assert run(capsys, "model", *argv, "-o", path)[0] == 0
        assert path.read_bytes() == (FIX / name).read_bytes()

    def test_unknown_model(self, capsys, tmp_path):
        assert run(capsys, "model", "torus", "-o", tmp_path / "x.ctj")[0] == 2

    def test_bad_parameter(self, capsys, tmp_path):
        assert run(capsys, "model", "space-form", "--n", "four", "-o", tmp_path / "x.ctj")[0] == 2


class TestKahlerCheck:
    def test_cp2(self, capsys):
        code, rep = report(capsys, "kahler-check", FIX / "cp2_c4.ctj")
        res = rep["results"]
        assert code == 0 and res["six_nonneg"] is True
        assert res["min_orth_bisectional"] == pytest.approx(2.0)
        assert res["verdict"].startswith("consistent")

    def test_not_applicable(self, capsys, tmp_path):
        path = tmp_path / "neg.ctj"
        R, J = fubini_study(2, -4.0)
        ctj.write(path, R, J)
        code, rep = report(capsys, "kahler-check", path)
        assert code == 0 and rep["results"]["verdict"].startswith("not applicable")

    def test_s2xs2(self, capsys):
        code, rep = report(capsys, "kahler-check", FIX / "s2xs2.ctj", "--seed", 3)
        res = rep["results"]
        assert code == 0 and res["six_nonneg"] is True
        assert abs(res["min_orth_bisectional"]) <= 1e-12
        assert res["verdict"].startswith("consistent") and rep["seed"] == 3

    def test_missing_complex_structure(self, capsys):
        assert run(capsys, "kahler-check", FIX / "sphere4.ctj")[0] == 4

    def test_non_kahler_tensor_is_validation_error(self, capsys, tmp_path):
        path = tmp_path / "x.ctj"
        ctj.write(path, random_act(4, 0), s2xs2()[1])
        assert run(capsys, "kahler-check", path)[0] == 3


class TestDecompose4:
    def test_cp2_certificate(self, capsys):
        code, rep = report(capsys, "decompose4", FIX / "cp2_c4.ctj")
        res = rep["results"]
        assert code == 0 and res["certificate"]["verdict"] == "cp2-type"
        assert res["lambda"] == pytest.approx([4, -2, -2], abs=1e-12)
        assert res["einstein"] is True

    def test_orientation_flag(self, capsys):
        _, rep = report(capsys, "decompose4", FIX / "cp2_c4.ctj", "--orientation", -1)
        assert rep["results"]["mu"] == pytest.approx([4, -2, -2], abs=1e-12)
        assert run(capsys, "decompose4", FIX / "cp2_c4.ctj", "--orientation", 2)[0] == 2

    def test_wrong_dimension(self, capsys, tmp_path):
        path = tmp_path / "s5.ctj"
        ctj.write(path, space_form(5, 1.0))
        assert run(capsys, "decompose4", path)[0] == 5


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "spectrum", tmp_path / "nope.ctj")[0] == 2

    def test_malformed(self, capsys, tmp_path):
        path = tmp_path / "bad.ctj"
        path.write_text("{")
        assert run(capsys, "spectrum", path)[0] == 2

    def test_bianchi_violation(self, capsys, tmp_path):
        path = tmp_path / "bad.ctj"
        path.write_text(json.dumps({"format": "ctj-1", "n": 4,
                                    "components": [{"i": 1, "j": 2, "k": 3, "l": 4, "v": 1.0}]}))
        code, _, err = run(capsys, "spectrum", path)
        assert code == 3 and "defect" in err

    def test_no_subcommand(self, capsys):
        assert run(capsys)[0] == 2


class TestDeterminism:
    def test_byte_identical_reports(self, capsys):
        argv = ("kahler-check", FIX / "s2xs2.ctj", "--samples", 64, "--seed", 5, "--json", "-")
        run(capsys, *argv)
        first = run(capsys, *argv)[1]
        assert first == run(capsys, *argv)[1]

    def test_environment_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("COSK_SEED", "42")
        _, rep = report(capsys, "kahler-check", FIX / "s2xs2.ctj", "--samples", 8)
        assert rep["seed"] == 42
        monkeypatch.setenv("COSK_SEED", "x")
        assert run(capsys, "kahler-check", FIX / "s2xs2.ctj")[0] == 2
