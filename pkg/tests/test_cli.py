import json
import math
import subprocess
import sys

import numpy as np
import pytest

from benflow.cli import EXIT_EXPECTATION, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from benflow.dataio import fixture_text, load_matrix, parse_exact_spectrum, parse_monomial_label
from benflow.errors import UsageError
from benflow.exactreal import Monomial


@pytest.fixture
def rank_one_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("[[1, 1], [1, 1]]")
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyzeMatrix:
    def test_rank_one_spectrum(self, capsys, rank_one_json):
        code, out, _ = run_cli(capsys, "analyze-matrix", str(rank_one_json))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["dim"] == 2
        assert report["dominant"] == [{"re": 2.0, "im": 0.0}]
        assert report["hyperbolic"] is False
        assert report["algebraic_shortcut_nonresonant"] is False

    def test_csv_matrix(self, capsys, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,-3.14159265358979\n3.14159265358979,1\n")
        code, out, _ = run_cli(capsys, "analyze-matrix", str(path))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["hyperbolic"] is True

    def test_annotated_fixture_exact_verdict(self, capsys, tmp_path):
        path = tmp_path / "psi.json"
        path.write_text(fixture_text("ex-3-14-psi.json"))
        code, out, _ = run_cli(capsys, "analyze-matrix", str(path))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["exact"]["resonant"] is True
        assert report["exact"]["witness"] == {"kind": "span-membership", "q": 2, "p": [1]}

    def test_annotated_nonresonant_fixture(self, capsys, tmp_path):
        path = tmp_path / "three.json"
        path.write_text(fixture_text("ex-3-5.json"))
        code, out, _ = run_cli(capsys, "--base", "2", "analyze-matrix", str(path))
        report = json.loads(out)
        assert code == EXIT_OK
        assert report["exact"]["resonant"] is False

    def test_parse_error_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[[1, 2], [3,]]")
        code, _, err = run_cli(capsys, "analyze-matrix", str(path))
        assert code == EXIT_USAGE
        assert "line" in err and "column" in err

    def test_non_square_exit_2(self, capsys, tmp_path):
        path = tmp_path / "rect.json"
        path.write_text("[[1, 2, 3], [4, 5, 6]]")
        code, _, err = run_cli(capsys, "analyze-matrix", str(path))
        assert code == EXIT_USAGE
        assert "square" in err

    def test_zero_matrix(self, capsys, tmp_path):
        path = tmp_path / "zero.json"
        path.write_text("[[0]]")
        code, out, _ = run_cli(capsys, "analyze-matrix", str(path))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["eigenvalues"][0]["re"] == 0.0
        assert report["algebraic_shortcut_nonresonant"] is False

    def test_csv_format_output(self, capsys, rank_one_json):
        code, out, _ = run_cli(capsys, "--format", "csv", "analyze-matrix", str(rank_one_json))
        assert code == EXIT_OK
        assert out.splitlines()[0] == "re,im,multiplicity,jordan_index"


class TestBenfordCommand:
    def test_synthetic_pass(self, capsys):
        code, out, _ = run_cli(
            capsys, "--horizon", "2000", "benford", "--synthetic", "r=1,k=0,modes=0:1"
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["verdict"] == "BENFORD_PASS"

    def test_matrix_norm_fail(self, capsys, tmp_path):
        path = tmp_path / "psi.json"
        path.write_text(fixture_text("ex-3-14-psi.json"))
        code, out, _ = run_cli(
            capsys, "--horizon", "2000", "benford", "--matrix", str(path), "--norm", "spectral"
        )
        assert code == EXIT_OK
        assert json.loads(out)["verdict"] == "FAIL"

    def test_matrix_with_observable(self, capsys, tmp_path):
        gen = tmp_path / "gen.json"
        gen.write_text("[[1, -3.141592653589793], [3.141592653589793, 1]]")
        obs = tmp_path / "obs.json"
        obs.write_text("[[1, 0], [0, 0]]")
        code, out, _ = run_cli(
            capsys,
            "--horizon",
            "2000",
            "benford",
            "--matrix",
            str(gen),
            "--observable",
            str(obs),
        )
        assert code == EXIT_OK
        assert json.loads(out)["verdict"] == "BENFORD_PASS"

    def test_all_zero_csv_trivial(self, capsys, tmp_path):
        path = tmp_path / "zeros.csv"
        path.write_text("\n".join(f"{i * 0.1},0.0" for i in range(200)))
        code, out, _ = run_cli(capsys, "benford", "--signal-csv", str(path))
        assert code == EXIT_OK
        assert json.loads(out)["verdict"] == "TRIVIAL"

    def test_non_numeric_csv_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,1.0\n0.1,banana\n")
        code, _, err = run_cli(capsys, "benford", "--signal-csv", str(path))
        assert code == EXIT_USAGE
        assert "line 2" in err

    def test_digit_and_ecdf_csv_emission(self, capsys, tmp_path):
        digits = tmp_path / "digits.csv"
        ecdf = tmp_path / "ecdf.csv"
        code, _, _ = run_cli(
            capsys,
            "--horizon",
            "1000",
            "benford",
            "--synthetic",
            "r=1,k=0,modes=0:1",
            "--digits-csv",
            str(digits),
            "--ecdf-csv",
            str(ecdf),
        )
        assert code == EXIT_OK
        digit_lines = digits.read_text().splitlines()
        assert digit_lines[0] == "digit,observed,target"
        assert len(digit_lines) == 10
        ecdf_lines = ecdf.read_text().splitlines()
        assert ecdf_lines[0] == "significand,ecdf,target"
        assert len(ecdf_lines) > 100

    def test_overflow_truncation_exit_3(self, capsys, tmp_path):
        gen = tmp_path / "gen.json"
        gen.write_text("[[0, 1e304], [0, 0]]")
        obs = tmp_path / "obs.json"
        obs.write_text("[[0, 1], [0, 0]]")
        code, out, _ = run_cli(
            capsys,
            "--horizon",
            "50000",
            "--step",
            "5",
            "benford",
            "--matrix",
            str(gen),
            "--observable",
            str(obs),
        )
        assert code == EXIT_NUMERIC
        assert json.loads(out)["truncated_at"] is not None

    def test_bad_synthetic_spec_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "benford", "--synthetic", "r=banana")
        assert code == EXIT_USAGE


class TestExampleCommand:
    def test_known_example_passes(self, capsys):
        code, out, _ = run_cli(capsys, "example", "ex-3-12")
        assert code == EXIT_OK
        result = json.loads(out)
        assert result["passed"] is True

    def test_unknown_id_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "example", "ex-9-99")
        assert code == EXIT_USAGE
        assert "ex-3-14" in err  # the error lists known ids

    def test_expectation_failure_exit_4(self, capsys, tmp_path):
        # absurd thresholds force a conformant signal into FAIL territory
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"thresholds": {"distance": 1e-9, "weyl_multiplier": 1e-9}}))
        code, out, _ = run_cli(capsys, "--config", str(config), "example", "ex-3-4-i")
        assert code == EXIT_EXPECTATION
        assert json.loads(out)["passed"] is False


class TestCensusCommand:
    def test_gaussian_census(self, capsys):
        code, out, _ = run_cli(
            capsys, "census", "--dim", "3", "--n", "200", "--dist", "gaussian", "--tol", "1e-8"
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["n"] == 200
        assert report["imaginary_axis_hits"] == 0

    def test_integer_census_has_hits(self, capsys):
        code, out, _ = run_cli(capsys, "census", "--dim", "2", "--n", "300", "--dist", "int1")
        assert code == EXIT_OK
        assert json.loads(out)["imaginary_axis_hits"] > 0

    def test_zero_samples_exit_2(self, capsys):
        code, _, _ = run_cli(capsys, "census", "--dim", "2", "--n", "0")
        assert code == EXIT_USAGE

    def test_determinism_byte_identical(self, capsys, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        for out in (out1, out2):
            code = main(
                ["--seed", "33", "--out", str(out), "census", "--dim", "2", "--n", "100"]
            )
            assert code == EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "--format", "csv", "census", "--dim", "2", "--n", "50"
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0].startswith("n,imaginary_axis_hits")


class TestConfigFile:
    def test_config_overrides_defaults(self, capsys, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"horizon": 1500.0, "step": 0.05, "base": 2}))
        code, out, _ = run_cli(
            capsys, "--config", str(config), "benford", "--synthetic", "r=1,k=0,modes=0:1"
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["base"] == 2
        assert report["horizon"] == 1500.0

    def test_cli_flag_beats_config(self, capsys, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"base": 2}))
        code, out, _ = run_cli(
            capsys,
            "--config",
            str(config),
            "--base",
            "10",
            "--horizon",
            "1000",
            "benford",
            "--synthetic",
            "r=1,k=0,modes=0:1",
        )
        assert json.loads(out)["base"] == 10

    def test_unknown_config_key_exit_2(self, capsys, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"horzon": 1.0}))
        code, _, err = run_cli(capsys, "--config", str(config), "example", "ex-3-8")
        assert code == EXIT_USAGE


class TestDataIO:
    def test_monomial_label_parsing(self):
        assert parse_monomial_label("1") == Monomial()
        assert parse_monomial_label("pi*ln10^-1") == Monomial.of(pi=1, ln10=-1)
        assert parse_monomial_label("pi^2") == Monomial.of(pi=2)
        with pytest.raises(UsageError):
            parse_monomial_label("pi^x")

    def test_fixture_annotations_parse(self):
        for name in (
            "ex-3-14-phi.json",
            "ex-3-14-psi.json",
            "ex-3-5.json",
            "ex-3-9.json",
            "ex-3-12-reversed.json",
        ):
            data = json.loads(fixture_text(name))
            zs = parse_exact_spectrum(data["exact_spectrum"])
            assert len(zs) == len(data["matrix"])
            # numeric check: annotation values match the float eigenvalues
            eigs = sorted(np.linalg.eigvals(np.array(data["matrix"])), key=lambda z: (round(z.real, 9), z.imag))
            annotated = sorted((z.value() for z in zs), key=lambda z: (round(z.real, 9), z.imag))
            for e, a in zip(eigs, annotated):
                assert abs(e - a) < 1e-9, name

    def test_unknown_fixture_lists_available(self):
        with pytest.raises(UsageError, match="available"):
            fixture_text("nope.json")

    def test_load_matrix_object_form(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({"matrix": [[1.0, 0.0], [0.0, 2.0]]}))
        matrix, annotation = load_matrix(path)
        assert matrix.tolist() == [[1.0, 0.0], [0.0, 2.0]]
        assert annotation is None


def test_console_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "benflow.cli", "--version"], capture_output=True, text=True
    )
    assert result.returncode == 0
    assert "benflow" in result.stdout
