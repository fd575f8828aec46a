"""Front-end behavior: flags, payload grammar, exit codes, determinism."""

import json

import pytest

import iwarank.growth_model
from iwarank import cli


def run(capsys, *argv):
    try:
        code = cli.main(list(argv))
    except SystemExit as exc:  # argparse errors
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestEnvelope:
    def test_omega_payload(self, capsys):
        doc = run_json(capsys, "omega", "-p", "3", "-n", "2")
        assert doc["command"] == "omega"
        assert doc["context"] == {"margin": 8, "p": 3, "precision": 40}
        result = doc["result"]
        assert set(result) == {
            "n", "omega_n", "omega_plus", "omega_minus",
            "omega_tilde_plus", "omega_tilde_minus",
        }
        assert result["omega_tilde_minus"]["coeffs"] == ["3", "3", "1"]

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run(capsys, "omega", "-p", "3", "-n", "2")
        _, out2, _ = run(capsys, "omega", "-p", "3", "-n", "2")
        assert out1 == out2

    def test_seed_recorded(self, capsys):
        doc = run_json(capsys, "phi", "-p", "3", "-m", "1", "--seed", "7")
        assert doc["seed"] == 7


class TestFrozenCommands:
    def test_nabla_matrix_example(self, capsys):
        doc = run_json(
            capsys, "nabla", "matrix", "-p", "3", "-n", "1", "--matrix", "diag(X,X)"
        )
        r = doc["result"]
        assert (r["nabla"], r["closed_form"], r["agrees"]) == (2, 2, True)

    def test_phi_rejects_composite_p(self, capsys):
        code, _, err = run(capsys, "phi", "-p", "4", "-m", "1")
        assert code == 2
        assert "odd prime" in err

    def test_ord_eps(self, capsys):
        doc = run_json(capsys, "ord-eps", "-p", "3", "-m", "1", "--poly", "3")
        assert doc["result"]["ord"] == 2

    def test_ord_eps_infinite(self, capsys):
        doc = run_json(capsys, "ord-eps", "-p", "3", "-m", "1", "--poly", "X^2+3X+3")
        assert doc["result"]["ord"] == "inf"

    def test_invariants(self, capsys):
        doc = run_json(capsys, "invariants", "-p", "3", "--poly", "9X^2 + 27")
        assert doc["result"] == {"mu": 2, "lambda": 2}

    def test_growth_csv_is_raw(self, capsys):
        code, out, _ = run(
            capsys, "growth", "-p", "3", "--base-n", "0", "--base-e", "0",
            "--n-to", "4", "--format", "csv",
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "n,parity,s_prev,delta_e,e_n"
        assert [int(line.split(",")[3]) for line in lines[1:]] == [0, 6, 12, 42]

    def test_rod_check(self, capsys):
        doc = run_json(
            capsys, "rod-check", "-p", "3", "-n", "1", "--test-level", "2",
            "--matrix", "diag(1+X, 1)",
        )
        assert doc["result"]["ok"] is True


class TestPayloadGrammar:
    @pytest.mark.parametrize(
        "text,coeffs",
        [
            ("X^2 + 3X + 3", (3, 3, 1)),
            ("(1+X)**3 - 1", (0, 3, 3, 1)),
            ("2", (2,)),
            ("-X", (0, -1)),
            ("3(1+X)", (3, 3)),
            ("2X(X+1) - X**2", (0, 2, 1)),
        ],
    )
    def test_polynomial_forms(self, text, coeffs):
        assert cli.parse_poly_arg(text).coeffs == coeffs

    def test_grammar_reaches_commands(self, capsys):
        doc = run_json(capsys, "invariants", "-p", "3", "--poly", "3(1+X)")
        assert doc["result"] == {"mu": 1, "lambda": 0}

    def test_bracket_matrix(self, capsys):
        doc = run_json(
            capsys, "special-check", "-p", "3", "-n", "0",
            "--matrix", "[[X, 1], [1, X]]",
        )
        assert doc["result"]["verdict"] is True

    def test_json_poly_accepted(self, capsys):
        doc = run_json(
            capsys, "ord-eps", "-p", "3", "-m", "1", "--poly", '{"coeffs": ["3"]}'
        )
        assert doc["result"]["ord"] == 2

    def test_file_payload(self, capsys, tmp_path):
        path = tmp_path / "poly.txt"
        path.write_text("X^2+3X+3")
        doc = run_json(capsys, "invariants", "-p", "3", "--poly", f"@{path}")
        assert doc["result"] == {"mu": 0, "lambda": 2}

    def test_missing_file_is_exit2(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "invariants", "-p", "3", "--poly", f"@{tmp_path}/absent.txt"
        )
        assert code == 2

    @pytest.mark.parametrize("bad", ["X +", "diag(X", "[[X]]", "X & Y", "Y"])
    def test_malformed_payloads(self, capsys, bad):
        code, _, err = run(capsys, "invariants", "-p", "3", "--poly", bad)
        if code == 0:  # matrices are not polynomials; all must fail
            pytest.fail(f"accepted {bad!r}")
        assert code == 2
        assert err


class TestPrecisionResolution:
    def test_floor_enforced(self, capsys):
        code, _, err = run(capsys, "phi", "-p", "3", "-m", "1", "--precision", "4")
        assert code == 2

    def test_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("IWK_PRECISION", "12")
        doc = run_json(capsys, "phi", "-p", "3", "-m", "1")
        assert doc["context"]["precision"] == 12

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("IWK_PRECISION", "12")
        doc = run_json(capsys, "phi", "-p", "3", "-m", "1", "--precision", "16")
        assert doc["context"]["precision"] == 16

    def test_env_garbage_is_exit2(self, capsys, monkeypatch):
        monkeypatch.setenv("IWK_PRECISION", "lots")
        code, _, err = run(capsys, "phi", "-p", "3", "-m", "1")
        assert code == 2


class TestVerifySubcommand:
    def test_clean_suite_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "degrees")
        assert code == 0
        doc = json.loads(out)
        assert all(r["ok"] for r in doc["result"]["reports"])

    def test_injected_flip_exits_one(self, capsys, monkeypatch):
        # a single perturbed formula must surface as a failed verification
        true_s = iwarank.growth_model.s_sequence
        monkeypatch.setattr(
            iwarank.growth_model, "s_sequence", lambda p, n: true_s(p, n) + (n == 1)
        )
        code, out, _ = run(capsys, "verify", "--suite", "degrees")
        assert code == 1
        doc = json.loads(out)
        assert any(not r["ok"] for r in doc["result"]["reports"])
