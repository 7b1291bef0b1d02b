import json
from pathlib import Path

import pytest

from starmetric.cli import main
from starmetric.modelio import bundled_model_path, load_model, ModelError
from starmetric.phasepoly import CouplingSeries

GOLDENS = Path(__file__).parent / "goldens"
IX3 = str(bundled_model_path("ix3"))
SHIFTED = str(bundled_model_path("shifted"))
QUADRATIC = str(bundled_model_path("quadratic"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert out, f"no stdout; stderr: {err}"
    return code, json.loads(out)


class TestSolveAndLog:
    def test_solve_matches_golden_file(self, capsys):
        code, payload = run_json(capsys, "solve", "--model", IX3, "--order", "3")
        assert code == 0
        produced = CouplingSeries.from_json(payload["series"])
        with open(GOLDENS / "ix3_theta_order3.json", encoding="utf-8") as fh:
            golden = CouplingSeries.from_json(json.load(fh))
        assert produced == golden
        assert payload["residual_zero"] is True

    def test_starlog_matches_golden_file(self, capsys):
        code, payload = run_json(capsys, "starlog", "--model", IX3, "--order", "3")
        assert code == 0
        produced = CouplingSeries.from_json(payload["log"])
        with open(GOLDENS / "ix3_log_order3.json", encoding="utf-8") as fh:
            golden = CouplingSeries.from_json(json.load(fh))
        assert produced == golden

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "solve", "--model", IX3, "--order", "2")
        _, out2, _ = run(capsys, "solve", "--model", IX3, "--order", "2")
        assert out1 == out2


class TestCertifyResidual:
    def test_certify_ix3(self, capsys):
        code, payload = run_json(capsys, "certify", "--model", IX3, "--order", "3")
        assert code == 0
        assert payload["hermitian"] is True and payload["positive"] is True

    def test_certify_multiple_with_jobs(self, capsys):
        code, payload = run_json(
            capsys, "certify", "--model", IX3, "--model", IX3, "--order", "1", "--jobs", "2"
        )
        assert code == 0
        assert len(payload["reports"]) == 2

    def test_certify_rejects_uncoupled_model(self, capsys):
        code, out, err = run(capsys, "certify", "--model", SHIFTED)
        assert code == 2

    def test_residual_shifted_expquad(self, capsys):
        code, payload = run_json(
            capsys, "residual", "--model", SHIFTED, "--theta", "expquad:exp(-2p)"
        )
        assert code == 0
        assert payload["residual_zero"] is True

    def test_residual_failure_exit_code(self, capsys):
        code, payload = run_json(
            capsys, "residual", "--model", SHIFTED, "--theta", "expquad:exp(-3p)"
        )
        assert code == 1
        assert payload["residual_zero"] is False

    def test_residual_identity_for_hermitian_candidate(self, capsys):
        code, payload = run_json(capsys, "residual", "--model", IX3, "--theta", "one")
        assert code == 1  # H = p^2 + i g x^3 is not hermitian, Theta = 1 fails


class TestFamily:
    @pytest.mark.parametrize("obs", ["p", "x"])
    def test_exact_branches(self, capsys, obs):
        code, payload = run_json(capsys, "family", "--model", QUADRATIC, "--observable", obs)
        assert code == 0
        assert payload["metric_residual_zero"] is True
        assert payload["observable_residual_zero"] is True
        assert payload["branch_identities_zero"] is True

    def test_x_branch_flags_alternative(self, capsys):
        code, payload = run_json(capsys, "family", "--model", QUADRATIC, "--observable", "x")
        assert payload["alternative_t_c_over_2b_residual_zero"] is False

    def test_number_observable(self, capsys):
        code, payload = run_json(
            capsys, "family", "--model", QUADRATIC, "--observable", "N", "--order", "3"
        )
        assert code == 0
        assert payload["hermitian"] and payload["positive"] and payload["log_linear_in_N"]


class TestOtherCommands:
    def test_check_hermitian_exit_codes(self, capsys, tmp_path):
        code, payload = run_json(capsys, "check-hermitian", "--model", IX3)
        assert code == 1 and payload["hermitian"] is False
        hermitian_model = {
            "name": "free",
            "hamiltonian": {"terms": [{"x": 0, "p": 2, "hbar": 0, "coeff": {"re": "1", "im": "0"}}]},
        }
        path = tmp_path / "free.json"
        path.write_text(json.dumps(hermitian_model), encoding="utf-8")
        code, payload = run_json(capsys, "check-hermitian", "--model", str(path))
        assert code == 0 and payload["hermitian"] is True

    def test_dagger_output(self, capsys):
        code, payload = run_json(capsys, "dagger", "--model", QUADRATIC, "--latex")
        assert code == 0
        assert "latex" in payload

    def test_star_command(self, capsys):
        code, payload = run_json(capsys, "star", "--model", SHIFTED, "--theta", "p^2")
        assert code == 0
        assert "h_star_theta" in payload and "theta_star_hdagger" in payload

    def test_pde_shifted(self, capsys):
        code, payload = run_json(capsys, "pde", "--model", SHIFTED)
        assert code == 0
        slots = {(c["dx"], c["dp"]) for c in payload["coefficients"]}
        assert slots == {(0, 0), (0, 1), (0, 2), (1, 0), (2, 0)}

    def test_berry_osc(self, capsys):
        code, payload = run_json(capsys, "berry-osc", "--q1", "1", "--q2", "1")
        assert code == 0
        assert payload["curvature_zero"] and payload["residuals_zero"]
        assert payload["point"]["locus_value"] == "5"

    def test_berry2x2(self, capsys):
        code, payload = run_json(capsys, "berry2x2", "--trials", "3", "--seed", "11")
        assert code == 0
        assert payload["rank_deficient_at"] == [[0.0, 1.0], [0.0, -1.0]]

    def test_scan_locus_grid(self, capsys):
        code, payload = run_json(capsys, "scan-locus", "--q1=-1:1:3", "--q2=0:2:2")
        assert code == 0
        assert payload["count"] == 6
        signs = {(r["q1"], r["q2"]): r["region_sign"] for r in payload["records"]}
        assert signs[(-1.0, 0.0)] == -1 and signs[(1.0, 2.0)] == 1
        assert signs[(-1.0, 2.0)] == 0  # 4(-1) + 4 = 0: on the locus

    def test_scan_locus_jobs_deterministic(self, capsys):
        _, out1, _ = run(capsys, "scan-locus", "--q1=-1:1:3", "--q2=0:2:2", "--jobs", "2")
        _, out2, _ = run(capsys, "scan-locus", "--q1=-1:1:3", "--q2=0:2:2")
        assert json.loads(out1)["records"] == json.loads(out2)["records"]

    def test_scan_locus_oscillator_point(self, capsys):
        code, payload = run_json(
            capsys, "scan-locus", "--omega", "1", "--alpha", "0", "--beta", "0"
        )
        assert code == 0
        rec = payload["records"][0]
        assert rec["locus_value"] == 4.0 and rec["region_sign"] == 1

    def test_finite_oracle(self, capsys):
        code, payload = run_json(
            capsys, "finite-oracle", "--n", "3", "--trials", "5", "--seed", "9"
        )
        assert code == 0
        assert payload["failures"] == 0

    def test_emit_latex(self, capsys):
        code, payload = run_json(capsys, "emit-latex", "--model", IX3, "--order", "1")
        assert code == 0
        assert payload["hamiltonian"] == "p^{2} + i g x^{3}"
        assert "metric_series" in payload


class TestErrorHandling:
    def test_malformed_json_line_column(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "name": oops\n}', encoding="utf-8")
        code, out, err = run(capsys, "residual", "--model", str(path), "--theta", "one")
        assert code == 2
        assert "line 2" in err and "column" in err

    def test_unknown_model_keys_rejected(self, capsys, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text(
            json.dumps({"name": "m", "hamiltonian": {"terms": []}, "surprise": 1}),
            encoding="utf-8",
        )
        code, out, err = run(capsys, "solve", "--model", str(path))
        assert code == 2 and "surprise" in err

    def test_unknown_option_keys_rejected(self, tmp_path):
        path = tmp_path / "opt.json"
        path.write_text(
            json.dumps({"name": "m", "hamiltonian": {"terms": []}, "options": {"tolerance": 1}}),
            encoding="utf-8",
        )
        with pytest.raises(ModelError):
            load_model(path)

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "solve", "--model", "nope.json")
        assert code == 2

    def test_bad_theta_expression(self, capsys):
        code, out, err = run(capsys, "residual", "--model", SHIFTED, "--theta", "exp(-2p")
        assert code == 2


class TestBundledModels:
    def test_all_bundled_models_load(self):
        for name in ("ix3", "shifted", "quadratic"):
            model = load_model(bundled_model_path(name))
            assert model.name
