import json

import pytest

from wpcurv.cli import ConfigError, RunConfig, load_config, main, resolve_config
from wpcurv.wp_tensor import TensorCache


def test_tensor_writes_loadable_cache(tmp_path, capsys):
    out = tmp_path / "entries.jsonl"
    assert main(["tensor", "--n", "2", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "4 entries" in printed
    cache = TensorCache.load(out)
    assert len(cache) == 4
    assert cache.content_hash()[:16] in printed


def test_tensor_warm_start_solves_nothing(tmp_path, capsys):
    out = tmp_path / "entries.jsonl"
    main(["tensor", "--n", "2", "--out", str(out)])
    capsys.readouterr()
    assert main(["tensor", "--n", "2", "--out", str(out)]) == 0
    assert "(0 solved)" in capsys.readouterr().out


def test_bad_truncation_exits_two(capsys):
    assert main(["tensor", "--n", "0"]) == 2
    err = capsys.readouterr().err
    assert "field 'n'" in err


def test_verify_passes_and_writes_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    code = main(["verify", "--n", "2", "--report", str(report_path)])
    out = capsys.readouterr().out
    assert code == 0
    for name in ("nonpositive", "bound", "kernel_dim", "noncompactness", "trend"):
        assert f"{name}: PASS" in out
    assert "overall: PASS" in out
    report = json.loads(report_path.read_text())
    assert set(report) == {"config", "tensor_hash", "spectra", "verdicts", "timings"}
    assert report["config"]["n"] == 2
    assert report["spectra"]["dimension"] == 6


def test_spectra_json_payload(tmp_path):
    out = tmp_path / "spectra.json"
    assert main(["spectra", "--n", "2", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["n"] == 2
    assert len(payload["eigenvalues"]) == 6
    assert payload["eigenvalues"] == sorted(payload["eigenvalues"])


def test_operator_csv_and_sidecar(tmp_path):
    out = tmp_path / "matrix.csv"
    assert main(["operator", "--n", "2", "--out", str(out)]) == 0
    rows = out.read_text().strip().split("\n")
    assert len(rows) == 6 and len(rows[0].split(",")) == 6
    sidecar = json.loads((tmp_path / "matrix.csv.index.json").read_text())
    assert sidecar["n"] == 2 and sidecar["dimension"] == 6


def test_noncompact_evidence_json(tmp_path):
    out = tmp_path / "evidence.json"
    assert main(["noncompact", "--i-max", "2", "--out", str(out)]) == 0
    evidence = json.loads(out.read_text())
    assert evidence["passed"]
    assert [b["i"] for b in evidence["per_block"]] == [0, 1, 2]


def test_oracle_beta_suite(tmp_path):
    out = tmp_path / "beta.json"
    assert main(["oracle", "--suite", "beta", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] and payload["suite"] == "beta"


def test_export_plots_row_counts(tmp_path):
    report_path = tmp_path / "report.json"
    assert main(["verify", "--n", "3", "--report", str(report_path)]) == 0
    plot_dir = tmp_path / "plots"
    code = main(["export-plots", "--report", str(report_path), "--out", str(plot_dir)])
    assert code == 0
    eigen_lines = (plot_dir / "eigenvalues.csv").read_text().strip().split("\n")
    assert eigen_lines[0] == "index,eigenvalue"
    assert len(eigen_lines) == 1 + 15
    trend_lines = (plot_dir / "diagonal_trend.csv").read_text().strip().split("\n")
    assert len(trend_lines) == 1 + 12
    block_lines = (plot_dir / "block_vectors.csv").read_text().strip().split("\n")
    assert len(block_lines) == 1 + 5
    assert block_lines[0] == "i,neg_form,floor"


def test_export_plots_needs_a_report(capsys):
    assert main(["export-plots"]) == 2
    assert "report" in capsys.readouterr().err


def test_export_plots_rejects_empty_report(tmp_path, capsys):
    report_path = tmp_path / "empty.json"
    report_path.write_text(json.dumps({"spectra": {"eigenvalues": []}}))
    assert main(["export-plots", "--report", str(report_path)]) == 2
    assert "no eigenvalues" in capsys.readouterr().err


def test_config_file_sets_truncation(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text("[run]\nn = 2\n")
    out = tmp_path / "spectra.json"
    assert main(["spectra", "--config", str(config), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["n"] == 2


def test_flag_overrides_config_file(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text("[run]\nn = 3\n")
    out = tmp_path / "spectra.json"
    code = main(["spectra", "--config", str(config), "--n", "2", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["n"] == 2


def test_unknown_config_key_exits_two(tmp_path, capsys):
    config = tmp_path / "run.toml"
    config.write_text("truncation = 3\n")
    assert main(["spectra", "--config", str(config)]) == 2
    assert "truncation" in capsys.readouterr().err


def test_load_config_flattens_tables(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text("jobs = 2\n[tolerances]\ntol_eigen = 1e-8\n")
    settings = load_config(config)
    assert settings == {"jobs": 2, "tol_eigen": 1e-8}


def test_run_config_validation_messages():
    for field, value in (
        ("i_max", -1),
        ("jobs", 0),
        ("quad_order", 0),
        ("tol_solver", 0.0),
        ("kernel_tol", -1e-9),
        ("projection_start", 0),
    ):
        config = RunConfig(**{field: value})
        with pytest.raises(ConfigError, match=field):
            config.validate()
