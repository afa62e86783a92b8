"""Tests for the scenario orchestrator and command-line entry point."""

import csv
import json

import pytest

from spslab import cli


def run_scenario(tmp_path, scenario, **overrides):
    overrides.setdefault("out_dir", str(tmp_path))
    config = cli.default_config(scenario, **overrides)
    return cli.run(config)


def test_config_from_dict_rejects_unknown_keys():
    with pytest.raises(ValueError):
        cli.config_from_dict({"scenario": "energy", "bogus": 1})


def test_config_file_scenario_key_is_ignored(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scenario": "ignored", "K": [3], "alpha": [0.6]}))
    code = cli.main(["dyadic-lemma", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 0
    payload = json.loads((tmp_path / "o" / "report.json").read_text())
    assert payload["scenario"] == "dyadic-lemma"


def test_run_rejects_unknown_scenario(tmp_path):
    with pytest.raises(ValueError):
        cli.run(cli.config_from_dict({"scenario": "nope", "out_dir": str(tmp_path)}))


def test_require_rejects_empty_grid(tmp_path):
    with pytest.raises(ValueError):
        run_scenario(tmp_path, "energy", p=[])


def test_exit_code_levels():
    def report(verdicts):
        return cli.ScenarioReport(
            scenario="x", config={}, rows=[], verdicts=verdicts, runtimes={}, environment={}
        )

    assert report({"a": cli.PASS}).exit_code == 0
    assert report({"a": cli.PASS, "b": cli.INCONCLUSIVE}).exit_code == 3
    assert report({"a": cli.INCONCLUSIVE, "b": cli.FAIL}).exit_code == 2


def test_energy_scenario_writes_report(tmp_path):
    report = run_scenario(tmp_path, "energy")
    assert report.exit_code == 0
    rows_path = tmp_path / "rows.csv"
    with open(rows_path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(report.rows)
    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["scenario"] == "energy"
    assert payload["verdicts"] == {"term_signs": "pass"}
    assert "runtimes_s" in payload and "environment" in payload


def test_rows_csv_is_reproducible(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    run_scenario(d1, "dyadic-lemma", K=[3, 5])
    run_scenario(d2, "dyadic-lemma", K=[3, 5])
    assert (d1 / "rows.csv").read_bytes() == (d2 / "rows.csv").read_bytes()


def test_tent_sweep_via_main(tmp_path, capsys):
    code = cli.main(["tent-sweep", "--out", str(tmp_path), "--seed", "1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "tent_bounds: pass" in out
    assert "lp_slope: pass" in out


def test_main_reports_errors_with_exit_one(tmp_path, capsys):
    code = cli.main(["no-such-scenario", "--out", str(tmp_path)])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_main_reads_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"K": [3, 5], "alpha": [0.6]}))
    code = cli.main(
        ["dyadic-lemma", "--config", str(cfg), "--out", str(tmp_path / "out")]
    )
    assert code == 0
    payload = json.loads((tmp_path / "out" / "report.json").read_text())
    assert payload["config"]["K"] == [3, 5]


def test_workers_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("SPSLAB_WORKERS", "2")
    code = cli.main(
        [
            "lambda-positivity",
            "--out",
            str(tmp_path),
            "--config",
            str(_quick_positivity_config(tmp_path)),
        ]
    )
    assert code == 0
    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["config"]["workers"] == 2


def _quick_positivity_config(tmp_path):
    path = tmp_path / "pos.json"
    path.write_text(json.dumps({"restarts": 2, "n": 129, "max_iters": 500}))
    return path


def test_hls_check_failure_exit_code(tmp_path):
    report = run_scenario(tmp_path, "hls-check", hls_cap=1e-9)
    assert report.exit_code == 2
    assert report.verdicts["bounded"] == "fail"
    assert report.verdicts["dilation_invariant"] == "pass"


def test_sweep_lambda_inconclusive_with_single_point(tmp_path):
    report = run_scenario(
        tmp_path,
        "sweep-lambda",
        p=[2.8],
        lam=[1e-6],
        n=257,
        r_max=60.0,
        init_amplitude=1e-3,
        init_width=10.0,
        grad_tol=1e-6,
        max_iters=5000,
    )
    # one converged point cannot certify a decreasing distance sequence
    assert report.verdicts["distances_decrease"] in ("inconclusive", "pass")
    if len([r for r in report.rows if r.get("converged")]) < 2:
        assert report.exit_code == 3


def test_bump_sweep_scenario(tmp_path):
    report = run_scenario(tmp_path, "bump-sweep")
    assert report.exit_code == 0
    assert report.verdicts == {"bump_sums": "pass"}


def test_dilated_bump_sweep_scenario(tmp_path):
    report = run_scenario(tmp_path, "dilated-bump-sweep")
    assert report.exit_code == 0
