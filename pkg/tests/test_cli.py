"""CLI surface: run, suite, trace (serve is covered by the service tests)."""

import json

from click.testing import CliRunner

from neotaxis.cli import main


def test_run_builtin_scenario(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["run", "experiment1_forgetting_on", "--kind", "kmeans", "--out", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    assert "[pass]" in result.output
    logs = list(tmp_path.glob("*.jsonl"))
    figures = list(tmp_path.glob("*.png"))
    assert len(logs) == 1 and len(figures) == 1
    first = json.loads(logs[0].read_text().splitlines()[0])
    assert first["type"] == "meta"


def test_run_toml_scenario_file(tmp_path):
    from neotaxis.scenarios import dump_toml, experiment_3

    script_path = tmp_path / "exp3.toml"
    script_path.write_text(dump_toml(experiment_3(True)))
    runner = CliRunner()
    result = runner.invoke(
        main, ["run", str(script_path), "--kind", "tkm", "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output


def test_run_unknown_scenario_fails_cleanly():
    runner = CliRunner()
    result = runner.invoke(main, ["run", "experiment9"])
    assert result.exit_code != 0
    assert "no scenario file or builtin" in result.output


def test_run_failing_expectation_exits_nonzero(tmp_path):
    from neotaxis.scenarios import ScenarioScript, Expectation, NO_RESPONSE, dump_toml
    from neotaxis.arena import WorldEvent, LightSource

    script = ScenarioScript(
        name="impossible",
        duration=80,
        timeline=[(20, WorldEvent(action="add_light",
                                  light=LightSource(id="lamp", bearing=90.0)))],
        expectations=[Expectation(20, 80, NO_RESPONSE)],
    )
    path = tmp_path / "impossible.toml"
    path.write_text(dump_toml(script))
    runner = CliRunner()
    result = runner.invoke(main, ["run", str(path), "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "[FAIL]" in result.output


def test_trace_writes_csv_and_figure(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["trace", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    csv_text = (tmp_path / "habituation_trace.csv").read_text()
    assert csv_text.startswith("tick,alpha_1.05,alpha_1.2")
    assert (tmp_path / "habituation_trace.png").exists()
    # the dump reproduces the decay/recover/decay shape: value at the end of
    # the first segment is near the fixed point, mid-recovery is high again
    rows = [line.split(",") for line in csv_text.strip().splitlines()[1:]]
    v150 = float(rows[149][1])
    v200 = float(rows[199][1])
    assert abs(v150 - (1 - 1 / 1.05)) < 1e-3
    assert v200 > 0.9


def test_suite_single_cell(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["suite", "--kind", "kmeans", "--scenario-dir", "scenarios", "--out", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    assert (tmp_path / "suite_summary.csv").exists()
    assert (tmp_path / "suite_summary.png").exists()
