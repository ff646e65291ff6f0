"""Command-line entry points: run, suite, serve, trace."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import reporting, scenarios
from .clustering import KINDS
from .habituation import DIVISIVE, MULTIPLICATIVE, HabituationParams
from .harness import SimConfig, load_config, run_scenario, run_suite


def _resolve_scenario(name_or_path: str) -> scenarios.ScenarioScript:
    path = Path(name_or_path)
    if path.exists():
        return scenarios.load_toml(path)
    try:
        return scenarios.builtin(name_or_path)
    except KeyError:
        raise click.ClickException(
            f"no scenario file or builtin named {name_or_path!r}; "
            f"builtins: {', '.join(scenarios.builtin_names())}"
        )


def _base_config(config_path: str | None, kind: str | None,
                 forgetting: bool | None, seed: int | None) -> SimConfig:
    overrides = {}
    if kind is not None:
        overrides["kind"] = kind
    if forgetting is not None:
        overrides["forgetting"] = forgetting
    if seed is not None:
        overrides["seed"] = seed
    return load_config(config_path, **overrides)


@click.group()
def main():
    """Novelty-driven robot simulation: habituating filters over clusterers."""


@main.command()
@click.argument("scenario")
@click.option("--kind", type=click.Choice(KINDS), default=None, help="Clusterer back-end.")
@click.option("--forgetting/--no-forgetting", default=None, help="Override the forgetting toggle.")
@click.option("--seed", type=int, default=None, help="Run seed (NEOTAXIS_SEED wins).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Base config TOML.")
@click.option("--out", type=click.Path(file_okay=False), default="runs",
              help="Output directory for the JSONL log and figure.")
def run(scenario, kind, forgetting, seed, config_path, out):
    """Run one scenario (builtin name or TOML file) and judge it."""
    script = _resolve_scenario(scenario)
    config = _base_config(config_path, kind, forgetting, seed)
    log = run_scenario(script, base_config=config)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{log.scenario}_{log.kind}_seed{log.seed}"
    log_path = out_dir / f"{stem}.jsonl"
    log.write(log_path)
    threshold = config.with_overrides(script.overrides).boredom_threshold
    fig_path = reporting.run_figure(log, threshold, out_dir / f"{stem}.png")
    for verdict in log.verdicts:
        status = "pass" if verdict.passed else "FAIL"
        target = f" -> {verdict.light_id}" if verdict.light_id else ""
        click.echo(
            f"[{status}] {verdict.expect}{target} in window {list(verdict.window)}"
        )
    click.echo(f"log:    {log_path}")
    click.echo(f"figure: {fig_path}")
    if not log.passed:
        sys.exit(1)


@main.command()
@click.option("--kind", "kinds", type=click.Choice(KINDS), multiple=True,
              help="Clusterer back-ends (default: all three).")
@click.option("--seed", type=int, default=None, help="Seed applied to every cell.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--scenario-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Directory of scenario TOML files (default: builtin suite).")
@click.option("--out", type=click.Path(file_okay=False), default="runs")
def suite(kinds, seed, config_path, scenario_dir, out):
    """Run the scenario-by-clusterer matrix and write CSV plus figure."""
    if scenario_dir is not None:
        scripts = [scenarios.load_toml(p) for p in sorted(Path(scenario_dir).glob("*.toml"))]
        if not scripts:
            raise click.ClickException(f"no .toml scenarios in {scenario_dir}")
    else:
        scripts = scenarios.standard_suite()
    kind_list = list(kinds) if kinds else list(KINDS)
    config = _base_config(config_path, None, None, None)
    result = run_suite(scripts, kind_list, seed=seed, base_config=config)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "suite_summary.csv"
    result.to_csv(csv_path)
    fig_path = reporting.suite_figure(result, out_dir / "suite_summary.png")
    click.echo(result.format_table())
    click.echo(f"csv:    {csv_path}")
    click.echo(f"figure: {fig_path}")
    if not result.ok:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=7141, show_default=True)
@click.option("--ms-per-tick", type=float, default=50.0, show_default=True,
              help="Real-time pacing of the simulation loop.")
@click.option("--kind", type=click.Choice(KINDS), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(host, port, ms_per_tick, kind, seed, config_path):
    """Run the live simulation behind the NDJSON control-panel socket."""
    from .service import Service

    config = _base_config(config_path, kind, None, seed)
    service = Service(config=config, host=host, port=port, ms_per_tick=ms_per_tick)
    click.echo(f"serving on {service.address[0]}:{service.address[1]} "
               f"({ms_per_tick} ms/tick, kind={config.kind}); Ctrl-C to stop")
    service.run_forever()


@main.command()
@click.option("--alpha", "alphas", type=float, multiple=True, default=(1.05, 1.2),
              show_default=True, help="Recovery constants, one curve each.")
@click.option("--tau", type=float, default=20.0, show_default=True)
@click.option("--mode", type=click.Choice([DIVISIVE, MULTIPLICATIVE]), default=DIVISIVE,
              show_default=True)
@click.option("--schedule", default="150:1,50:0,100:1", show_default=True,
              help="Comma-separated duration:stimulus segments.")
@click.option("--out", type=click.Path(file_okay=False), default="runs")
def trace(alphas, tau, mode, schedule, out):
    """Dump habituation curves (CSV plus figure) for given constants."""
    try:
        parsed = [
            (int(part.split(":")[0]), float(part.split(":")[1]))
            for part in schedule.split(",")
        ]
    except (ValueError, IndexError):
        raise click.ClickException("schedule must look like '150:1,50:0,100:1'")
    param_sets = [HabituationParams(tau=tau, alpha=a, mode=mode) for a in alphas]
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    from .habituation import simulate_trace

    traces = [simulate_trace(p, parsed) for p in param_sets]
    csv_path = out_dir / "habituation_trace.csv"
    with open(csv_path, "w") as fh:
        header = ",".join(f"alpha_{a}" for a in alphas)
        fh.write(f"tick,{header}\n")
        for t in range(len(traces[0])):
            row = ",".join(f"{tr[t]:.9f}" for tr in traces)
            fh.write(f"{t + 1},{row}\n")
    fig_path = reporting.habituation_figure(
        param_sets, parsed, out_dir / "habituation_trace.png"
    )
    click.echo(f"csv:    {csv_path}")
    click.echo(f"figure: {fig_path}")


if __name__ == "__main__":
    main()
