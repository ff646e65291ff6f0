"""Scenario execution: wiring world, filters, and attention into tick runs.

One Engine owns a world, four per-sensor novelty filters, and the attention
policy. Each tick it applies scheduled events, samples the sensors, feeds
the filters, selects at most one action, executes it, and appends a record.
Calibration scans run their dwell ticks through the same per-tick path, so
the log keeps exactly one record per world tick even while the robot is
spinning.

Runs are deterministic: same script, same seed, bit-identical log.
"""

from __future__ import annotations

import csv
import json
import os
import warnings
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import arena, attention, clustering
from .arena import WorldState
from .habituation import MULTIPLICATIVE, HabituationParams
from .novelty import FilterConfig, NoveltyFilter
from .scenarios import NO_RESPONSE, TURNS_TOWARD, ScenarioScript

SEED_ENV_VAR = "NEOTAXIS_SEED"

RUNLOG_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SimConfig:
    """Everything a run needs: clusterer, habituation, policy, world knobs."""

    kind: str = clustering.SOM_RING
    num_neurons: int = 12
    eta: float = 0.25
    gamma: float = 0.4
    history_depth: int = 3
    tau: float = 0.1
    alpha: float = 0.5
    y0: float = 1.0
    dt: float = 1.0
    mode: str = MULTIPLICATIVE
    floor: float = 0.0
    forgetting: bool = True
    boredom_threshold: float = 0.4
    calibration: bool = False
    dwell_ticks: int = attention.DEFAULT_DWELL_TICKS
    noise_std: float = 0.0
    seed: int = 0
    initial_heading: float = 0.0

    def habituation_params(self) -> HabituationParams:
        return HabituationParams(
            tau=self.tau, alpha=self.alpha, y0=self.y0, dt=self.dt,
            mode=self.mode, floor=self.floor,
        )

    def clusterer_config(self) -> clustering.ClustererConfig:
        input_dim = 1 if self.kind == clustering.TKM else 6
        return clustering.ClustererConfig(
            kind=self.kind,
            num_neurons=self.num_neurons,
            input_dim=input_dim,
            eta=self.eta,
            gamma=self.gamma,
            history_depth=self.history_depth,
            seed=self.seed,
        )

    def filter_config(self) -> FilterConfig:
        return FilterConfig(
            clusterer=self.clusterer_config(),
            habituation=self.habituation_params(),
            forgetting=self.forgetting,
            boredom_threshold=self.boredom_threshold,
        )

    def with_overrides(self, overrides: dict) -> "SimConfig":
        """Apply scenario/config-file overrides; unknown keys are rejected
        except ``beta``, which is accepted and ignored with a warning (it
        appears in the source material's constants but in no equation)."""
        cleaned = dict(overrides)
        if "beta" in cleaned:
            warnings.warn(
                "config key 'beta' is accepted but unused (no equation "
                "consumes it); ignoring",
                stacklevel=2,
            )
            cleaned.pop("beta")
        known = set(self.__dataclass_fields__)
        unknown = set(cleaned) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return replace(self, **cleaned)


def load_config(path: str | Path | None = None, **overrides) -> SimConfig:
    """Build a SimConfig from an optional TOML file plus keyword overrides.

    The NEOTAXIS_SEED environment variable, when set, wins over every other
    seed source.
    """
    config = SimConfig()
    if path is not None:
        import sys

        if sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        config = config.with_overrides(doc)
    if overrides:
        config = config.with_overrides(overrides)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        config = replace(config, seed=int(env_seed))
    return config


@dataclass
class Verdict:
    index: int
    expect: str
    light_id: str | None
    window: tuple[int, int]
    passed: bool

    def to_record(self) -> dict:
        return {
            "type": "verdict",
            "index": self.index,
            "expect": self.expect,
            "light": self.light_id,
            "window": list(self.window),
            "passed": self.passed,
        }


@dataclass
class RunLog:
    """Tick records plus per-expectation verdicts for one scenario run."""

    scenario: str
    kind: str
    seed: int
    records: list[dict] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_jsonl(self) -> str:
        lines = [
            json.dumps(
                {
                    "type": "meta",
                    "version": RUNLOG_SCHEMA_VERSION,
                    "scenario": self.scenario,
                    "kind": self.kind,
                    "seed": self.seed,
                }
            )
        ]
        lines.extend(json.dumps(r) for r in self.records)
        lines.extend(json.dumps(v.to_record()) for v in self.verdicts)
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())


class Engine:
    """Tick driver for one world + four filters + the attention policy."""

    def __init__(self, config: SimConfig, lights: tuple = ()):
        self.config = config
        self.world = WorldState(
            tick=0,
            heading=config.initial_heading,
            lights=lights,
            noise_std=config.noise_std,
            rng_seed=config.seed,
        )
        filter_config = config.filter_config()
        self.filters = [NoveltyFilter(s, filter_config) for s in range(arena.NUM_SENSORS)]
        self.records: list[dict] = []
        self.pending_events: dict[int, list[arena.WorldEvent]] = {}

    def schedule(self, tick: int, event: arena.WorldEvent) -> None:
        self.pending_events.setdefault(tick, []).append(event)

    def set_forgetting(self, forgetting: bool) -> None:
        self.config = replace(self.config, forgetting=forgetting)
        for filt in self.filters:
            filt.set_forgetting(forgetting)

    def reset(self) -> None:
        """Fresh world and filters from the current config; log cleared."""
        self.__init__(self.config)

    def _apply_due_events(self) -> None:
        for event in self.pending_events.pop(self.world.tick, []):
            self.world = arena.apply_event(self.world, event)

    def _ingest(self) -> tuple[list[float], list]:
        readings = arena.all_readings(self.world)
        reports = [f.ingest(r) for f, r in zip(self.filters, readings)]
        return readings, reports

    def _record(self, readings, reports, decision, heading_after, in_scan) -> dict:
        record = {
            "type": "tick",
            "tick": self.world.tick,
            "heading": self.world.heading,
            "readings": readings,
            "reports": [None if r is None else asdict(r) for r in reports],
            "decision": {
                "action": decision.action if decision else None,
                "sensor_id": decision.sensor_id if decision else None,
            },
            "heading_after": heading_after,
            "in_scan": in_scan,
        }
        self.records.append(record)
        return record

    def _scan_tick(self, world: WorldState) -> WorldState:
        # nested tick inside a calibration scan: same pipeline, no attention
        self.world = arena.advance(world)
        self._apply_due_events()
        readings, reports = self._ingest()
        self._record(readings, reports, None, self.world.heading, in_scan=True)
        return self.world

    def step(self) -> dict:
        """One tick: events, sample, ingest, select, execute, record, advance."""
        self._apply_due_events()
        readings, reports = self._ingest()
        decision = attention.select(
            reports, self.filters[0].config, self.config.calibration
        )
        if decision.action == attention.NONE:
            heading_after = self.world.heading
        else:
            heading_after = (self.world.heading + 90.0 * decision.sensor_id) % 360.0
        record = self._record(readings, reports, decision, heading_after, in_scan=False)
        self.world = attention.execute(
            decision,
            self.world,
            self.filters,
            dwell_ticks=self.config.dwell_ticks,
            tick_fn=self._scan_tick,
        )
        self.world = arena.advance(self.world)
        return record

    def run(self, duration: int) -> None:
        while self.world.tick < duration:
            self.step()

    def snapshot(self) -> dict:
        """World plus filter internals, for the service stream."""
        snap = arena.world_snapshot(self.world)
        snap["efficacies"] = [f.efficacies() for f in self.filters]
        snap["forgetting"] = self.config.forgetting
        return snap


def _in_field(bearing: float, heading: float) -> bool:
    return -arena.FIELD_HALF_WIDTH <= (bearing - heading + 180.0) % 360.0 - 180.0 < arena.FIELD_HALF_WIDTH


def evaluate_expectations(script: ScenarioScript, records: list[dict]) -> list[Verdict]:
    verdicts = []
    for index, exp in enumerate(script.expectations):
        window = [r for r in records if exp.start <= r["tick"] < exp.end]
        if exp.expect == TURNS_TOWARD:
            bearing = script.light_bearing(exp.light_id)
            passed = any(
                r["decision"]["action"] in (attention.TURN, attention.CALIBRATE_SCAN)
                and _in_field(
                    bearing, (r["heading"] + 90.0 * r["decision"]["sensor_id"]) % 360.0
                )
                for r in window
            )
        else:  # NO_RESPONSE: heading never changes inside the window
            headings = {r["heading"] for r in window} | {r["heading_after"] for r in window}
            acted = any(
                r["decision"]["action"] in (attention.TURN, attention.CALIBRATE_SCAN)
                for r in window
            )
            passed = len(headings) == 1 and not acted
        verdicts.append(
            Verdict(
                index=index,
                expect=exp.expect,
                light_id=exp.light_id,
                window=(exp.start, exp.end),
                passed=passed,
            )
        )
    return verdicts


def run_scenario(
    script: ScenarioScript,
    seed: int | None = None,
    base_config: SimConfig | None = None,
) -> RunLog:
    """Execute one scenario and judge its expectations.

    Config precedence: base config < script overrides < explicit seed
    argument < NEOTAXIS_SEED environment variable.
    """
    script.validate()
    config = base_config if base_config is not None else SimConfig()
    config = config.with_overrides(script.overrides)
    if seed is not None:
        config = replace(config, seed=seed)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        config = replace(config, seed=int(env_seed))

    engine = Engine(config)
    for tick, event in script.timeline:
        engine.schedule(tick, event)
    engine.run(script.duration)

    log = RunLog(scenario=script.name, kind=config.kind, seed=config.seed)
    log.records = engine.records
    log.verdicts = evaluate_expectations(script, engine.records)
    return log


@dataclass
class SuiteCell:
    scenario: str
    kind: str
    passed: bool
    gating: bool
    error: str | None = None


@dataclass
class SuiteResult:
    cells: list[SuiteCell] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cells if c.gating)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["scenario", "kind", "passed", "gating", "error"])
            for c in self.cells:
                writer.writerow(
                    [c.scenario, c.kind, int(c.passed), int(c.gating), c.error or ""]
                )

    def format_table(self) -> str:
        kinds = sorted({c.kind for c in self.cells})
        scenarios = list(dict.fromkeys(c.scenario for c in self.cells))
        by_key = {(c.scenario, c.kind): c for c in self.cells}
        width = max(len(s) for s in scenarios) + 2
        lines = ["".ljust(width) + "".join(k.ljust(12) for k in kinds)]
        for s in scenarios:
            row = s.ljust(width)
            for k in kinds:
                cell = by_key.get((s, k))
                if cell is None:
                    mark = "-"
                elif cell.passed:
                    mark = "pass"
                else:
                    mark = "FAIL" if cell.gating else "fail*"
                row += mark.ljust(12)
            lines.append(row)
        if any(not c.gating for c in self.cells):
            lines.append("(* non-gating cell)")
        return "\n".join(lines)


def run_suite(
    scripts: list[ScenarioScript],
    kinds: list[str],
    seed: int | None = None,
    base_config: SimConfig | None = None,
) -> SuiteResult:
    """Cross-product run of scenarios against clusterer kinds.

    Every cell starts from fresh state; a cell whose kind appears in the
    scenario's allowed_flaky_kinds is recorded but never gates the suite.
    Per-cell errors are captured so the rest of the matrix still runs.
    """
    if not scripts:
        raise ValueError("scripts list must be non-empty")
    if not kinds:
        raise ValueError("kinds list must be non-empty")
    for kind in kinds:
        if kind not in clustering.KINDS:
            raise ValueError(f"unknown clusterer kind {kind!r}")
    result = SuiteResult()
    for script in scripts:
        for kind in kinds:
            gating = kind not in script.allowed_flaky_kinds
            overriden = base_config if base_config is not None else SimConfig()
            overriden = overriden.with_overrides({"kind": kind})
            try:
                log = run_scenario(script, seed=seed, base_config=overriden)
                cell = SuiteCell(script.name, kind, log.passed, gating)
            except Exception as exc:  # keep the suite going
                cell = SuiteCell(script.name, kind, False, gating, error=str(exc))
            result.cells.append(cell)
    return result
