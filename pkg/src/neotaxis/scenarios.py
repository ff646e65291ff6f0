"""Scenario scripts: timed stimulus events plus expected-action windows.

A scenario is a deterministic experiment protocol: which lights appear when,
and in which tick windows the robot is expected to turn toward a named light
or to sit still. The three standard experiments (and the pattern
discrimination run) are built here; they can also be loaded from TOML files
so the protocols stay human-diffable.

Flashing lights are always scheduled on ticks that are multiples of their
pattern's cycle so that switching a light on looks exactly like the
pattern's own dark phase ending; an off-cycle onset would manufacture lag
vectors the pattern itself never produces.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import arena
from .arena import FlashPattern, LightSource, WorldEvent

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TURNS_TOWARD = "turns_toward"
NO_RESPONSE = "no_response"


@dataclass(frozen=True)
class Expectation:
    """Expected behaviour over the half-open tick window [start, end)."""

    start: int
    end: int
    expect: str
    light_id: str | None = None

    def __post_init__(self) -> None:
        if self.end <= self.start:
            raise ValueError(f"empty expectation window [{self.start}, {self.end})")
        if self.expect not in (TURNS_TOWARD, NO_RESPONSE):
            raise ValueError(f"unknown expectation {self.expect!r}")
        if self.expect == TURNS_TOWARD and not self.light_id:
            raise ValueError("turns_toward needs a light_id")


@dataclass
class ScenarioScript:
    name: str
    duration: int
    timeline: list[tuple[int, WorldEvent]] = field(default_factory=list)
    expectations: list[Expectation] = field(default_factory=list)
    overrides: dict = field(default_factory=dict)
    allowed_flaky_kinds: tuple[str, ...] = ()
    notes: str = ""

    def validate(self) -> None:
        if self.duration < 1:
            raise ValueError("duration must be >= 1")
        ticks = [t for t, _ in self.timeline]
        if any(b < a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("timeline ticks must be non-decreasing")
        prev_end = None
        for exp in self.expectations:
            if prev_end is not None and exp.start < prev_end:
                raise ValueError(
                    f"expectation windows overlap or are out of order at {exp.start}"
                )
            prev_end = exp.end
            if exp.expect == TURNS_TOWARD:
                self.light_bearing(exp.light_id)

    def light_bearing(self, light_id: str) -> float:
        """Bearing of a light referenced by an expectation."""
        for _, event in self.timeline:
            if event.action == "add_light" and event.light.id == light_id:
                return event.light.bearing
        raise ValueError(f"expectation references unknown light {light_id!r}")

    def events_by_tick(self) -> dict[int, list[WorldEvent]]:
        out: dict[int, list[WorldEvent]] = {}
        for tick, event in self.timeline:
            out.setdefault(tick, []).append(event)
        return out


def _align(tick: int, cycle: int) -> int:
    """Round up to the next multiple of the pattern cycle."""
    return tick if tick % cycle == 0 else tick + (cycle - tick % cycle)


def experiment_1(forgetting: bool) -> ScenarioScript:
    """Constant, then slow flash, then fast flash, then constant off.

    With forgetting on the dark patch left by the extinguished light has
    recovered its novelty and the robot turns back to it; with forgetting
    off the dark winner is still bored from the start of the run and the
    robot sits still.
    """
    slow = arena.slow_pattern()
    fast = arena.fast_pattern()
    t_constant = 48
    t_slow = _align(t_constant + 200, slow.period)
    t_fast = _align(t_slow + 200, fast.period)
    t_off = t_fast + 200
    end = t_off + 150
    timeline = [
        (t_constant, WorldEvent(action="add_light",
                                light=LightSource(id="steady", bearing=90.0))),
        (t_slow, WorldEvent(action="add_light",
                            light=LightSource(id="slow", bearing=270.0, pattern=slow))),
        (t_fast, WorldEvent(action="add_light",
                            light=LightSource(id="fast", bearing=180.0, pattern=fast))),
        (t_off, WorldEvent(action="set_active", light_id="steady", active=False)),
    ]
    final = Expectation(
        start=t_off, end=end,
        expect=TURNS_TOWARD if forgetting else NO_RESPONSE,
        light_id="steady" if forgetting else None,
    )
    return ScenarioScript(
        name=f"experiment1_forgetting_{'on' if forgetting else 'off'}",
        duration=end,
        timeline=timeline,
        expectations=[
            Expectation(t_constant, t_slow, TURNS_TOWARD, "steady"),
            Expectation(t_slow, t_fast, TURNS_TOWARD, "slow"),
            Expectation(t_fast, t_off, TURNS_TOWARD, "fast"),
            final,
        ],
        overrides={"forgetting": forgetting},
        notes=(
            "Stage (d) reads 'turns towards it' with forgetting on and "
            "'does not respond' with forgetting off."
        ),
    )


def experiment_2(forgetting: bool, calibration: bool = False) -> ScenarioScript:
    """Constant, slow flash, then a second slow flash of the same frequency.

    Without the calibration scan the second light lands on a sensor whose
    own filter has never seen the slow pattern, so the robot turns toward
    it even though the stimulus class is familiar. With the scan every
    sensor learned the pattern when it first appeared and the robot ignores
    the newcomer.

    The calibrated variant spaces its stages far enough apart that each
    360-degree scan (4 x dwell ticks, triggered by the initial darkness and
    then by each new light) finishes and settles before the next stimulus
    arrives, and uses a dwell long enough to bore every flash-phase winner
    on every sensor.
    """
    slow = arena.slow_pattern()
    if calibration:
        # longest scan is 4 survey quarters plus up to 3 approach quarters
        # (7 * dwell ticks); the rest of the gap lets winner-identity drift
        # burn itself out before the next stimulus arrives
        dwell = 96
        stage_gap = 7 * dwell + 656
    else:
        stage_gap = 200
    t_constant = _align(48 + (stage_gap if calibration else 0), slow.period)
    t_slow = _align(t_constant + stage_gap, slow.period)
    t_slow2 = _align(t_slow + stage_gap, slow.period)
    end = t_slow2 + 150
    timeline = [
        (t_constant, WorldEvent(action="add_light",
                                light=LightSource(id="steady", bearing=90.0))),
        (t_slow, WorldEvent(action="add_light",
                            light=LightSource(id="slow_a", bearing=270.0, pattern=slow))),
        (t_slow2, WorldEvent(action="add_light",
                             light=LightSource(id="slow_b", bearing=180.0, pattern=slow))),
    ]
    final = Expectation(
        start=t_slow2, end=end,
        expect=NO_RESPONSE if calibration else TURNS_TOWARD,
        light_id=None if calibration else "slow_b",
    )
    suffix = "calibrated" if calibration else f"forgetting_{'on' if forgetting else 'off'}"
    overrides: dict = {"forgetting": forgetting}
    if calibration:
        overrides.update(calibration=True, dwell_ticks=dwell)
    return ScenarioScript(
        name=f"experiment2_{suffix}",
        duration=end,
        timeline=timeline,
        expectations=[
            Expectation(t_constant, t_slow, TURNS_TOWARD, "steady"),
            Expectation(t_slow, t_slow2, TURNS_TOWARD, "slow_a"),
            final,
        ],
        overrides=overrides,
        notes="Second slow light is aimed at a sensor that has not seen the pattern.",
    )


def experiment_3(forgetting: bool) -> ScenarioScript:
    """Constant, slow flash, then a second constant light on a fresh sensor.

    Both forgetting settings produce a turn: the new light's sensor has
    never seen a steady bright stimulus of its own.
    """
    slow = arena.slow_pattern()
    t_constant = 48
    t_slow = _align(t_constant + 200, slow.period)
    t_constant2 = t_slow + 200
    end = t_constant2 + 150
    timeline = [
        (t_constant, WorldEvent(action="add_light",
                                light=LightSource(id="steady_a", bearing=90.0))),
        (t_slow, WorldEvent(action="add_light",
                            light=LightSource(id="slow", bearing=270.0, pattern=slow))),
        (t_constant2, WorldEvent(action="add_light",
                                 light=LightSource(id="steady_b", bearing=180.0))),
    ]
    return ScenarioScript(
        name=f"experiment3_forgetting_{'on' if forgetting else 'off'}",
        duration=end,
        timeline=timeline,
        expectations=[
            Expectation(t_constant, t_slow, TURNS_TOWARD, "steady_a"),
            Expectation(t_slow, t_constant2, TURNS_TOWARD, "slow"),
            Expectation(t_constant2, end, TURNS_TOWARD, "steady_b"),
        ],
        overrides={"forgetting": forgetting},
    )


DISCRIMINATION_SHORT = 1
DISCRIMINATION_LONG = 4
DISCRIMINATION_GAP = 1


def discrimination(first: str = "SLSL", second: str = "SSLL") -> ScenarioScript:
    """One light switches between two symbol rhythms of the same cycle length.

    A filter that has genuinely learned the first rhythm sees the second as
    novel, so the switch should produce a fresh response on the same sensor.
    Every six-reading window of SLSL also occurs in SSLL (alternation shows
    only SL and LS symbol pairs), so the switch runs SLSL first: SSLL's SS
    and LL contexts are the windows a lag filter can actually catch. The
    symbol timings are chosen so those contexts fit inside six ticks.
    """
    timing = dict(
        short_ticks=DISCRIMINATION_SHORT,
        long_ticks=DISCRIMINATION_LONG,
        gap_ticks=DISCRIMINATION_GAP,
    )
    p1 = arena.sequence_pattern(first, **timing)
    p2 = arena.sequence_pattern(second, **timing)
    if p1.cycle_length() != p2.cycle_length():
        raise ValueError("patterns must share a cycle length for a clean switch")
    cycle = p1.cycle_length()
    t_on = _align(36, cycle)
    t_switch = _align(t_on + 400, cycle)
    end = t_switch + 200
    timeline = [
        (t_on, WorldEvent(action="add_light",
                          light=LightSource(id="rhythm", bearing=90.0, pattern=p1))),
        (t_switch, WorldEvent(action="set_pattern", light_id="rhythm", pattern=p2)),
    ]
    return ScenarioScript(
        name=f"discrimination_{first.lower()}_to_{second.lower()}",
        duration=end,
        timeline=timeline,
        expectations=[
            Expectation(t_on, t_switch, TURNS_TOWARD, "rhythm"),
            Expectation(t_switch, end, TURNS_TOWARD, "rhythm"),
        ],
        overrides={"forgetting": False, "seed": 4},
        allowed_flaky_kinds=("som_ring",),
        notes=(
            "The ring SOM is recorded but non-gating on the rhythm switch. "
            "Seed pinned to a weight draw whose spare prototypes sit near "
            "the second rhythm's unique windows."
        ),
    )


def table1_suite() -> list[ScenarioScript]:
    """The six Table-1 scenarios: experiments 1-3, forgetting on and off."""
    return [
        experiment_1(True),
        experiment_1(False),
        experiment_2(True),
        experiment_2(False),
        experiment_3(True),
        experiment_3(False),
    ]


def standard_suite() -> list[ScenarioScript]:
    return table1_suite() + [
        experiment_2(False, calibration=True),
        discrimination(),
    ]


def builtin(name: str) -> ScenarioScript:
    for script in standard_suite():
        if script.name == name:
            return script
    raise KeyError(f"no builtin scenario named {name!r}")


def builtin_names() -> list[str]:
    return [s.name for s in standard_suite()]


# --- TOML files -------------------------------------------------------------


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k} = {_toml_value(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot render {type(value)} as TOML")


def _event_to_table(tick: int, event: WorldEvent) -> dict:
    table: dict = {"tick": tick, "action": event.action}
    if event.action == "add_light":
        light = event.light
        table.update(id=light.id, bearing=light.bearing, intensity=light.intensity,
                     pattern=arena.pattern_snapshot(light.pattern))
    elif event.action == "set_pattern":
        table.update(id=event.light_id, pattern=arena.pattern_snapshot(event.pattern))
    elif event.action == "set_active":
        table.update(id=event.light_id, active=event.active)
    else:
        table.update(id=event.light_id)
    return table


def dump_toml(script: ScenarioScript) -> str:
    """Render a scenario as a TOML document (the inverse of load_toml)."""
    script.validate()
    lines = [f"name = {_toml_value(script.name)}", f"duration = {script.duration}"]
    if script.notes:
        lines.append(f"notes = {_toml_value(script.notes)}")
    if script.allowed_flaky_kinds:
        lines.append(f"allowed_flaky_kinds = {_toml_value(list(script.allowed_flaky_kinds))}")
    if script.overrides:
        lines.append("")
        lines.append("[overrides]")
        for key, value in script.overrides.items():
            lines.append(f"{key} = {_toml_value(value)}")
    for tick, event in script.timeline:
        lines.append("")
        lines.append("[[timeline]]")
        for key, value in _event_to_table(tick, event).items():
            lines.append(f"{key} = {_toml_value(value)}")
    for exp in script.expectations:
        lines.append("")
        lines.append("[[expectations]]")
        lines.append(f"start = {exp.start}")
        lines.append(f"end = {exp.end}")
        lines.append(f"expect = {_toml_value(exp.expect)}")
        if exp.light_id:
            lines.append(f"light = {_toml_value(exp.light_id)}")
    return "\n".join(lines) + "\n"


def _event_from_table(table: dict) -> WorldEvent:
    action = table["action"]
    if action == "add_light":
        pattern = arena.pattern_from_snapshot(table.get("pattern", {"variant": "constant"}))
        light = LightSource(
            id=table["id"],
            bearing=float(table["bearing"]),
            intensity=float(table.get("intensity", 1.0)),
            pattern=pattern,
        )
        return WorldEvent(action=action, light=light)
    if action == "set_pattern":
        return WorldEvent(
            action=action,
            light_id=table["id"],
            pattern=arena.pattern_from_snapshot(table["pattern"]),
        )
    if action == "set_active":
        return WorldEvent(action=action, light_id=table["id"], active=bool(table["active"]))
    if action == "remove_light":
        return WorldEvent(action=action, light_id=table["id"])
    raise ValueError(f"unknown timeline action {action!r}")


def load_toml(path: str | Path) -> ScenarioScript:
    """Read a scenario from a TOML file (schema documented in the README)."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    script = ScenarioScript(
        name=doc.get("name", Path(path).stem),
        duration=int(doc["duration"]),
        timeline=[
            (int(entry["tick"]), _event_from_table(entry))
            for entry in doc.get("timeline", [])
        ],
        expectations=[
            Expectation(
                start=int(entry["start"]),
                end=int(entry["end"]),
                expect=entry["expect"],
                light_id=entry.get("light"),
            )
            for entry in doc.get("expectations", [])
        ],
        overrides=dict(doc.get("overrides", {})),
        allowed_flaky_kinds=tuple(doc.get("allowed_flaky_kinds", [])),
        notes=doc.get("notes", ""),
    )
    script.validate()
    return script
