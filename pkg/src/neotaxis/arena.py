"""Discrete-time arena: flashing lights on a bearing circle, rotating robot.

The robot sits at the centre with four light sensors facing the cardinal
directions relative to its heading; sensor ``s`` faces ``heading + 90*s``
degrees and owns a hard-edged 90-degree field of view. Each light projects
from a fixed bearing with an on/off flash pattern evaluated per tick, so a
light contributes its intensity whenever its pattern is on and it falls in a
sensor's field.

The world is a value: events and tick advancement return new instances, and
optional sensor noise is derived from (seed, tick, sensor) so that replays
are bit-identical regardless of sampling order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

CONSTANT = "constant"
PERIODIC = "periodic"
SEQUENCE = "sequence"

SHORT = "short"
LONG = "long"

NUM_SENSORS = 4
FIELD_HALF_WIDTH = 45.0


@dataclass(frozen=True)
class FlashPattern:
    """On/off timing of a light, looping forever.

    constant: always on. periodic: on for the first duty fraction of each
    period. sequence: each symbol is on for short_ticks or long_ticks,
    followed by gap_ticks off.
    """

    variant: str = CONSTANT
    period: int = 12
    duty: float = 0.5
    symbols: tuple[str, ...] = ()
    short_ticks: int = 2
    long_ticks: int = 4
    gap_ticks: int = 2

    def __post_init__(self) -> None:
        if self.variant not in (CONSTANT, PERIODIC, SEQUENCE):
            raise ValueError(f"unknown pattern variant {self.variant!r}")
        if self.variant == PERIODIC:
            if self.period < 2:
                raise ValueError(f"period must be >= 2, got {self.period}")
            if not 0.0 < self.duty < 1.0:
                raise ValueError(f"duty must be in (0, 1), got {self.duty}")
        if self.variant == SEQUENCE:
            if not self.symbols:
                raise ValueError("sequence pattern needs at least one symbol")
            for sym in self.symbols:
                if sym not in (SHORT, LONG):
                    raise ValueError(f"unknown symbol {sym!r}")
            if self.short_ticks < 1 or self.long_ticks < 1 or self.gap_ticks < 1:
                raise ValueError("sequence tick lengths must be >= 1")

    def cycle_length(self) -> int:
        if self.variant == CONSTANT:
            return 1
        if self.variant == PERIODIC:
            return self.period
        on = {SHORT: self.short_ticks, LONG: self.long_ticks}
        return sum(on[s] + self.gap_ticks for s in self.symbols)


def constant_pattern() -> FlashPattern:
    return FlashPattern(variant=CONSTANT)


def periodic_pattern(period: int, duty: float = 0.5) -> FlashPattern:
    return FlashPattern(variant=PERIODIC, period=period, duty=duty)


def slow_pattern() -> FlashPattern:
    """Default 'slowly flashing' light: 6 ticks on, 6 off."""
    return periodic_pattern(12, 0.5)


def fast_pattern() -> FlashPattern:
    """Default 'fast flashing' light: 2 ticks on, 2 off."""
    return periodic_pattern(4, 0.5)


def sequence_pattern(code: str, short_ticks: int = 2, long_ticks: int = 4,
                     gap_ticks: int = 2) -> FlashPattern:
    """Build a symbol pattern from a string like 'SSLL' or 'SLSL'."""
    mapping = {"S": SHORT, "L": LONG}
    try:
        symbols = tuple(mapping[c] for c in code.upper())
    except KeyError as exc:
        raise ValueError(f"symbol code must use only S and L, got {code!r}") from exc
    return FlashPattern(
        variant=SEQUENCE,
        symbols=symbols,
        short_ticks=short_ticks,
        long_ticks=long_ticks,
        gap_ticks=gap_ticks,
    )


def sample_pattern(pattern: FlashPattern, tick: int) -> int:
    """1 if the pattern is on at this tick, else 0."""
    if tick < 0:
        raise ValueError(f"tick must be >= 0, got {tick}")
    if pattern.variant == CONSTANT:
        return 1
    if pattern.variant == PERIODIC:
        return 1 if (tick % pattern.period) < pattern.duty * pattern.period else 0
    phase = tick % pattern.cycle_length()
    on = {SHORT: pattern.short_ticks, LONG: pattern.long_ticks}
    for sym in pattern.symbols:
        on_ticks = on[sym]
        if phase < on_ticks:
            return 1
        phase -= on_ticks
        if phase < pattern.gap_ticks:
            return 0
        phase -= pattern.gap_ticks
    return 0


@dataclass(frozen=True)
class LightSource:
    id: str
    bearing: float
    intensity: float = 1.0
    pattern: FlashPattern = field(default_factory=constant_pattern)
    active: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "bearing", self.bearing % 360.0)
        if not 0.0 < self.intensity <= 1.0:
            raise ValueError(f"intensity must be in (0, 1], got {self.intensity}")


@dataclass(frozen=True)
class WorldState:
    tick: int = 0
    heading: float = 0.0
    lights: tuple[LightSource, ...] = ()
    noise_std: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "heading", self.heading % 360.0)
        object.__setattr__(self, "lights", tuple(self.lights))
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")

    def light(self, light_id: str) -> LightSource:
        for light in self.lights:
            if light.id == light_id:
                return light
        raise KeyError(f"unknown light id {light_id!r}")


def _angle_diff(a: float, b: float) -> float:
    """Signed difference a - b wrapped into [-180, 180)."""
    return (a - b + 180.0) % 360.0 - 180.0


def sensor_bearing(world: WorldState, sensor_id: int) -> float:
    """Absolute bearing sensor ``sensor_id`` faces."""
    if not 0 <= sensor_id < NUM_SENSORS:
        raise ValueError(f"sensor_id must be in 0..3, got {sensor_id}")
    return (world.heading + 90.0 * sensor_id) % 360.0


def sensor_for_bearing(world: WorldState, bearing: float) -> int:
    """Which sensor's field of view contains the given absolute bearing."""
    for s in range(NUM_SENSORS):
        if -FIELD_HALF_WIDTH <= _angle_diff(bearing, sensor_bearing(world, s)) < FIELD_HALF_WIDTH:
            return s
    raise RuntimeError(f"bearing {bearing} not covered by any sensor field")


def sensor_reading(world: WorldState, sensor_id: int) -> float:
    """Sum of in-field active-light contributions plus noise, clamped to [0,1]."""
    facing = sensor_bearing(world, sensor_id)
    total = 0.0
    for light in world.lights:
        if not light.active:
            continue
        if -FIELD_HALF_WIDTH <= _angle_diff(light.bearing, facing) < FIELD_HALF_WIDTH:
            total += light.intensity * sample_pattern(light.pattern, world.tick)
    if world.noise_std > 0:
        rng = np.random.default_rng(
            [world.rng_seed & 0xFFFFFFFF, world.tick, sensor_id]
        )
        total += rng.normal(0.0, world.noise_std)
    return min(1.0, max(0.0, total))


def all_readings(world: WorldState) -> list[float]:
    return [sensor_reading(world, s) for s in range(NUM_SENSORS)]


@dataclass(frozen=True)
class WorldEvent:
    """A timed mutation of the light set."""

    action: str  # add_light | remove_light | set_active | set_pattern
    light: LightSource | None = None
    light_id: str | None = None
    active: bool = True
    pattern: FlashPattern | None = None


def apply_event(world: WorldState, event: WorldEvent) -> WorldState:
    """Apply one light-set mutation; the tick is untouched."""
    if event.action == "add_light":
        if event.light is None:
            raise ValueError("add_light event needs a light")
        if any(l.id == event.light.id for l in world.lights):
            raise ValueError(f"duplicate light id {event.light.id!r}")
        return replace(world, lights=world.lights + (event.light,))
    if event.light_id is None:
        raise ValueError(f"{event.action} event needs a light_id")
    world.light(event.light_id)  # raises KeyError on unknown id
    if event.action == "remove_light":
        return replace(
            world, lights=tuple(l for l in world.lights if l.id != event.light_id)
        )
    if event.action == "set_active":
        return replace(
            world,
            lights=tuple(
                replace(l, active=event.active) if l.id == event.light_id else l
                for l in world.lights
            ),
        )
    if event.action == "set_pattern":
        if event.pattern is None:
            raise ValueError("set_pattern event needs a pattern")
        return replace(
            world,
            lights=tuple(
                replace(l, pattern=event.pattern) if l.id == event.light_id else l
                for l in world.lights
            ),
        )
    raise ValueError(f"unknown event action {event.action!r}")


def advance(world: WorldState) -> WorldState:
    """Next tick; lights and heading untouched."""
    return replace(world, tick=world.tick + 1)


def rotate(world: WorldState, delta_degrees: float) -> WorldState:
    return replace(world, heading=(world.heading + delta_degrees) % 360.0)


def world_snapshot(world: WorldState) -> dict:
    """JSON-friendly view of the world for logs and the UI stream."""
    return {
        "tick": world.tick,
        "heading": world.heading,
        "lights": [
            {
                "id": l.id,
                "bearing": l.bearing,
                "intensity": l.intensity,
                "active": l.active,
                "on": bool(l.active and sample_pattern(l.pattern, world.tick)),
                "pattern": pattern_snapshot(l.pattern),
            }
            for l in world.lights
        ],
        "readings": all_readings(world),
    }


def pattern_snapshot(pattern: FlashPattern) -> dict:
    doc: dict = {"variant": pattern.variant}
    if pattern.variant == PERIODIC:
        doc.update(period=pattern.period, duty=pattern.duty)
    elif pattern.variant == SEQUENCE:
        doc.update(
            symbols=list(pattern.symbols),
            short_ticks=pattern.short_ticks,
            long_ticks=pattern.long_ticks,
            gap_ticks=pattern.gap_ticks,
        )
    return doc


def pattern_from_snapshot(doc: dict) -> FlashPattern:
    variant = doc.get("variant", CONSTANT)
    if variant == CONSTANT:
        return constant_pattern()
    if variant == PERIODIC:
        return periodic_pattern(int(doc["period"]), float(doc.get("duty", 0.5)))
    if variant == SEQUENCE:
        return FlashPattern(
            variant=SEQUENCE,
            symbols=tuple(doc["symbols"]),
            short_ticks=int(doc.get("short_ticks", 2)),
            long_ticks=int(doc.get("long_ticks", 4)),
            gap_ticks=int(doc.get("gap_ticks", 2)),
        )
    raise ValueError(f"unknown pattern variant {variant!r}")
