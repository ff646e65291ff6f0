"""Comparator across the four sensors plus the turn/calibrate policy.

Selection works on the per-sensor novelty reports of one tick. Reports that
fail the boredom gate are dropped; among the rest, completely new stimuli
(never-fired winners) bypass the novelty comparison entirely, and two new
stimuli are ranked by raw signal strength. Ties always break to the lowest
sensor index so replays are deterministic.

Executing a decision rotates the robot so the chosen sensor's stimulus sits
dead ahead. With the calibration behaviour enabled, a brand-new stimulus
instead triggers a full 360-degree scan, pausing a dwell period every 90
degrees so that every sensor's filter learns every current stimulus before
the robot settles facing the new one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import arena
from .novelty import FilterConfig, NoveltyFilter, NoveltyReport, is_novel

NONE = "none"
TURN = "turn"
CALIBRATE_SCAN = "calibrate_scan"

DEFAULT_DWELL_TICKS = 12


@dataclass(frozen=True)
class AttentionDecision:
    action: str = NONE
    sensor_id: int | None = None
    chosen_report: NoveltyReport | None = None

    def __post_init__(self) -> None:
        if (self.action == NONE) != (self.chosen_report is None):
            raise ValueError("action=none requires (and implies) no chosen report")


def select(
    reports: Sequence[NoveltyReport | None],
    config: FilterConfig,
    calibration: bool = False,
) -> AttentionDecision:
    """Pick the stimulus to respond to, if any.

    Priority order: any never-fired winner beats all familiar ones; among
    several never-fired, highest raw strength; otherwise highest novelty;
    ties to the lowest sensor id.
    """
    present = [r for r in reports if r is not None]
    seen_ids = [r.sensor_id for r in present]
    if len(set(seen_ids)) != len(seen_ids):
        raise ValueError(f"duplicate sensor_id among reports: {sorted(seen_ids)}")
    novel = [r for r in present if is_novel(r, config)]
    if not novel:
        return AttentionDecision()
    brand_new = [r for r in novel if r.is_new]
    if brand_new:
        chosen = max(brand_new, key=lambda r: (r.raw_strength, -r.sensor_id))
    else:
        chosen = max(novel, key=lambda r: (r.novelty, -r.sensor_id))
    action = CALIBRATE_SCAN if (calibration and chosen.is_new) else TURN
    return AttentionDecision(action=action, sensor_id=chosen.sensor_id, chosen_report=chosen)


def default_tick(
    world: arena.WorldState, filters: Sequence[NoveltyFilter]
) -> arena.WorldState:
    """Advance one tick and feed every sensor's filter (no attention)."""
    world = arena.advance(world)
    for sensor_id, filt in enumerate(filters):
        filt.ingest(arena.sensor_reading(world, sensor_id))
    return world


def execute(
    decision: AttentionDecision,
    world: arena.WorldState,
    filters: Sequence[NoveltyFilter] = (),
    dwell_ticks: int = DEFAULT_DWELL_TICKS,
    tick_fn: Callable[[arena.WorldState], arena.WorldState] | None = None,
) -> arena.WorldState:
    """Carry out a decision; returns the (possibly rotated) world.

    Turns are instantaneous between ticks. A calibration scan performs four
    90-degree rotations, holding ``dwell_ticks`` at each pause while all
    filters keep ingesting and training (via ``tick_fn``, which defaults to
    plain advance-and-ingest; the scenario harness passes its own so scan
    ticks are logged and scheduled events still fire). The scan ends with
    the robot facing the stimulus that triggered it.
    """
    if decision.action == NONE:
        return world
    if decision.sensor_id is None:
        raise ValueError("turn/scan decisions need a sensor_id")
    if decision.action == TURN:
        return arena.rotate(world, 90.0 * decision.sensor_id)
    if decision.action != CALIBRATE_SCAN:
        raise ValueError(f"unknown action {decision.action!r}")
    if tick_fn is None:
        tick_fn = lambda w: default_tick(w, filters)
    # Four quarter turns for the scan proper, then keep stepping by quarters
    # until the chosen stimulus is dead ahead. The approach also pauses at
    # each quarter: a 180/270-degree jump would sweep stimulus pairs through
    # the lag buffers in an order no sensor saw during the scan, and those
    # fabricated mixtures would read as brand new all over again.
    quarter_turns = arena.NUM_SENSORS + decision.sensor_id
    for _ in range(quarter_turns):
        world = arena.rotate(world, 90.0)
        for _ in range(dwell_ticks):
            world = tick_fn(world)
    return world
