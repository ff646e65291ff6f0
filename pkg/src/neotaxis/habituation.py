"""Habituating synapse dynamics.

A habituable synapse carries an efficacy value that drops each time its
neuron fires and (optionally) recovers toward its resting level while the
neuron stays silent. The continuous form is

    tau * dy/dt = alpha * (y0 - y) - S

integrated here with forward Euler, one step per control tick. Two
discretizations are supported because the constants used for plotting
habituation curves (tau = 20) and the constants used in the robot runs
(tau = 0.1) only make sense if tau sits on opposite sides of the update:

    divisive:        y' = y + (dt / tau) * (alpha * (y0 - y) - S)
    multiplicative:  y' = y + (tau * dt) * (alpha * (y0 - y) - S)

Efficacy is clamped to [floor, y0]; with the robot constants the raw update
can overshoot below zero, which has no meaning for a synapse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

DIVISIVE = "divisive"
MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class HabituationParams:
    """Constants of the synapse update rule.

    tau and alpha set the habituation and recovery rates, y0 is the resting
    efficacy, dt the tick length, mode selects the discretization, and floor
    is the lower clamp.
    """

    tau: float
    alpha: float
    y0: float = 1.0
    dt: float = 1.0
    mode: str = MULTIPLICATIVE
    floor: float = 0.0

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.y0 <= 0:
            raise ValueError(f"y0 must be positive, got {self.y0}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not 0 <= self.floor < self.y0:
            raise ValueError(f"floor must satisfy 0 <= floor < y0, got {self.floor}")
        if self.mode not in (DIVISIVE, MULTIPLICATIVE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == DIVISIVE and (self.dt / self.tau) * self.alpha > 1.0:
            raise ValueError(
                "divisive mode is unstable for these constants: "
                f"(dt/tau)*alpha = {(self.dt / self.tau) * self.alpha:.4g} > 1"
            )

    def clamp(self, y: float) -> float:
        return min(self.y0, max(self.floor, y))


@dataclass(frozen=True)
class SynapseState:
    """Efficacy of one output synapse plus whether its neuron ever fired."""

    efficacy: float
    ever_fired: bool = False


def fresh_synapse(params: HabituationParams) -> SynapseState:
    """A synapse at resting efficacy that has never fired."""
    return SynapseState(efficacy=params.y0, ever_fired=False)


def step_synapse(
    state: SynapseState,
    stimulus: float,
    params: HabituationParams,
    forgetting: bool,
) -> SynapseState:
    """Advance one tick.

    A positive stimulus means the synapse's neuron won this tick: the synapse
    habituates and is marked as fired. Zero stimulus means the neuron stayed
    silent; with forgetting on the synapse is driven with S=0 and recovers
    toward y0, with forgetting off it receives no input at all and is
    returned unchanged.
    """
    if stimulus < 0:
        raise ValueError(f"stimulus must be non-negative, got {stimulus}")
    won = stimulus > 0
    if not won and not forgetting:
        return state
    drive = params.alpha * (params.y0 - state.efficacy) - stimulus
    if params.mode == DIVISIVE:
        y = state.efficacy + (params.dt / params.tau) * drive
    else:
        y = state.efficacy + (params.tau * params.dt) * drive
    return SynapseState(
        efficacy=params.clamp(y),
        ever_fired=state.ever_fired or won,
    )


def steady_state(params: HabituationParams, stimulus: float = 0.0) -> float:
    """Fixed point of the update under a constant stimulus, clamped.

    Setting the drive to zero gives y* = y0 - S/alpha, the same in both
    discretization modes.
    """
    if stimulus < 0:
        raise ValueError(f"stimulus must be non-negative, got {stimulus}")
    return params.clamp(params.y0 - stimulus / params.alpha)


def simulate_trace(
    params: HabituationParams,
    schedule: Sequence[tuple[int, float]],
) -> list[float]:
    """Efficacy at every tick under a piecewise-constant stimulus schedule.

    Each schedule entry is (duration_ticks, stimulus). The synapse is treated
    as always winning with forgetting on, so S=0 segments recover toward y0.
    Starts from resting efficacy; the returned trace has one value per tick,
    recorded after that tick's step.
    """
    if not schedule:
        raise ValueError("schedule must be non-empty")
    for duration, _ in schedule:
        if duration < 1:
            raise ValueError(f"durations must be >= 1, got {duration}")
    state = fresh_synapse(params)
    trace: list[float] = []
    for duration, stimulus in schedule:
        if stimulus < 0:
            raise ValueError(f"stimulus must be non-negative, got {stimulus}")
        for _ in range(duration):
            state = step_synapse(state, stimulus, params, forgetting=True)
            trace.append(state.efficacy)
    return trace
