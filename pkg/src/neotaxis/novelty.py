"""Per-sensor novelty filter: clusterer plus habituable output synapses.

Each sensor owns one filter. A filter turns the stream of raw readings into
classification inputs (a six-reading lag vector for the spatial clusterers,
the bare reading for the TKM), classifies, and reports the winning neuron's
synaptic efficacy as the novelty of the stimulus. The report is taken
*before* this tick's habituation step, so the first time any neuron wins it
reports full resting novelty and carries ``is_new=True``.

After reporting, the winner's synapse habituates (stimulus 1, one firing),
the silent synapses recover if forgetting is on, and the clusterer trains on
the input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

from . import clustering
from .habituation import HabituationParams, SynapseState, fresh_synapse, step_synapse


@dataclass(frozen=True)
class NoveltyReport:
    """One sensor's verdict for one classification tick."""

    sensor_id: int
    winner: int
    novelty: float
    is_new: bool
    raw_strength: float


@dataclass(frozen=True)
class FilterConfig:
    clusterer: clustering.ClustererConfig
    habituation: HabituationParams
    forgetting: bool = True
    boredom_threshold: float = 0.4

    def __post_init__(self) -> None:
        if not 0.0 < self.boredom_threshold < self.habituation.y0:
            raise ValueError(
                f"boredom_threshold must be in (0, y0), got {self.boredom_threshold}"
            )


def is_novel(report: NoveltyReport, config: FilterConfig) -> bool:
    """A stimulus stays interesting while brand new or above the threshold."""
    return report.is_new or report.novelty > config.boredom_threshold


class NoveltyFilter:
    """Lag buffer -> clusterer -> habituable synapses for a single sensor."""

    def __init__(self, sensor_id: int, config: FilterConfig):
        self.sensor_id = sensor_id
        self.config = config
        self._uses_lag = config.clusterer.kind != clustering.TKM
        self._lag_depth = config.clusterer.input_dim if self._uses_lag else 0
        self.reset()

    def reset(self) -> None:
        """Back to a freshly constructed filter: empty buffer, resting
        synapses, clusterer re-seeded from its configured seed."""
        self.lag_buffer: deque = deque(maxlen=self._lag_depth or 1)
        self.clusterer = clustering.init_state(self.config.clusterer)
        self.synapses: list[SynapseState] = [
            fresh_synapse(self.config.habituation)
            for _ in range(self.config.clusterer.num_neurons)
        ]
        self._prev_winner: int | None = None

    def ingest(self, reading: float) -> NoveltyReport | None:
        """Feed one reading; returns a report whenever classification ran.

        Lag-vector kinds stay silent until six readings have accumulated
        (zero-padding would fabricate a phantom all-dark pattern); the TKM
        classifies every tick.
        """
        if not 0.0 <= reading <= 1.0:
            raise ValueError(f"reading must be in [0, 1], got {reading}")
        if self._uses_lag:
            self.lag_buffer.append(reading)
            if len(self.lag_buffer) < self._lag_depth:
                return None
            value = list(self.lag_buffer)
        else:
            value = [reading]

        result = clustering.classify(self.clusterer, value)
        winner = result.winner
        # When repeated identical inputs drag a trained neighbour onto the
        # winner's exact weight, their scores collapse to the same float and
        # the index tie-break would flip the winner identity. In exact
        # arithmetic the incumbent stays strictly ahead (both gaps shrink by
        # the same factor), so an exact tie keeps the incumbent; flipping
        # would fabricate novelty out of roundoff.
        if (
            self._prev_winner is not None
            and winner != self._prev_winner
            and clustering.score_of(self.clusterer, self._prev_winner, value) == result.score
        ):
            winner = self._prev_winner
        self._prev_winner = winner
        winner_synapse = self.synapses[winner]
        report = NoveltyReport(
            sensor_id=self.sensor_id,
            winner=winner,
            novelty=winner_synapse.efficacy,
            is_new=not winner_synapse.ever_fired,
            raw_strength=result.normalized_match,
        )

        params = self.config.habituation
        forgetting = self.config.forgetting
        self.synapses = [
            step_synapse(s, 1.0 if i == winner else 0.0, params, forgetting)
            for i, s in enumerate(self.synapses)
        ]
        clustering.train(self.clusterer, value, winner)
        return report

    def efficacies(self) -> list[float]:
        return [s.efficacy for s in self.synapses]

    def set_forgetting(self, forgetting: bool) -> None:
        """Flip the forgetting toggle without disturbing any other state."""
        self.config = replace(self.config, forgetting=forgetting)
