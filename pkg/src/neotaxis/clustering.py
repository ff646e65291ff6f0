"""Three interchangeable online clustering back-ends.

All three share a twelve-neuron budget and a classify-then-train contract:

* ``som_ring`` -- a learning vector quantiser on a ring lattice. Winner is
  the minimum squared distance; the winner and its two ring neighbours move
  toward the input with a fixed learning rate.
* ``tkm`` -- temporal Kohonen map with leaky-integrator activities
  a_i <- gamma * a_i + exp(-0.5 * |v - w_i|^2); winner is the maximum
  activity, and training sums deltas over a short history of
  (input, weight snapshot) pairs weighted by powers of gamma.
* ``kmeans`` -- online k-means; same winner rule as the SOM but training
  moves the winning prototype only.

Scores are not directly comparable across kinds (distance: lower is better,
activity: higher is better), so each classification also carries a
normalized match in [0, 1]: exp(-d / dim) for the distance-based kinds and
min(a, 1) for the TKM.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

SOM_RING = "som_ring"
TKM = "tkm"
KMEANS = "kmeans"
KINDS = (SOM_RING, TKM, KMEANS)

STATE_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ClustererConfig:
    kind: str = SOM_RING
    num_neurons: int = 12
    input_dim: int = 6
    eta: float = 0.25
    gamma: float = 0.4
    history_depth: int = 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown clusterer kind {self.kind!r}")
        if self.num_neurons < 2:
            raise ValueError("num_neurons must be >= 2")
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must be in [0, 1], got {self.eta}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if self.history_depth < 0:
            raise ValueError("history_depth must be >= 0")


@dataclass
class ClustererState:
    """Weights plus the TKM's activity vector and training history.

    ``tkm_history`` holds the most recent (input, weight snapshot) pairs,
    newest first; entries beyond ``history_depth`` fall off the end.
    """

    config: ClustererConfig
    weights: np.ndarray
    tkm_activities: np.ndarray | None = None
    tkm_history: deque = field(default_factory=deque)


@dataclass(frozen=True)
class ClassifyResult:
    winner: int
    score: float
    normalized_match: float


def init_state(config: ClustererConfig) -> ClustererState:
    """Fresh state with weights drawn uniformly from the sensor range [0,1]."""
    rng = np.random.default_rng(config.seed)
    weights = rng.uniform(0.0, 1.0, size=(config.num_neurons, config.input_dim))
    activities = np.zeros(config.num_neurons) if config.kind == TKM else None
    return ClustererState(
        config=config,
        weights=weights,
        tkm_activities=activities,
        tkm_history=deque(maxlen=config.history_depth),
    )


def _as_input(state: ClustererState, value) -> np.ndarray:
    v = np.atleast_1d(np.asarray(value, dtype=float))
    if v.shape != (state.config.input_dim,):
        raise ValueError(
            f"input dimension mismatch: expected {state.config.input_dim}, "
            f"got shape {v.shape}"
        )
    return v


def _ring_neighbourhood(winner: int, num_neurons: int) -> tuple[int, int, int]:
    return ((winner - 1) % num_neurons, winner, (winner + 1) % num_neurons)


def _squared_distances(weights: np.ndarray, v: np.ndarray) -> np.ndarray:
    diff = weights - v[None, :]
    return np.einsum("ij,ij->i", diff, diff)


def som_classify(state: ClustererState, value) -> ClassifyResult:
    """Winner = argmin squared distance; ties break to the lowest index."""
    v = _as_input(state, value)
    d = _squared_distances(state.weights, v)
    winner = int(np.argmin(d))
    score = float(d[winner])
    return ClassifyResult(
        winner=winner,
        score=score,
        normalized_match=float(np.exp(-score / state.config.input_dim)),
    )


def som_train(state: ClustererState, value, winner: int) -> ClustererState:
    """Move the winner and its two ring neighbours by eta * (v - w)."""
    v = _as_input(state, value)
    if not 0 <= winner < state.config.num_neurons:
        raise ValueError(f"winner index {winner} out of range")
    eta = state.config.eta
    weights = state.weights.copy()
    for i in set(_ring_neighbourhood(winner, state.config.num_neurons)):
        weights[i] += eta * (v - weights[i])
    state.weights = weights
    return state


def tkm_classify(state: ClustererState, value) -> ClassifyResult:
    """Leak all activities by gamma, add each neuron's match gain, pick argmax.

    The activity update is part of classification: calling this advances the
    leaky integrators one tick.
    """
    v = _as_input(state, value)
    d = _squared_distances(state.weights, v)
    gains = np.exp(-0.5 * d)
    state.tkm_activities = state.config.gamma * state.tkm_activities + gains
    winner = int(np.argmax(state.tkm_activities))
    score = float(state.tkm_activities[winner])
    return ClassifyResult(
        winner=winner,
        score=score,
        normalized_match=float(min(score, 1.0)),
    )


def tkm_train(state: ClustererState, value, winner: int) -> ClustererState:
    """Gamma-weighted history update of the winner and its ring neighbours.

    Delta w_i = eta * sum_k gamma^k (v(t-k) - w_i(t-k)), where k=0 is the
    current tick and the remaining terms come from the stored snapshots
    (fewer terms while the history is still filling). Afterwards the current
    (input, pre-update weights) pair is pushed onto the history.
    """
    v = _as_input(state, value)
    if not 0 <= winner < state.config.num_neurons:
        raise ValueError(f"winner index {winner} out of range")
    cfg = state.config
    snapshot = state.weights.copy()
    terms = [(v, snapshot)] + list(state.tkm_history)
    weights = snapshot.copy()
    for i in set(_ring_neighbourhood(winner, cfg.num_neurons)):
        delta = 0.0
        for k, (v_k, w_k) in enumerate(terms):
            delta += cfg.gamma**k * (v_k - w_k[i])
        weights[i] = snapshot[i] + cfg.eta * delta
    state.tkm_history.appendleft((v, snapshot))
    state.weights = weights
    return state


def kmeans_classify(state: ClustererState, value) -> ClassifyResult:
    """Nearest-prototype assignment; identical contract to som_classify."""
    return som_classify(state, value)


def kmeans_train(state: ClustererState, value, winner: int) -> ClustererState:
    """Move only the winning prototype: delta mu = eta * (x - mu)."""
    v = _as_input(state, value)
    if not 0 <= winner < state.config.num_neurons:
        raise ValueError(f"winner index {winner} out of range")
    weights = state.weights.copy()
    weights[winner] += state.config.eta * (v - weights[winner])
    state.weights = weights
    return state


def kmeans_cost(state: ClustererState, data) -> float:
    """Sum of squared distances of each point to its nearest prototype."""
    points = np.atleast_2d(np.asarray(data, dtype=float))
    if points.size == 0:
        raise ValueError("data must be non-empty")
    total = 0.0
    for x in points:
        d = _squared_distances(state.weights, x)
        total += float(d.min())
    return total


def classify(state: ClustererState, value) -> ClassifyResult:
    """Dispatch to the configured kind's classification rule."""
    if state.config.kind == TKM:
        return tkm_classify(state, value)
    if state.config.kind == KMEANS:
        return kmeans_classify(state, value)
    return som_classify(state, value)


def score_of(state: ClustererState, index: int, value) -> float:
    """The scoring quantity classify would rank neuron ``index`` by.

    For the TKM this reads the current activity (call after classify, which
    owns the activity update); for the distance kinds it recomputes the
    squared distance.
    """
    if not 0 <= index < state.config.num_neurons:
        raise ValueError(f"index {index} out of range")
    if state.config.kind == TKM:
        return float(state.tkm_activities[index])
    v = _as_input(state, value)
    diff = state.weights[index] - v
    return float(diff @ diff)


def train(state: ClustererState, value, winner: int) -> ClustererState:
    """Dispatch to the configured kind's training rule."""
    if state.config.kind == TKM:
        return tkm_train(state, value, winner)
    if state.config.kind == KMEANS:
        return kmeans_train(state, value, winner)
    return som_train(state, value, winner)


def state_to_json(state: ClustererState) -> str:
    """Versioned JSON snapshot for replay and UI inspection."""
    doc = {
        "version": STATE_SCHEMA_VERSION,
        "config": {
            "kind": state.config.kind,
            "num_neurons": state.config.num_neurons,
            "input_dim": state.config.input_dim,
            "eta": state.config.eta,
            "gamma": state.config.gamma,
            "history_depth": state.config.history_depth,
            "seed": state.config.seed,
        },
        "weights": state.weights.tolist(),
        "tkm_activities": (
            None if state.tkm_activities is None else state.tkm_activities.tolist()
        ),
        "tkm_history": [
            {"input": v.tolist(), "weights": w.tolist()} for v, w in state.tkm_history
        ],
    }
    return json.dumps(doc)


def state_from_json(text: str) -> ClustererState:
    doc = json.loads(text)
    if doc.get("version") != STATE_SCHEMA_VERSION:
        raise ValueError(f"unsupported state schema version {doc.get('version')!r}")
    config = ClustererConfig(**doc["config"])
    state = ClustererState(
        config=config,
        weights=np.asarray(doc["weights"], dtype=float),
        tkm_activities=(
            None
            if doc["tkm_activities"] is None
            else np.asarray(doc["tkm_activities"], dtype=float)
        ),
        tkm_history=deque(
            (
                (np.asarray(e["input"], dtype=float), np.asarray(e["weights"], dtype=float))
                for e in doc["tkm_history"]
            ),
            maxlen=config.history_depth,
        ),
    )
    return state
