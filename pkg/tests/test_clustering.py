"""Clustering back-ends against independent exhaustive-scan oracles."""

import numpy as np
import pytest

from neotaxis import clustering
from neotaxis.clustering import (
    KMEANS,
    SOM_RING,
    TKM,
    ClustererConfig,
    init_state,
    kmeans_classify,
    kmeans_cost,
    kmeans_train,
    som_classify,
    som_train,
    state_from_json,
    state_to_json,
    tkm_classify,
    tkm_train,
)


def oracle_argmin_distance(weights, v):
    """Independent winner scan: explicit loop over the scoring formula."""
    best, best_d = 0, float("inf")
    for i in range(len(weights)):
        d = sum((v[j] - weights[i][j]) ** 2 for j in range(len(v)))
        if d < best_d:
            best, best_d = i, d
    return best, best_d


def oracle_tkm_activity(prev_activities, weights, v, gamma):
    out = []
    for i in range(len(weights)):
        d = sum((v[j] - weights[i][j]) ** 2 for j in range(len(v)))
        out.append(gamma * prev_activities[i] + np.exp(-0.5 * d))
    return out


def make_state(kind, seed=0, num_neurons=12, input_dim=6, **kw):
    return init_state(
        ClustererConfig(
            kind=kind, seed=seed, num_neurons=num_neurons, input_dim=input_dim, **kw
        )
    )


def test_config_validation():
    with pytest.raises(ValueError):
        ClustererConfig(kind="dbscan")
    with pytest.raises(ValueError):
        ClustererConfig(num_neurons=1)
    with pytest.raises(ValueError):
        ClustererConfig(eta=1.5)
    with pytest.raises(ValueError):
        ClustererConfig(gamma=1.0)


def test_som_classify_identity_row():
    state = make_state(SOM_RING)
    state.weights[3] = np.full(6, 0.5)
    result = som_classify(state, np.full(6, 0.5))
    assert result.winner == 3
    assert result.score == pytest.approx(0.0)
    assert result.normalized_match == pytest.approx(1.0)


def test_som_classify_hand_example():
    state = make_state(SOM_RING, num_neurons=2, input_dim=2)
    state.weights = np.array([[0.0, 0.0], [1.0, 1.0]])
    result = som_classify(state, [0.2, 0.2])
    assert result.winner == 0
    assert result.score == pytest.approx(0.08)


def test_som_classify_dimension_mismatch():
    state = make_state(SOM_RING)
    with pytest.raises(ValueError):
        som_classify(state, [0.1, 0.2])


def test_som_classify_matches_oracle_1000_trials():
    rng = np.random.default_rng(42)
    state = make_state(SOM_RING)
    for _ in range(1000):
        state.weights = rng.uniform(0, 1, size=(12, 6))
        v = rng.uniform(0, 1, size=6)
        result = som_classify(state, v)
        winner, d = oracle_argmin_distance(state.weights.tolist(), v.tolist())
        assert result.winner == winner
        assert result.score == pytest.approx(d)


def test_som_train_moves_winner_and_ring_neighbours():
    state = make_state(SOM_RING)
    state.weights[0] = np.zeros(6)
    before = state.weights.copy()
    v = np.ones(6)
    som_train(state, v, winner=0)
    # winner row moved by eta*(v - w)
    assert state.weights[0] == pytest.approx(before[0] + 0.25 * (v - before[0]))
    # ring wrap: rows 11 and 1 moved, rows 2..10 bit-identical
    assert np.array_equal(state.weights[2:11], before[2:11])
    assert not np.array_equal(state.weights[11], before[11])
    assert not np.array_equal(state.weights[1], before[1])


def test_som_train_zero_eta_is_identity():
    state = make_state(SOM_RING, eta=0.0)
    before = state.weights.copy()
    som_train(state, np.ones(6), winner=4)
    assert np.array_equal(state.weights, before)


def test_som_train_pulls_winner_closer():
    rng = np.random.default_rng(7)
    state = make_state(SOM_RING)
    for _ in range(100):
        v = rng.uniform(0, 1, size=6)
        before = som_classify(state, v)
        if before.score == 0:
            continue
        som_train(state, v, before.winner)
        after_d = float(np.sum((v - state.weights[before.winner]) ** 2))
        assert after_d < before.score


def test_tkm_classify_perfect_match_zero_history():
    state = make_state(TKM, input_dim=1)
    state.weights[5] = np.array([0.5])
    # make sure no other row collides with 0.5
    for i in range(12):
        if i != 5 and abs(state.weights[i, 0] - 0.5) < 1e-3:
            state.weights[i, 0] += 0.1
    result = tkm_classify(state, 0.5)
    assert result.winner == 5
    assert state.tkm_activities[5] == pytest.approx(1.0)


def test_tkm_classify_hand_example():
    # gamma=0.4; neuron 2 carries activity 2.0 but gains only 0.1 this tick,
    # neuron 5 starts cold and gains 1.0: 0.9 vs 1.0, winner 5.
    state = make_state(TKM, input_dim=1)
    state.tkm_activities = np.zeros(12)
    state.tkm_activities[2] = 2.0
    v = 0.5
    state.weights[:, 0] = -10.0  # park everyone far away
    state.weights[5, 0] = v  # gain exp(0) = 1.0
    state.weights[2, 0] = v - np.sqrt(2.0 * np.log(10.0))  # gain exactly 0.1
    result = tkm_classify(state, v)
    assert state.tkm_activities[2] == pytest.approx(0.9)
    assert state.tkm_activities[5] == pytest.approx(1.0)
    assert result.winner == 5


def test_tkm_activities_match_oracle():
    rng = np.random.default_rng(3)
    state = make_state(TKM, input_dim=1)
    for _ in range(200):
        prev = state.tkm_activities.copy()
        v = rng.uniform(0, 1, size=1)
        tkm_classify(state, v)
        expected = oracle_tkm_activity(prev.tolist(), state.weights.tolist(), v.tolist(), 0.4)
        assert state.tkm_activities == pytest.approx(expected)


def test_tkm_gamma_zero_reduces_to_argmin_distance():
    rng = np.random.default_rng(11)
    tkm_state = make_state(TKM, input_dim=1, gamma=0.0)
    for _ in range(1000):
        weights = rng.uniform(0, 1, size=(12, 1))
        v = rng.uniform(0, 1, size=1)
        tkm_state.weights = weights.copy()
        tkm_state.tkm_activities = np.zeros(12)
        tkm_result = tkm_classify(tkm_state, v)
        winner, _ = oracle_argmin_distance(weights.tolist(), v.tolist())
        assert tkm_result.winner == winner


def test_tkm_activity_decays_geometrically_on_mismatch():
    state = make_state(TKM, input_dim=1)
    state.tkm_activities = np.linspace(0.5, 2.0, 12)
    before = state.tkm_activities.copy()
    tkm_classify(state, 1e6)  # huge mismatch: gain underflows to 0
    assert state.tkm_activities == pytest.approx(0.4 * before)


def test_tkm_train_single_term_reduces_to_som_rule():
    state = make_state(TKM, input_dim=1)
    state.weights[:, 0] = 0.0
    v = np.array([1.0])
    tkm_train(state, v, winner=6)
    assert state.weights[6, 0] == pytest.approx(0.25)


def test_tkm_train_two_term_hand_example():
    state = make_state(TKM, input_dim=1, history_depth=1)
    # history snapshot: previous input 1.2 against previous weight 0.2 -> delta 1.0
    state.weights[:, 0] = 0.0
    state.weights[6, 0] = 0.5
    prev_w = state.weights.copy()
    prev_w[6, 0] = 0.2
    state.tkm_history.appendleft((np.array([1.2]), prev_w))
    # current delta: v=1.0 - w=0.5 = 0.5; update = 0.25*(0.5 + 0.4*1.0)
    tkm_train(state, np.array([1.0]), winner=6)
    assert state.weights[6, 0] == pytest.approx(0.5 + 0.225)


def test_tkm_train_history_depth_bounds_divergence():
    # Streams clustered identically except for history depth: the weight gap
    # is bounded by the geometric tail eta * sum_{k=4..10} gamma^k * max_delta.
    def run(depth):
        state = make_state(TKM, input_dim=1, history_depth=depth, seed=5)
        rng = np.random.default_rng(17)
        for _ in range(60):
            v = rng.uniform(0, 1, size=1)
            result = tkm_classify(state, v)
            tkm_train(state, v, result.winner)
        return state.weights

    w3, w10 = run(3), run(10)
    max_delta = 1.0  # inputs and weights both within [0, 1] initially
    tail = 0.25 * sum(0.4**k for k in range(4, 11)) * max_delta
    per_step_gap = np.abs(w3 - w10).max()
    assert per_step_gap <= 60 * tail


def test_tkm_train_touches_only_ring_rows():
    state = make_state(TKM, input_dim=1)
    before = state.weights.copy()
    tkm_train(state, np.array([0.9]), winner=0)
    untouched = [i for i in range(12) if i not in (11, 0, 1)]
    assert np.array_equal(state.weights[untouched], before[untouched])


def test_kmeans_classify_matches_oracle_1000_trials():
    rng = np.random.default_rng(23)
    state = make_state(KMEANS)
    for _ in range(1000):
        state.weights = rng.uniform(0, 1, size=(12, 6))
        v = rng.uniform(0, 1, size=6)
        result = kmeans_classify(state, v)
        winner, d = oracle_argmin_distance(state.weights.tolist(), v.tolist())
        assert result.winner == winner
        assert result.score == pytest.approx(d)


def test_kmeans_hand_example():
    state = make_state(KMEANS, num_neurons=2, input_dim=1)
    state.weights = np.array([[0.0], [1.0]])
    result = kmeans_classify(state, [0.6])
    assert result.winner == 1
    assert result.score == pytest.approx(0.16)


def test_kmeans_train_moves_winner_only():
    state = make_state(KMEANS)
    state.weights[3] = np.zeros(6)
    before = state.weights.copy()
    kmeans_train(state, np.ones(6), winner=3)
    assert state.weights[3] == pytest.approx(np.full(6, 0.25))
    untouched = [i for i in range(12) if i != 3]
    assert np.array_equal(state.weights[untouched], before[untouched])


def test_kmeans_geometric_contraction():
    state = make_state(KMEANS, num_neurons=2, input_dim=1)
    state.weights = np.array([[0.0], [10.0]])
    x = np.array([1.0])
    gap0 = abs(x[0] - state.weights[0, 0])
    for t in range(1, 40):
        kmeans_train(state, x, winner=0)
        expected = (1 - 0.25) ** t * gap0
        assert abs(x[0] - state.weights[0, 0]) == pytest.approx(expected, abs=1e-12)


def test_kmeans_cost_zero_on_prototypes():
    state = make_state(KMEANS, num_neurons=3, input_dim=2)
    assert kmeans_cost(state, state.weights.copy()) == pytest.approx(0.0)


def test_kmeans_cost_hand_example():
    state = make_state(KMEANS, num_neurons=2, input_dim=1)
    state.weights = np.array([[0.0], [1.0]])
    assert kmeans_cost(state, [[0.2], [0.9]]) == pytest.approx(0.05)


def test_batch_lloyd_iterations_never_increase_cost():
    rng = np.random.default_rng(99)
    data = rng.uniform(0, 1, size=(100, 6))
    state = make_state(KMEANS)
    prev = kmeans_cost(state, data)
    for _ in range(20):
        # one Lloyd step: assign, then move each prototype to its cluster mean
        assignments = [kmeans_classify(state, x).winner for x in data]
        for j in range(12):
            members = [x for x, a in zip(data, assignments) if a == j]
            if members:
                state.weights[j] = np.mean(members, axis=0)
        cost = kmeans_cost(state, data)
        assert cost <= prev + 1e-12
        prev = cost


def test_init_is_deterministic_per_seed():
    a = make_state(SOM_RING, seed=123)
    b = make_state(SOM_RING, seed=123)
    c = make_state(SOM_RING, seed=124)
    assert np.array_equal(a.weights, b.weights)
    assert not np.array_equal(a.weights, c.weights)


def test_identical_streams_identical_final_state():
    for kind in (SOM_RING, TKM, KMEANS):
        dim = 1 if kind == TKM else 6
        results = []
        for _ in range(2):
            state = make_state(kind, seed=9, input_dim=dim)
            rng = np.random.default_rng(55)
            for _ in range(50):
                v = rng.uniform(0, 1, size=dim)
                r = clustering.classify(state, v)
                clustering.train(state, v, r.winner)
            results.append(state.weights)
        assert np.array_equal(results[0], results[1])


def test_state_json_round_trip():
    state = make_state(TKM, input_dim=1, history_depth=2)
    for v in (0.1, 0.7, 0.3):
        r = tkm_classify(state, v)
        tkm_train(state, np.array([v]), r.winner)
    text = state_to_json(state)
    back = state_from_json(text)
    assert np.array_equal(back.weights, state.weights)
    assert np.array_equal(back.tkm_activities, state.tkm_activities)
    assert len(back.tkm_history) == len(state.tkm_history)
    for (v1, w1), (v2, w2) in zip(back.tkm_history, state.tkm_history):
        assert np.array_equal(v1, v2)
        assert np.array_equal(w1, w2)


def test_state_json_rejects_unknown_version():
    state = make_state(SOM_RING)
    text = state_to_json(state).replace('"version": 1', '"version": 99')
    with pytest.raises(ValueError):
        state_from_json(text)
