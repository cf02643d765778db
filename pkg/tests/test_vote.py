import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcens import (
    Circuit,
    Ensemble,
    StructuralError,
    UGate,
    ValidationError,
    ensemble_fitness,
    replicate_homogeneous,
    vote_distribution,
)
from qcens.ensemble import TestCase

from conftest import bell_circuit, tv_distance


def mc_vote_oracle(member_dists, samples, rng):
    """Empirical plurality-vote distribution from sampled joint outcomes.

    Independent of the library: samples each member, counts values, picks a
    plurality winner uniformly at random among ties.
    """
    member_dists = [np.asarray(d, float) for d in member_dists]
    k = len(member_dists[0])
    n = len(member_dists)
    # histogram sampled joint outcomes by their base-k code, then resolve each
    # code's plurality winner; tied codes split their tally multinomially,
    # which matches breaking each sample's tie uniformly at random
    code = np.zeros(samples, dtype=np.int64)
    for m, d in enumerate(member_dists):
        code += k**m * np.searchsorted(np.cumsum(d), rng.random(samples), side="right")
    joint_counts = np.bincount(code, minlength=k**n)
    out = np.zeros(k)
    for j in np.flatnonzero(joint_counts):
        values = np.bincount((j // k ** np.arange(n)) % k, minlength=k)
        winners = np.flatnonzero(values == values.max())
        if len(winners) == 1:
            out[winners[0]] += joint_counts[j]
        else:
            share = np.full(len(winners), 1.0 / len(winners))
            out[winners] += rng.multinomial(joint_counts[j], share)
    return out / samples


def test_single_member_vote_is_identity():
    dist = np.array([0.2, 0.3, 0.5])
    np.testing.assert_array_equal(vote_distribution([dist]), dist)


def test_strict_majority():
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    np.testing.assert_allclose(vote_distribution([a, a, b]), [1.0, 0.0], atol=1e-12)


def test_two_member_tie_splits_uniformly():
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    np.testing.assert_allclose(vote_distribution([a, b]), [0.5, 0.5], atol=1e-12)


def test_hand_enumerated_two_member_case():
    # joint outcomes: 00 -> 0, 11 -> 1, 01/10 -> half each
    # P(0) = 0.6*0.5 + 0.5*(0.6*0.5 + 0.4*0.5) = 0.55
    dist = vote_distribution([np.array([0.6, 0.4]), np.array([0.5, 0.5])])
    np.testing.assert_allclose(dist, [0.55, 0.45], atol=1e-15)


def test_vote_rejects_empty_and_mismatched():
    with pytest.raises(ValidationError):
        vote_distribution([])
    with pytest.raises(StructuralError):
        vote_distribution([np.array([1.0, 0.0]), np.array([1.0, 0.0, 0.0])])


@settings(deadline=None, max_examples=50)
@given(
    seed=st.integers(0, 2**32 - 1),
    k=st.sampled_from([2, 4]),
    n=st.integers(1, 5),
)
def test_vote_is_valid_distribution_and_permutation_invariant(seed, k, n):
    rng = np.random.default_rng(seed)
    dists = [rng.dirichlet(np.ones(k)) for _ in range(n)]
    vote = vote_distribution(dists)
    assert np.all(vote >= -1e-15)
    assert abs(vote.sum() - 1.0) < 1e-9
    perm = rng.permutation(n)
    np.testing.assert_allclose(vote, vote_distribution([dists[i] for i in perm]),
                               atol=1e-12)


def test_vote_matches_monte_carlo_oracle():
    rng = np.random.default_rng(777)
    for _ in range(10):
        k = int(rng.choice([2, 4]))
        n = int(rng.integers(1, 6))
        dists = [rng.dirichlet(np.ones(k)) for _ in range(n)]
        exact = vote_distribution(dists)
        empirical = mc_vote_oracle(dists, 10**6, rng)
        assert tv_distance(exact, empirical) < 0.005


def test_monte_carlo_fallback_path():
    # k=2, n=21 exceeds the 10^6 joint-outcome limit
    rng = np.random.default_rng(3)
    dists = [np.array([0.9, 0.1])] * 21
    vote = vote_distribution(dists, rng=rng)
    assert abs(vote.sum() - 1.0) < 1e-9
    assert vote[0] > 0.99  # strong majority for value 0


def test_condorcet_amplification_binary_domain():
    for p in np.linspace(0.55, 0.95, 9):
        dist = np.array([1.0 - p, p])
        for n in (3, 5, 7):
            amplified = vote_distribution([dist] * n)[1]
            assert amplified >= p - 1e-12


def test_homogeneous_binomial_formula():
    # per-test success 0.6 on a binary domain, 3 copies: p^3 + 3 p^2 (1-p)
    p = 0.6
    theta = 2 * math.asin(math.sqrt(p))
    circuit = Circuit(1, (UGate(0, theta, 0.0, 0.0),), (0,))
    ensemble = replicate_homogeneous(circuit, 3)
    report = ensemble_fitness(ensemble, [TestCase(expected=1, features=(0.0,))])
    expected = p**3 + 3 * p**2 * (1 - p)
    assert abs(report.fitness - expected) < 1e-9
    # must agree with the generic vote enumeration
    member = np.array([1 - p, p])
    np.testing.assert_allclose(vote_distribution([member] * 3)[1], expected, atol=1e-12)


def test_replicate_homogeneous_validation_and_unanimity():
    circuit = bell_circuit()
    with pytest.raises(ValidationError):
        replicate_homogeneous(circuit, 0)
    test = TestCase(expected=0, features=(0.0, 0.0))
    single = ensemble_fitness(Ensemble((circuit,)), [test]).fitness
    # deterministic-unanimous property holds for a no-op circuit
    noop = Circuit(2, (), (0, 1))
    for n in (1, 7):
        assert ensemble_fitness(replicate_homogeneous(noop, n), [test]).fitness == 1.0
    assert abs(single - 0.5) < 1e-12


def test_fitness_noop_circuits():
    noop = Circuit(4, (), (0, 1))
    ensemble = Ensemble((noop, noop, noop))
    report = ensemble_fitness(ensemble, [TestCase(expected=0, features=(0.0,) * 4)])
    assert report.fitness == 1.0


def test_fitness_bell_single_member():
    report = ensemble_fitness(Ensemble((bell_circuit(),)),
                              [TestCase(expected=0, features=(0.0, 0.0))])
    assert abs(report.fitness - 0.5) < 1e-12


def test_fitness_is_mean_of_per_test():
    circuit = bell_circuit()
    tests = [TestCase(expected=0, features=(0.0, 0.0)),
             TestCase(expected=3, features=(math.pi, math.pi))]
    report = ensemble_fitness(Ensemble((circuit,)), tests)
    assert abs(report.fitness - sum(report.per_test) / len(report.per_test)) < 1e-12


def test_fitness_shots_mode_deterministic():
    circuit = bell_circuit()
    tests = [TestCase(expected=0, features=(0.0, 0.0))]
    a = ensemble_fitness(Ensemble((circuit,)), tests, shots=1000, seed=9)
    b = ensemble_fitness(Ensemble((circuit,)), tests, shots=1000, seed=9)
    assert a == b
    c = ensemble_fitness(Ensemble((circuit,)), tests, shots=1000, seed=10)
    assert 0.0 <= c.fitness <= 1.0


def test_fitness_rejects_empty_tests():
    with pytest.raises(ValidationError):
        ensemble_fitness(Ensemble((bell_circuit(),)), [])


def test_ensemble_members_must_match():
    with pytest.raises(StructuralError):
        Ensemble((bell_circuit(), Circuit(3, (), (0, 1))))


def test_expected_value_must_fit_output_domain():
    with pytest.raises(ValidationError):
        ensemble_fitness(Ensemble((bell_circuit(),)),
                         [TestCase(expected=5, features=(0.0, 0.0))])


def test_test_case_requires_exactly_one_init_form():
    with pytest.raises(ValidationError):
        TestCase(expected=0)
    with pytest.raises(ValidationError):
        TestCase(expected=0, features=(0.0,), init_gates=(UGate(0, 0, 0, 0),))
