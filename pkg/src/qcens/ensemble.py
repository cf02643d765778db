"""Ensemble semantics: plurality voting and fitness evaluation.

An ensemble's output value is the most frequent among its member circuits'
outputs; ties are split uniformly at random among the tied values.  Because
members are independent, the ensemble's exact output distribution follows
from enumerating all joint member outcomes.  Fitness is the mean probability
of producing the expected output value over a set of test cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuits import Circuit
from .errors import StructuralError, ValidationError
from .noise import NoiseModel, run_noisy
from .statevector import run_ideal, sample_shots, state_from_angles, evolve_state, zero_state

# beyond this many joint outcomes, vote_distribution falls back to Monte Carlo
EXACT_VOTE_LIMIT = 10**6
MC_VOTE_SAMPLES = 10**6


@dataclass(frozen=True)
class Ensemble:
    """Fixed-size list of circuits sharing register width and measured qubits."""

    circuits: tuple[Circuit, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "circuits", tuple(self.circuits))
        if not self.circuits:
            raise ValidationError("ensemble must have at least one member")
        first = self.circuits[0]
        for c in self.circuits[1:]:
            if c.num_qubits != first.num_qubits or c.measured_qubits != first.measured_qubits:
                raise StructuralError(
                    "ensemble members must share num_qubits and measured_qubits"
                )

    def __len__(self) -> int:
        return len(self.circuits)

    @property
    def num_qubits(self) -> int:
        return self.circuits[0].num_qubits

    @property
    def measured_qubits(self) -> tuple[int, ...]:
        return self.circuits[0].measured_qubits


@dataclass(frozen=True)
class TestCase:
    """Register initialization plus the expected output value.

    ``features`` holds one rotation angle per qubit (the register is prepared
    as a product of single-qubit Y rotations); ``init_gates`` holds an explicit
    initialization gate list.  Exactly one of the two must be given.
    """

    __test__ = False  # keep pytest from collecting this dataclass

    expected: int
    features: tuple[float, ...] | None = None
    init_gates: tuple | None = None

    def __post_init__(self) -> None:
        if (self.features is None) == (self.init_gates is None):
            raise ValidationError("test case needs exactly one of features / init_gates")
        if self.features is not None:
            object.__setattr__(self, "features", tuple(float(f) for f in self.features))
        else:
            object.__setattr__(self, "init_gates", tuple(self.init_gates))
        if self.expected < 0:
            raise ValidationError(f"expected output must be >= 0, got {self.expected}")

    def init_state(self, num_qubits: int) -> np.ndarray:
        if self.features is not None:
            if len(self.features) != num_qubits:
                raise StructuralError(
                    f"test case has {len(self.features)} features "
                    f"but the register has {num_qubits} qubits"
                )
            return state_from_angles(self.features)
        init_circuit = Circuit(num_qubits, self.init_gates, tuple(range(num_qubits)))
        return evolve_state(init_circuit, zero_state(num_qubits))


@dataclass(frozen=True)
class FitnessReport:
    """Mean probability of the expected output, with the per-test breakdown."""

    fitness: float
    per_test: tuple[float, ...]


@lru_cache(maxsize=None)
def vote_matrix(k: int, n: int) -> np.ndarray:
    """(k**n, k) matrix mapping each joint member outcome to its vote split.

    Row j corresponds to the joint outcome whose base-k digits are the member
    values; the row puts 1/|W| on each value in the set W of plurality winners.
    """
    outcomes = (np.arange(k**n)[:, None] // k ** np.arange(n)[None, :]) % k
    counts = (outcomes[:, :, None] == np.arange(k)[None, None, :]).sum(axis=1)
    winners = counts == counts.max(axis=1, keepdims=True)
    return winners / winners.sum(axis=1, keepdims=True)


def _vote_exact_batch(member_dists: np.ndarray) -> np.ndarray:
    """Exact vote over dists of shape (n_members, batch, k) -> (batch, k)."""
    n, batch, k = member_dists.shape
    joint = member_dists[0]
    for m in range(1, n):
        joint = (joint[:, :, None] * member_dists[m][:, None, :]).reshape(batch, -1)
    return joint @ vote_matrix(k, n)


def _vote_monte_carlo(member_dists: np.ndarray, samples: int,
                      rng: np.random.Generator) -> np.ndarray:
    """Empirical vote distribution from sampled joint outcomes, (n, k) -> (k,)."""
    n, k = member_dists.shape
    draws = np.empty((samples, n), dtype=np.int64)
    for m in range(n):
        draws[:, m] = rng.choice(k, size=samples, p=member_dists[m] / member_dists[m].sum())
    counts = (draws[:, :, None] == np.arange(k)[None, None, :]).sum(axis=1)
    winners = counts == counts.max(axis=1, keepdims=True)
    split = winners / winners.sum(axis=1, keepdims=True)
    return split.sum(axis=0) / samples


def vote_distribution(member_dists, rng: np.random.Generator | None = None,
                      mc_samples: int = MC_VOTE_SAMPLES) -> np.ndarray:
    """Ensemble output distribution under plurality voting with uniform ties.

    Exact when the joint-outcome count k**n is tractable; otherwise falls back
    to Monte Carlo over ``mc_samples`` joint votes (seeded ``rng`` required for
    reproducibility; a fixed default stream is used when omitted).
    """
    dists = [np.asarray(d, dtype=np.float64) for d in member_dists]
    if not dists:
        raise ValidationError("vote over an empty member list")
    k = dists[0].shape[-1]
    for d in dists:
        if d.shape != (k,):
            raise StructuralError("member distributions must share one output domain")
    stacked = np.stack(dists)
    n = len(dists)
    if k**n <= EXACT_VOTE_LIMIT:
        return _vote_exact_batch(stacked[:, None, :])[0]
    if rng is None:
        rng = np.random.default_rng(0)
    return _vote_monte_carlo(stacked, mc_samples, rng)


def replicate_homogeneous(circuit: Circuit, n: int) -> Ensemble:
    """Homogeneous ensemble: the same circuit repeated n times."""
    if n < 1:
        raise ValidationError(f"ensemble size must be >= 1, got {n}")
    return Ensemble((circuit,) * n)


class Evaluator:
    """Evaluates ensemble fitness against a fixed test set.

    Precomputes initialization states once and caches per-circuit output
    distributions, which pays off when the same circuit appears in many
    ensembles (elites, homogeneous replicas).  ``shots=None`` keeps the exact
    member distributions; otherwise each (test, member) pair degrades its
    distribution to a ``shots``-sample empirical estimate using an RNG stream
    derived from (seed, test index, member index), making results independent
    of evaluation order.
    """

    def __init__(self, tests, noise: NoiseModel | None = None,
                 shots: int | None = None, seed: int = 0):
        self.tests = list(tests)
        if not self.tests:
            raise ValidationError("test list must be non-empty")
        if shots is not None and shots < 1:
            raise ValidationError(f"shots must be >= 1, got {shots}")
        self.noise = noise
        self.shots = shots
        self.seed = seed
        self._init_states: np.ndarray | None = None
        self._expected: np.ndarray = np.array([t.expected for t in self.tests])
        self._dist_cache: dict[Circuit, np.ndarray] = {}

    def _states_for(self, num_qubits: int) -> np.ndarray:
        if self._init_states is None:
            self._init_states = np.stack(
                [t.init_state(num_qubits) for t in self.tests]
            )
        elif self._init_states.shape[-1] != 1 << num_qubits:
            raise StructuralError("test cases were prepared for a different register width")
        return self._init_states

    def clear_cache(self) -> None:
        self._dist_cache.clear()

    def member_distributions(self, circuit: Circuit) -> np.ndarray:
        """Per-test output distributions for one circuit, shape (T, k)."""
        cached = self._dist_cache.get(circuit)
        if cached is not None:
            return cached
        states = self._states_for(circuit.num_qubits)
        if self.noise is None:
            dists = run_ideal(circuit, states)
        else:
            dists = run_noisy(circuit, states, self.noise)
        self._dist_cache[circuit] = dists
        return dists

    def ensemble_fitness(self, ensemble: Ensemble) -> FitnessReport:
        k = ensemble.circuits[0].num_output_values
        for t, case in enumerate(self.tests):
            if case.expected >= k:
                raise ValidationError(
                    f"test {t} expects value {case.expected}, "
                    f"but circuits output only {k} values"
                )
        member_dists = np.stack(
            [self.member_distributions(c) for c in ensemble.circuits]
        )
        if self.shots is not None:
            member_dists = self._degrade_to_shots(member_dists)
        n = len(ensemble)
        if k**n <= EXACT_VOTE_LIMIT:
            vote = _vote_exact_batch(member_dists)
        else:
            vote = np.stack([
                _vote_monte_carlo(
                    member_dists[:, t, :], MC_VOTE_SAMPLES,
                    np.random.default_rng(np.random.SeedSequence((self.seed, t))),
                )
                for t in range(len(self.tests))
            ])
        per_test = vote[np.arange(len(self.tests)), self._expected]
        return FitnessReport(float(per_test.mean()), tuple(float(p) for p in per_test))

    def _degrade_to_shots(self, member_dists: np.ndarray) -> np.ndarray:
        n, num_tests, _ = member_dists.shape
        out = np.empty_like(member_dists)
        for t in range(num_tests):
            for m in range(n):
                rng = np.random.default_rng(np.random.SeedSequence((self.seed, t, m)))
                out[m, t] = sample_shots(member_dists[m, t], self.shots, rng)
        return out


def ensemble_fitness(ensemble: Ensemble, tests, noise: NoiseModel | None = None,
                     shots: int | None = None, seed: int = 0) -> FitnessReport:
    """Fitness of one ensemble: mean expected-output probability over tests."""
    return Evaluator(tests, noise=noise, shots=shots, seed=seed).ensemble_fitness(ensemble)
