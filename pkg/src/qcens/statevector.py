"""Exact statevector simulation of gate-list circuits.

All functions are pure.  States are numpy arrays whose last axis has length
2**num_qubits; a leading axis may hold a batch of states, which every
operation applies to element-wise.  Output distributions are probability
vectors of length 2**m over the m measured bits (see circuits module for the
bit-ordering convention).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .circuits import Circuit, CXGate, UGate
from .errors import StructuralError, ValidationError


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """2x2 unitary for the three-angle rotation gate.

    U = [[cos(t/2),            -e^{i*lam} sin(t/2)],
         [e^{i*phi} sin(t/2),   e^{i*(phi+lam)} cos(t/2)]]
    """
    for angle in (theta, phi, lam):
        if not math.isfinite(angle):
            raise ValidationError(f"non-finite gate angle: {angle!r}")
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=np.complex128,
    )


def zero_state(num_qubits: int) -> np.ndarray:
    state = np.zeros(1 << num_qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


def state_from_angles(angles) -> np.ndarray:
    """Product state with qubit j rotated by U(angle_j, 0, 0) from |0>."""
    state = np.array([1.0 + 0j])
    for angle in angles:  # later qubits become higher-order bits
        if not math.isfinite(angle):
            raise ValidationError(f"non-finite initialization angle: {angle!r}")
        qubit = np.array([math.cos(angle / 2.0), math.sin(angle / 2.0)], dtype=np.complex128)
        state = np.kron(qubit, state)
    return state


@lru_cache(maxsize=None)
def _pair_indices(num_qubits: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    """Basis indices with target bit 0, and the partners with target bit 1."""
    idx = np.arange(1 << num_qubits)
    i0 = idx[(idx >> target) & 1 == 0]
    return i0, i0 | (1 << target)


@lru_cache(maxsize=None)
def _cx_permutation(num_qubits: int, control: int, target: int) -> np.ndarray:
    idx = np.arange(1 << num_qubits)
    return idx ^ (((idx >> control) & 1) << target)


def _num_qubits_of(state: np.ndarray) -> int:
    dim = state.shape[-1]
    n = dim.bit_length() - 1
    if dim != 1 << n:
        raise StructuralError(f"state dimension {dim} is not a power of two")
    return n


def apply_u(state: np.ndarray, target: int, theta: float, phi: float, lam: float) -> np.ndarray:
    """Apply a U gate to the target qubit; returns a new state array."""
    n = _num_qubits_of(state)
    if not 0 <= target < n:
        raise StructuralError(f"target {target} out of range for {n} qubits")
    mat = u_matrix(theta, phi, lam)
    i0, i1 = _pair_indices(n, target)
    out = np.empty_like(state)
    a = state[..., i0]
    b = state[..., i1]
    out[..., i0] = mat[0, 0] * a + mat[0, 1] * b
    out[..., i1] = mat[1, 0] * a + mat[1, 1] * b
    return out


def apply_cx(state: np.ndarray, control: int, target: int) -> np.ndarray:
    """Apply a controlled-not gate; returns a new state array."""
    n = _num_qubits_of(state)
    if control == target:
        raise StructuralError(f"CX control equals target ({control})")
    for q in (control, target):
        if not 0 <= q < n:
            raise StructuralError(f"CX qubit {q} out of range for {n} qubits")
    return state[..., _cx_permutation(n, control, target)]


def apply_gate(state: np.ndarray, gate) -> np.ndarray:
    if isinstance(gate, UGate):
        return apply_u(state, gate.target, gate.theta, gate.phi, gate.lam)
    if isinstance(gate, CXGate):
        return apply_cx(state, gate.control, gate.target)
    raise StructuralError(f"unknown gate type: {type(gate).__name__}")


def evolve_state(circuit: Circuit, init: np.ndarray) -> np.ndarray:
    if init.shape[-1] != 1 << circuit.num_qubits:
        raise StructuralError(
            f"init dimension {init.shape[-1]} does not match "
            f"{circuit.num_qubits}-qubit circuit"
        )
    state = np.asarray(init, dtype=np.complex128)
    for gate in circuit.gates:
        state = apply_gate(state, gate)
    return state


@lru_cache(maxsize=None)
def _output_value_masks(num_qubits: int, measured_qubits: tuple[int, ...]) -> np.ndarray:
    """Boolean matrix: row v selects basis indices whose measured bits read v."""
    idx = np.arange(1 << num_qubits)
    values = np.zeros_like(idx)
    for pos, q in enumerate(measured_qubits):
        values |= ((idx >> q) & 1) << pos
    k = 1 << len(measured_qubits)
    return values[None, :] == np.arange(k)[:, None]


def marginal_distribution(probs: np.ndarray, num_qubits: int,
                          measured_qubits: tuple[int, ...]) -> np.ndarray:
    """Sum basis-state probabilities grouped by measured-bit pattern."""
    masks = _output_value_masks(num_qubits, tuple(measured_qubits))
    k = masks.shape[0]
    out = np.empty(probs.shape[:-1] + (k,), dtype=np.float64)
    for v in range(k):
        out[..., v] = probs[..., masks[v]].sum(axis=-1)
    return out


def run_ideal(circuit: Circuit, init: np.ndarray | None = None) -> np.ndarray:
    """Exact output distribution over the measured qubits.

    ``init`` defaults to the all-zeros state.  A batch of initial states (one
    per row) yields a batch of distributions.
    """
    if init is None:
        init = zero_state(circuit.num_qubits)
    state = evolve_state(circuit, init)
    probs = np.abs(state) ** 2
    return marginal_distribution(probs, circuit.num_qubits, circuit.measured_qubits)


def sample_shots(dist: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Empirical distribution of ``shots`` independent draws from ``dist``."""
    if shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots}")
    dist = np.asarray(dist, dtype=np.float64)
    counts = rng.multinomial(shots, dist / dist.sum())
    return counts / float(shots)
