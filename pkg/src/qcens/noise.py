"""Parametric noise models and density-matrix simulation.

A NoiseModel applies a depolarizing channel after every gate (strength p1 for
single-qubit U gates, p2 on both qubits touched by a CX) and classical readout
bit-flips to the final measured distribution.  Simulation evolves a density
matrix, so results are exact and deterministic.

Density matrices are numpy arrays of shape (..., 2**n, 2**n); a leading axis
batches independent states.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, CXGate, UGate
from .errors import StructuralError, ValidationError
from .statevector import (
    _cx_permutation,
    _pair_indices,
    marginal_distribution,
    u_matrix,
    zero_state,
)

MAX_DENSITY_QUBITS = 10


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing strengths plus per-bit readout flip probabilities."""

    p1: float
    p2: float
    readout_flip_0to1: float
    readout_flip_1to0: float
    name: str = ""

    def __post_init__(self) -> None:
        for field in ("p1", "p2", "readout_flip_0to1", "readout_flip_1to0"):
            value = getattr(self, field)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{field} must be in [0, 1], got {value}")

    @property
    def is_zero(self) -> bool:
        return self.p1 == self.p2 == self.readout_flip_0to1 == self.readout_flip_1to0 == 0.0


ZERO_NOISE = NoiseModel(0.0, 0.0, 0.0, 0.0, name="zero")


def density_from_state(state: np.ndarray) -> np.ndarray:
    """|psi><psi| for a state (or batch of states)."""
    return np.einsum("...i,...j->...ij", state, np.conj(state))


def _num_qubits_of_rho(rho: np.ndarray) -> int:
    dim = rho.shape[-1]
    n = dim.bit_length() - 1
    if rho.shape[-2] != dim or dim != 1 << n:
        raise StructuralError(f"density matrix has bad shape {rho.shape[-2:]}")
    if n > MAX_DENSITY_QUBITS:
        raise ValidationError(f"density-matrix register capped at {MAX_DENSITY_QUBITS} qubits")
    return n


def _apply_u_rho(rho: np.ndarray, target: int, theta: float, phi: float, lam: float) -> np.ndarray:
    n = _num_qubits_of_rho(rho)
    mat = u_matrix(theta, phi, lam)
    i0, i1 = _pair_indices(n, target)
    out = np.empty_like(rho)
    a = rho[..., i0, :]
    b = rho[..., i1, :]
    out[..., i0, :] = mat[0, 0] * a + mat[0, 1] * b
    out[..., i1, :] = mat[1, 0] * a + mat[1, 1] * b
    final = np.empty_like(out)
    cmat = np.conj(mat)
    a = out[..., :, i0]
    b = out[..., :, i1]
    final[..., :, i0] = cmat[0, 0] * a + cmat[0, 1] * b
    final[..., :, i1] = cmat[1, 0] * a + cmat[1, 1] * b
    return final


def _apply_cx_rho(rho: np.ndarray, control: int, target: int) -> np.ndarray:
    n = _num_qubits_of_rho(rho)
    perm = _cx_permutation(n, control, target)
    return rho[..., perm, :][..., :, perm]


def depolarize(rho: np.ndarray, qubits, p: float) -> np.ndarray:
    """Depolarizing channel on the listed qubits.

    rho <- (1 - p) * rho + p * (partial trace over the qubits, re-embedded
    with the maximally mixed state on them).  Trace preserving.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"depolarizing probability must be in [0, 1], got {p}")
    qubits = tuple(qubits)
    if len(set(qubits)) != len(qubits):
        raise StructuralError(f"depolarize qubits not distinct: {qubits}")
    n = _num_qubits_of_rho(rho)
    for q in qubits:
        if not 0 <= q < n:
            raise StructuralError(f"depolarize qubit {q} out of range for {n} qubits")
    if p == 0.0 or not qubits:
        return rho
    mixed = _trace_out_and_mix(rho, n, qubits)
    if p == 1.0:
        return mixed
    return (1.0 - p) * rho + p * mixed


def _trace_out_and_mix(rho: np.ndarray, n: int, qubits: tuple[int, ...]) -> np.ndarray:
    """Replace the listed qubits by the maximally mixed state."""
    batch_shape = rho.shape[:-2]
    tensor = rho.reshape(batch_shape + (2,) * (2 * n))
    letters = iter(string.ascii_lowercase)
    row = {q: next(letters) for q in range(n)}
    col = {q: (row[q] if q in qubits else next(letters)) for q in range(n)}
    out_row = dict(row)
    out_col = dict(col)
    operands = [tensor]
    subs = ["..." + "".join(row[q] for q in reversed(range(n)))
            + "".join(col[q] for q in reversed(range(n)))]
    eye_half = np.eye(2) / 2.0
    for q in qubits:
        r, c = next(letters), next(letters)
        out_row[q], out_col[q] = r, c
        operands.append(eye_half)
        subs.append(r + c)
    out_sub = ("..." + "".join(out_row[q] for q in reversed(range(n)))
               + "".join(out_col[q] for q in reversed(range(n))))
    result = np.einsum(",".join(subs) + "->" + out_sub, *operands)
    return result.reshape(batch_shape + (1 << n, 1 << n))


def apply_readout_error(dist: np.ndarray, flip_0to1: float, flip_1to0: float) -> np.ndarray:
    """Independent classical bit-flips on each measured bit of a distribution."""
    for p in (flip_0to1, flip_1to0):
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"readout flip probability must be in [0, 1], got {p}")
    k = dist.shape[-1]
    m = k.bit_length() - 1
    if k != 1 << m:
        raise StructuralError(f"distribution length {k} is not a power of two")
    # column j of the transition matrix is the output law for input bit j
    trans = np.array([[1.0 - flip_0to1, flip_1to0],
                      [flip_0to1, 1.0 - flip_1to0]])
    batch_shape = dist.shape[:-1]
    tensor = dist.reshape(batch_shape + (2,) * m)
    nb = len(batch_shape)
    for bit in range(m):
        axis = nb + (m - 1 - bit)
        tensor = np.moveaxis(np.tensordot(tensor, trans, axes=([axis], [1])), -1, axis)
    return tensor.reshape(batch_shape + (k,))


def run_noisy(circuit: Circuit, init: np.ndarray | None = None,
              noise: NoiseModel = ZERO_NOISE) -> np.ndarray:
    """Output distribution under depolarizing gate noise and readout error.

    Evolves |init><init| through the gate list, applying a depolarizing
    channel after each gate, then marginalizes over the measured qubits and
    applies the readout bit-flips.
    """
    if circuit.num_qubits > MAX_DENSITY_QUBITS:
        raise ValidationError(
            f"noisy simulation capped at {MAX_DENSITY_QUBITS} qubits, "
            f"circuit has {circuit.num_qubits}"
        )
    if init is None:
        init = zero_state(circuit.num_qubits)
    if init.shape[-1] != 1 << circuit.num_qubits:
        raise StructuralError(
            f"init dimension {init.shape[-1]} does not match "
            f"{circuit.num_qubits}-qubit circuit"
        )
    rho = density_from_state(np.asarray(init, dtype=np.complex128))
    for gate in circuit.gates:
        if isinstance(gate, UGate):
            rho = _apply_u_rho(rho, gate.target, gate.theta, gate.phi, gate.lam)
            rho = depolarize(rho, (gate.target,), noise.p1)
        elif isinstance(gate, CXGate):
            rho = _apply_cx_rho(rho, gate.control, gate.target)
            rho = depolarize(rho, (gate.control, gate.target), noise.p2)
        else:
            raise StructuralError(f"unknown gate type: {type(gate).__name__}")
    probs = np.real(np.einsum("...ii->...i", rho))
    dist = marginal_distribution(probs, circuit.num_qubits, circuit.measured_qubits)
    return apply_readout_error(dist, noise.readout_flip_0to1, noise.readout_flip_1to0)
