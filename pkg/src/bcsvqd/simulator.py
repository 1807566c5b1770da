"""Statevector and density-matrix execution, shot sampling and Pauli expectations.

Basis index convention: qubit 0 is the least significant bit.  Outcome strings
in a :class:`ShotHistogram` list qubit 0 first, so ``"01"`` means qubit 0 read 0
and qubit 1 read 1.

Randomness comes from :class:`numpy.random.Generator` (PCG64 bit generator);
every ``rng`` argument accepts an integer seed or an existing generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .circuit import Circuit, Gate, basis_rotation_gates
from .noise import NoiseModel, validate_cptp
from .pauli import PauliSum, group_qubitwise_commuting, masks

MAX_STATEVECTOR_QUBITS = 14
MAX_DENSITY_QUBITS = 7

SQRT_HALF = np.sqrt(0.5)
H_MAT = np.array([[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]], dtype=complex)
X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def gate_matrix(gate: Gate) -> np.ndarray:
    """Local unitary of a gate; the first operand is the most significant bit."""
    if not gate.bound:
        raise ValueError("unbound gate has no matrix")
    kind = gate.kind
    if kind == "RY":
        return ry_matrix(gate.angle)
    if kind == "RZ":
        return rz_matrix(gate.angle)
    if kind == "H":
        return H_MAT.copy()
    if kind == "X":
        return X_MAT.copy()
    k = len(gate.qubits)
    dim = 2**k
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        out[_local_perm(kind, i, k), i] = 1
    return out


def _local_perm(kind: str, i: int, k: int) -> int:
    bits = [(i >> (k - 1 - j)) & 1 for j in range(k)]
    if kind == "CNOT" and bits[0]:
        bits[1] ^= 1
    elif kind == "SWAP":
        bits[0], bits[1] = bits[1], bits[0]
    elif kind == "CSWAP" and bits[0]:
        bits[1], bits[2] = bits[2], bits[1]
    return sum(b << (k - 1 - j) for j, b in enumerate(bits))


@lru_cache(maxsize=None)
def _permutation(kind: str, qubits: tuple[int, ...], n: int) -> np.ndarray:
    idx = np.arange(2**n)
    bit = lambda q: (idx >> q) & 1  # noqa: E731
    if kind == "X":
        return idx ^ (1 << qubits[0])
    if kind == "CNOT":
        c, t = qubits
        return idx ^ (bit(c) << t)
    if kind == "SWAP":
        a, b = qubits
        diff = bit(a) ^ bit(b)
        return idx ^ (diff << a) ^ (diff << b)
    if kind == "CSWAP":
        c, a, b = qubits
        diff = (bit(a) ^ bit(b)) & bit(c)
        return idx ^ (diff << a) ^ (diff << b)
    raise ValueError(kind)


def _apply_1q(mat: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    """Left-multiply the row index of ``mat`` (shape ``(2**n, m)``) by ``u`` on qubit ``q``."""
    m = mat.shape[1]
    lo = 2**q
    view = mat.reshape(2 ** (n - 1 - q), 2, lo * m)
    return (u @ view).reshape(2**n, m)


def _apply_gate_rows(mat: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    if gate.kind in ("RY", "RZ", "H"):
        return _apply_1q(mat, gate_matrix(gate), gate.qubits[0], n)
    return mat[_permutation(gate.kind, gate.qubits, n)]


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(self.n, np.outer(a, a.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    n: int
    elements: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.clip(np.real(np.diag(self.elements)), 0.0, None)


State = Union[StateVector, DensityMatrix]


@dataclass(frozen=True)
class Backend:
    """``noise=None`` is the ideal (statevector) backend."""

    noise: NoiseModel | None = None

    @property
    def noisy(self) -> bool:
        return self.noise is not None

    @property
    def max_qubits(self) -> int:
        return MAX_DENSITY_QUBITS if self.noisy else MAX_STATEVECTOR_QUBITS


IDEAL = Backend()


def as_backend(backend: Backend | str | None) -> Backend:
    if backend is None or backend == "ideal":
        return IDEAL
    if backend == "noisy":
        return Backend(NoiseModel())
    if isinstance(backend, Backend):
        return backend
    raise ValueError(f"unknown backend {backend!r}")


def zero_state(n: int) -> StateVector:
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1
    return StateVector(n, amps)


def apply_gates(state: State, gates, noise: NoiseModel | None = None) -> State:
    """Apply bound gates in order; the noise model is only used on density matrices."""
    n = state.n
    if isinstance(state, StateVector):
        vec = state.amplitudes.reshape(-1, 1)
        for g in gates:
            vec = _apply_gate_rows(vec, g, n)
        return StateVector(n, vec.ravel())
    rho = state.elements
    for g in gates:
        rho = _apply_gate_rows(rho, g, n)
        rho = _apply_gate_rows(rho.conj().T, g, n).conj().T
        if noise is not None:
            kraus = noise.channel(len(g.qubits))
            for q in g.qubits:
                rho = _apply_kraus(rho, kraus, q, n)
    return DensityMatrix(n, rho)


def _apply_kraus(rho: np.ndarray, kraus, q: int, n: int) -> np.ndarray:
    out = np.zeros_like(rho)
    for k in kraus:
        half = _apply_1q(rho, k, q, n)
        out += _apply_1q(half.conj().T, k, q, n).conj().T
    return out


def run_statevector(circuit: Circuit) -> StateVector:
    circuit.require_bound()
    if circuit.n > MAX_STATEVECTOR_QUBITS:
        raise ValueError(f"{circuit.n} qubits exceeds the statevector limit {MAX_STATEVECTOR_QUBITS}")
    return apply_gates(zero_state(circuit.n), circuit.gates)


def run_density(circuit: Circuit, noise: NoiseModel | None = None) -> DensityMatrix:
    circuit.require_bound()
    if circuit.n > MAX_DENSITY_QUBITS:
        raise ValueError(f"{circuit.n} qubits exceeds the density-matrix limit {MAX_DENSITY_QUBITS}")
    if noise is not None:
        for arity in {len(g.qubits) for g in circuit.gates}:
            if validate_cptp(noise.channel(arity)) > 1e-9:
                raise ValueError("noise model is not trace preserving")
    return apply_gates(zero_state(circuit.n).density(), circuit.gates, noise)


def run(circuit: Circuit, backend: Backend | str | None = None) -> State:
    backend = as_backend(backend)
    if backend.noisy:
        return run_density(circuit, backend.noise)
    return run_statevector(circuit)


@dataclass(frozen=True)
class ShotHistogram:
    counts: dict[str, int]
    shots: int

    @classmethod
    def from_array(cls, counts: np.ndarray, n: int) -> "ShotHistogram":
        hist = {
            format(i, f"0{n}b")[::-1]: int(c) for i, c in enumerate(counts) if c
        }
        return cls(hist, int(np.sum(counts)))

    def frequencies(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}

    def marginal(self, qubits) -> "ShotHistogram":
        out: dict[str, int] = {}
        for key, c in self.counts.items():
            sub = "".join(key[q] for q in qubits)
            out[sub] = out.get(sub, 0) + c
        return ShotHistogram(out, self.shots)


def _sample_array(state: State, shots: int, rng) -> np.ndarray:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    return np.random.default_rng(rng).multinomial(shots, probs)


def sample_counts(state: State, shots: int, rng=None) -> ShotHistogram:
    """Draw ``shots`` computational-basis outcomes."""
    return ShotHistogram.from_array(_sample_array(state, shots, rng), state.n)


@lru_cache(maxsize=None)
def _term_tables(label: str):
    x_mask, z_mask, n_y = masks(label)
    n = len(label)
    idx = np.arange(2**n)
    sign = 1 - 2 * (np.bitwise_count(idx & z_mask).astype(np.int64) & 1)
    phase = (1j) ** n_y * sign
    return idx ^ x_mask, phase


def expectation_exact(state: State, op: PauliSum) -> float:
    """``<psi|H|psi>`` or ``Tr(rho H)`` summed term by term."""
    if state.n != op.n:
        raise ValueError(f"state has {state.n} qubits, operator {op.n}")
    total = 0.0 + 0.0j
    if isinstance(state, StateVector):
        psi = state.amplitudes
        for coeff, label in op.terms:
            flip, phase = _term_tables(label)
            total += coeff * np.sum(psi[flip].conj() * phase * psi)
    else:
        rho = state.elements
        rows = np.arange(2**state.n)
        for coeff, label in op.terms:
            flip, phase = _term_tables(label)
            total += coeff * np.sum(phase * rho[rows, flip])
    return float(total.real)


@lru_cache(maxsize=None)
def _parity_signs(n: int, support: int) -> np.ndarray:
    idx = np.arange(2**n)
    return 1 - 2 * (np.bitwise_count(idx & support).astype(np.int64) & 1)


def expectation_sampled(
    circuit: Circuit,
    op: PauliSum,
    shots: int,
    backend: Backend | str | None = None,
    rng=None,
    state: State | None = None,
) -> float:
    """Shot estimate of ``<H>`` measuring each qubit-wise commuting group separately.

    ``shots`` are spent per group; ``shots == 0`` returns the exact expectation.
    ``state`` may carry the already-executed circuit output to skip re-running it.
    """
    backend = as_backend(backend)
    if state is None:
        state = run(circuit, backend)
    if shots == 0:
        return expectation_exact(state, op)
    rng = np.random.default_rng(rng)
    noise = backend.noise
    n = op.n
    total = 0.0
    for group in group_qubitwise_commuting(op):
        rotated = apply_gates(state, basis_rotation_gates(group.basis), noise)
        counts = _sample_array(rotated, shots, rng)
        for member in group.members:
            coeff, label = op.terms[member]
            support = sum(1 << q for q, ch in enumerate(label) if ch != "I")
            total += coeff * float(counts @ _parity_signs(n, support)) / shots
    return total
