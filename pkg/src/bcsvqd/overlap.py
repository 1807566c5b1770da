"""State-overlap estimators: SWAP test, destructive SWAP test, transition amplitude.

Each method reduces to the expectation of a diagonal observable on its circuit's
output distribution, so a single code path handles both finite shots and the
analytic (``shots == 0``) mode.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .circuit import Circuit, Gate, compose
from .simulator import Backend, ShotHistogram, _sample_array, as_backend, run


class OverlapMethod(enum.Enum):
    swap_test = "swap"
    destructive_swap = "dswap"
    transition_amplitude = "transition"

    @classmethod
    def parse(cls, value: "OverlapMethod | str") -> "OverlapMethod":
        if isinstance(value, cls):
            return value
        for m in cls:
            if value in (m.value, m.name):
                return m
        raise ValueError(f"unknown overlap method {value!r}")


@dataclass(frozen=True)
class OverlapEstimate:
    value: float
    shots: int
    method: OverlapMethod

    @property
    def clamped(self) -> float:
        return min(1.0, max(0.0, self.value))


def _check_pair(prep_a: Circuit, prep_b: Circuit) -> int:
    prep_a.require_bound()
    prep_b.require_bound()
    if prep_a.n != prep_b.n:
        raise ValueError(f"preparations act on {prep_a.n} and {prep_b.n} qubits")
    return prep_a.n


def swap_test_circuit(prep_a: Circuit, prep_b: Circuit) -> Circuit:
    """Ancilla 0, register A on ``1..n``, register B on ``n+1..2n``."""
    n = _check_pair(prep_a, prep_b)
    width = 2 * n + 1
    gates = list(prep_a.shifted(1, width).gates) + list(prep_b.shifted(n + 1, width).gates)
    gates.append(Gate("H", (0,)))
    gates.extend(Gate("CSWAP", (0, 1 + i, 1 + n + i)) for i in range(n))
    gates.append(Gate("H", (0,)))
    return Circuit(width, tuple(gates))


def destructive_swap_test_circuit(prep_a: Circuit, prep_b: Circuit) -> Circuit:
    """Register A on ``0..n-1``, B on ``n..2n-1``; Bell-basis rotation on each pair."""
    n = _check_pair(prep_a, prep_b)
    width = 2 * n
    gates = list(prep_a.shifted(0, width).gates) + list(prep_b.shifted(n, width).gates)
    for i in range(n):
        gates.append(Gate("CNOT", (i, n + i)))
        gates.append(Gate("H", (i,)))
    return Circuit(width, tuple(gates))


def transition_amplitude_circuit(prep_a: Circuit, prep_b: Circuit) -> Circuit:
    """``prep_b`` followed by the inverse of ``prep_a``; overlap is P(all zeros)."""
    _check_pair(prep_a, prep_b)
    return compose(prep_b, prep_a.inverse())


def swap_post_process(hist: ShotHistogram) -> OverlapEstimate:
    """Overlap ``2 (P(0) - 1/2)`` from the ancilla (qubit 0) outcomes."""
    if hist.shots < 1 or not hist.counts:
        raise ValueError("empty histogram")
    zeros = sum(c for key, c in hist.counts.items() if key[0] == "0")
    return OverlapEstimate(2 * (zeros / hist.shots - 0.5), hist.shots, OverlapMethod.swap_test)


def destructive_post_process(hist: ShotHistogram, n: int) -> OverlapEstimate:
    """Average of ``prod_i (-1)^(a_i b_i)`` over shots, A bits first then B bits."""
    if hist.shots < 1 or not hist.counts:
        raise ValueError("empty histogram")
    total = 0
    for key, c in hist.counts.items():
        if len(key) != 2 * n:
            raise ValueError(f"outcome {key!r} is not {2 * n} bits")
        parity = sum(key[i] == "1" and key[n + i] == "1" for i in range(n)) & 1
        total += -c if parity else c
    return OverlapEstimate(total / hist.shots, hist.shots, OverlapMethod.destructive_swap)


def transition_post_process(hist: ShotHistogram) -> OverlapEstimate:
    if hist.shots < 1 or not hist.counts:
        raise ValueError("empty histogram")
    width = len(next(iter(hist.counts)))
    value = hist.counts.get("0" * width, 0) / hist.shots
    return OverlapEstimate(value, hist.shots, OverlapMethod.transition_amplitude)


@lru_cache(maxsize=None)
def _observable(method: OverlapMethod, width: int) -> np.ndarray:
    """Per-outcome value whose mean is the overlap estimate."""
    idx = np.arange(2**width)
    if method is OverlapMethod.swap_test:
        return 1.0 - 2.0 * (idx & 1)
    if method is OverlapMethod.destructive_swap:
        n = width // 2
        both = idx & (idx >> n) & ((1 << n) - 1)
        return 1.0 - 2.0 * (np.bitwise_count(both).astype(np.int64) & 1)
    return (idx == 0).astype(float)


def overlap_circuit(method: OverlapMethod | str, prep_a: Circuit, prep_b: Circuit) -> Circuit:
    method = OverlapMethod.parse(method)
    builder = {
        OverlapMethod.swap_test: swap_test_circuit,
        OverlapMethod.destructive_swap: destructive_swap_test_circuit,
        OverlapMethod.transition_amplitude: transition_amplitude_circuit,
    }[method]
    return builder(prep_a, prep_b)


def estimate_overlap(
    method: OverlapMethod | str,
    prep_a: Circuit,
    prep_b: Circuit,
    shots: int,
    backend: Backend | str | None = None,
    rng=None,
) -> OverlapEstimate:
    """Estimate ``|<a|b>|^2``; ``shots == 0`` evaluates the estimator analytically."""
    method = OverlapMethod.parse(method)
    backend = as_backend(backend)
    circuit = overlap_circuit(method, prep_a, prep_b)
    if circuit.n > backend.max_qubits:
        raise ValueError(f"{method.name} needs {circuit.n} qubits, backend allows {backend.max_qubits}")
    state = run(circuit, backend)
    obs = _observable(method, circuit.n)
    if shots == 0:
        probs = state.probabilities()
        return OverlapEstimate(float(probs @ obs / probs.sum()), 0, method)
    counts = _sample_array(state, shots, rng)
    return OverlapEstimate(float(counts @ obs) / shots, shots, method)
