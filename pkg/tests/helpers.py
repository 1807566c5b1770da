"""Random circuits and brute-force references shared by the tests."""

from functools import reduce

import numpy as np

from bcsvqd.circuit import Circuit, Gate, bind_parameters, build_hardware_efficient_ansatz
from bcsvqd.simulator import gate_matrix

KINDS_1Q = ["RY", "RZ", "H", "X"]
KINDS_MQ = {"CNOT": 2, "SWAP": 2, "CSWAP": 3}


def random_circuit(n: int, num_gates: int, rng) -> Circuit:
    gates = []
    multi = [k for k, a in KINDS_MQ.items() if a <= n]
    for _ in range(num_gates):
        if multi and rng.random() < 0.35:
            kind = multi[rng.integers(len(multi))]
            qubits = tuple(int(q) for q in rng.choice(n, KINDS_MQ[kind], replace=False))
            gates.append(Gate(kind, qubits))
        else:
            kind = KINDS_1Q[rng.integers(4)]
            q = (int(rng.integers(n)),)
            angle = float(rng.uniform(-np.pi, np.pi)) if kind in ("RY", "RZ") else None
            gates.append(Gate(kind, q, angle))
    return Circuit(n, tuple(gates))


def random_ansatz_state(n: int, depth: int, rng) -> Circuit:
    ansatz = build_hardware_efficient_ansatz(n, depth)
    return bind_parameters(ansatz, rng.uniform(0, 2 * np.pi, ansatz.num_parameters))


def embed(gate: Gate, n: int) -> np.ndarray:
    """Full 2**n unitary of a gate, built element by element from its local matrix."""
    local = gate_matrix(gate)
    k = len(gate.qubits)
    dim = 2**n
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        # local index: first operand is the most significant bit
        loc_in = sum(((col >> q) & 1) << (k - 1 - j) for j, q in enumerate(gate.qubits))
        rest = col
        for q in gate.qubits:
            rest &= ~(1 << q)
        for loc_out in range(2**k):
            row = rest
            for j, q in enumerate(gate.qubits):
                row |= ((loc_out >> (k - 1 - j)) & 1) << q
            full[row, col] = local[loc_out, loc_in]
    return full


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    dim = 2**circuit.n
    return reduce(lambda acc, g: embed(g, circuit.n) @ acc, circuit.gates, np.eye(dim, dtype=complex))
