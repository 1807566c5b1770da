"""Gate-level circuits, the hardware-efficient ansatz and coupling graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

PARAMETRIZED = frozenset({"RY", "RZ"})
ARITY = {"RY": 1, "RZ": 1, "H": 1, "X": 1, "CNOT": 2, "SWAP": 2, "CSWAP": 3}


class UnboundCircuitError(ValueError):
    """Raised when an operation needs concrete angles but slots are still open."""


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    # index into the owning circuit's parameter vector, kept after binding
    param: int | None = None

    def __post_init__(self):
        if self.kind not in ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) != ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ARITY[self.kind]} operands, got {qubits}")
        if len(set(qubits)) != len(qubits) or min(qubits) < 0:
            raise ValueError(f"bad operands {qubits}")
        if self.kind in PARAMETRIZED:
            if self.angle is None and self.param is None:
                raise ValueError(f"{self.kind} needs an angle or a parameter slot")
        elif self.angle is not None or self.param is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def bound(self) -> bool:
        return self.kind not in PARAMETRIZED or self.angle is not None

    def inverse(self) -> "Gate":
        if not self.bound:
            raise UnboundCircuitError("cannot invert an unbound gate")
        if self.kind in PARAMETRIZED:
            return Gate(self.kind, self.qubits, -self.angle)
        return Gate(self.kind, self.qubits)

    def to_text(self) -> str:
        ops = " ".join(str(q) for q in self.qubits)
        if self.kind not in PARAMETRIZED:
            return f"{self.kind} {ops}"
        slot = "" if self.param is None else f" theta[{self.param}]"
        if self.angle is None:
            return f"{self.kind} {ops}{slot}"
        return f"{self.kind} {ops} {self.angle!r}{slot}"


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n:
                raise ValueError(f"gate {g.to_text()} outside {self.n} qubits")

    @property
    def param_slots(self) -> list[int]:
        """Gate indices holding unbound angles, in binding order."""
        slots = [(g.param, i) for i, g in enumerate(self.gates) if not g.bound]
        return [i for _, i in sorted(slots)]

    @property
    def num_parameters(self) -> int:
        return len(self.param_slots)

    @property
    def is_bound(self) -> bool:
        return all(g.bound for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def append(self, *gates: Gate) -> "Circuit":
        return Circuit(self.n, self.gates + tuple(gates))

    def require_bound(self) -> None:
        if not self.is_bound:
            raise UnboundCircuitError(f"circuit has {self.num_parameters} unbound parameters")

    def inverse(self) -> "Circuit":
        self.require_bound()
        return Circuit(self.n, tuple(g.inverse() for g in reversed(self.gates)))

    def shifted(self, offset: int, n: int) -> "Circuit":
        """Relabel qubit ``q`` as ``q + offset`` inside a wider ``n``-qubit register."""
        return Circuit(n, tuple(replace(g, qubits=tuple(q + offset for q in g.qubits)) for g in self.gates))

    def to_text(self) -> str:
        return "\n".join([f"qubits {self.n}"] + [g.to_text() for g in self.gates])

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or lines[0][0] != "qubits":
            raise ValueError("missing 'qubits' header")
        gates = []
        for kind, *rest in lines[1:]:
            if kind not in ARITY:
                raise ValueError(f"unknown gate kind {kind!r}")
            ops, extra = tuple(map(int, rest[: ARITY[kind]])), rest[ARITY[kind] :]
            angle = param = None
            for token in extra:
                if token.startswith("theta["):
                    param = int(token[6:-1])
                else:
                    angle = float(token)
            gates.append(Gate(kind, ops, angle, param))
        return cls(int(lines[0][1]), tuple(gates))


def compose(first: Circuit, second: Circuit) -> Circuit:
    """``first`` followed by ``second`` on the same register."""
    if first.n != second.n:
        raise ValueError(f"register sizes differ: {first.n} vs {second.n}")
    return Circuit(first.n, first.gates + second.gates)


def bind_parameters(circuit: Circuit, theta: Sequence[float]) -> Circuit:
    """Return a copy with every open slot filled from ``theta`` (slot order)."""
    theta = np.asarray(theta, dtype=float).ravel()
    slots = circuit.param_slots
    if theta.size != len(slots):
        raise ValueError(f"expected {len(slots)} parameters, got {theta.size}")
    gates = list(circuit.gates)
    for value, idx in zip(theta, slots):
        gates[idx] = replace(gates[idx], angle=float(value))
    return Circuit(circuit.n, tuple(gates))


def unbind(circuit: Circuit) -> Circuit:
    """Strip the angles of every gate that came from a parameter slot."""
    gates = tuple(replace(g, angle=None) if g.param is not None else g for g in circuit.gates)
    return Circuit(circuit.n, gates)


@dataclass(frozen=True)
class CouplingGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop on node {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a}, {b}) outside {self.n} nodes")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        queue = deque([0])
        while queue:
            for w in adj[queue.popleft()]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n


def line_graph(n: int) -> CouplingGraph:
    return CouplingGraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def ladder_graph(k: int) -> CouplingGraph:
    """Two rails of ``k`` nodes with rungs: rail A is ``0..k-1``, rail B is ``k..2k-1``."""
    edges = {(i, i + 1) for i in range(k - 1)}
    edges |= {(k + i, k + i + 1) for i in range(k - 1)}
    edges |= {(i, k + i) for i in range(k)}
    return CouplingGraph(2 * k, frozenset(edges))


def hub_ladder_graph(k: int, hub: bool = True) -> CouplingGraph:
    """Ladder on nodes ``1..2k`` plus an ancilla at node 0.

    With ``hub`` the ancilla is adjacent to every ladder node; without it the
    ancilla is isolated.
    """
    base = ladder_graph(k)
    edges = {(a + 1, b + 1) for a, b in base.edges}
    if hub:
        edges |= {(0, v) for v in range(1, 2 * k + 1)}
    return CouplingGraph(2 * k + 1, frozenset(edges))


def build_hardware_efficient_ansatz(n: int, depth: int, graph: CouplingGraph | None = None) -> Circuit:
    """``depth`` blocks of per-qubit RY, RZ rotations followed by CNOTs on every edge.

    The circuit has ``2 * n * depth`` open parameter slots.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    graph = line_graph(n) if graph is None else graph
    if graph.n != n:
        raise ValueError(f"graph has {graph.n} nodes for {n} qubits")
    if not graph.is_connected():
        raise ValueError("coupling graph is disconnected")
    gates = []
    slot = 0
    for _ in range(depth):
        for q in range(n):
            gates.append(Gate("RY", (q,), param=slot))
            gates.append(Gate("RZ", (q,), param=slot + 1))
            slot += 2
        gates.extend(Gate("CNOT", edge) for edge in graph.sorted_edges())
    return Circuit(n, tuple(gates))


def check_topology(circuit: Circuit, graph: CouplingGraph) -> list[tuple[int, tuple[int, int]]]:
    """List ``(gate index, operand pair)`` for every multi-qubit interaction off the graph."""
    if graph.n < circuit.n:
        raise ValueError(f"graph has {graph.n} nodes, circuit needs {circuit.n}")
    violations = []
    for idx, g in enumerate(circuit.gates):
        qs = g.qubits
        pairs = [(qs[i], qs[j]) for i in range(len(qs)) for j in range(i + 1, len(qs))]
        violations.extend((idx, p) for p in pairs if not graph.has_edge(*p))
    return violations


def append_basis_rotation(circuit: Circuit, basis: str) -> Circuit:
    """Rotate each qubit so that a Z measurement reads out the requested basis."""
    circuit.require_bound()
    return circuit.append(*basis_rotation_gates(basis))


def basis_rotation_gates(basis: Iterable[str]) -> list[Gate]:
    gates = []
    for q, b in enumerate(basis):
        if b == "X":
            gates.append(Gate("H", (q,)))
        elif b == "Y":
            gates.append(Gate("RZ", (q,), -np.pi / 2))
            gates.append(Gate("H", (q,)))
        elif b != "Z":
            raise ValueError(f"basis label must be X, Y or Z, got {b!r}")
    return gates
