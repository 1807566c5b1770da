"""Weighted Pauli sums.

A Pauli string is stored as a plain label such as ``"XZI"`` where the character
at position ``q`` acts on qubit ``q``.  Qubit 0 is the least significant bit of
a basis-state index, so the dense matrix of ``"XZI"`` is ``I ⊗ Z ⊗ X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

MAX_DENSE_QUBITS = 12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionError(ValueError):
    """Raised when a dense object would exceed the qubit-count guard."""


class SpectrumError(RuntimeError):
    """Raised when the symmetric eigensolver does not converge."""


def validate_label(label: str, n: int | None = None) -> str:
    label = str(label).upper()
    if not label or any(ch not in "IXYZ" for ch in label):
        raise ValueError(f"invalid Pauli label {label!r}")
    if n is not None and len(label) != n:
        raise ValueError(f"label {label!r} has length {len(label)}, expected {n}")
    return label


def masks(label: str) -> tuple[int, int, int]:
    """Return ``(x_mask, z_mask, n_y)`` for a label.

    ``x_mask`` has a bit set where the string flips the qubit (X or Y), ``z_mask``
    where it contributes a sign (Y or Z).  ``n_y`` counts the Y factors.
    """
    x_mask = z_mask = 0
    n_y = 0
    for q, ch in enumerate(label):
        if ch in "XY":
            x_mask |= 1 << q
        if ch in "YZ":
            z_mask |= 1 << q
        if ch == "Y":
            n_y += 1
    return x_mask, z_mask, n_y


@dataclass(frozen=True)
class PauliSum:
    """Real-weighted sum of Pauli strings in canonical (sorted, merged) form."""

    n: int
    terms: tuple[tuple[float, str], ...]

    def __init__(self, terms: Iterable[tuple[float, str]] = (), n: int | None = None):
        merged: dict[str, float] = {}
        for coeff, label in terms:
            label = validate_label(label, n)
            if n is None:
                n = len(label)
            coeff = float(np.real_if_close(coeff))
            if not np.isfinite(coeff):
                raise ValueError(f"non-finite coefficient for {label}")
            merged[label] = merged.get(label, 0.0) + coeff
        if n is None or n < 1:
            raise ValueError("qubit count n must be given for an empty sum and be >= 1")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "terms", tuple((merged[k], k) for k in sorted(merged)))

    @classmethod
    def from_dict(cls, mapping: dict[str, float], n: int | None = None) -> "PauliSum":
        return cls(((c, s) for s, c in mapping.items()), n=n)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=float)

    @property
    def labels(self) -> list[str]:
        return [s for _, s in self.terms]

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n != self.n:
            raise ValueError("qubit counts differ")
        return PauliSum(self.terms + other.terms, n=self.n)

    def scaled(self, factor: float) -> "PauliSum":
        return PauliSum(((factor * c, s) for c, s in self.terms), n=self.n)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c:g}*{s}" for c, s in self.terms)


def _check_dense(n: int) -> None:
    if n > MAX_DENSE_QUBITS:
        raise DimensionError(f"{n} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}")


def string_matrix(label: str) -> np.ndarray:
    # reversed so that qubit 0 is the rightmost (least significant) factor
    return reduce(np.kron, (PAULI_MATRICES[ch] for ch in reversed(label)))


def to_matrix(op: PauliSum) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of a Pauli sum."""
    _check_dense(op.n)
    dim = 2**op.n
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, label in op.terms:
        out += coeff * string_matrix(label)
    return out


def eigenspectrum(op: PauliSum) -> np.ndarray:
    """All eigenvalues of ``op`` in ascending order."""
    mat = to_matrix(op)
    try:
        return np.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(str(exc)) from exc


def eigh(op: PauliSum) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors as columns."""
    mat = to_matrix(op)
    try:
        return np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise SpectrumError(str(exc)) from exc


@dataclass(frozen=True)
class MeasurementGroup:
    """Terms measurable together after rotating every qubit into ``basis``."""

    basis: str
    members: tuple[int, ...]


def group_qubitwise_commuting(op: PauliSum) -> list[MeasurementGroup]:
    """Greedy first-fit partition of the terms into qubit-wise commuting groups.

    Qubits that no member touches are measured in Z.
    """
    bases: list[list[str | None]] = []
    members: list[list[int]] = []
    for idx, (_, label) in enumerate(op.terms):
        for basis, group in zip(bases, members):
            if all(ch == "I" or b is None or b == ch for ch, b in zip(label, basis)):
                for q, ch in enumerate(label):
                    if ch != "I":
                        basis[q] = ch
                group.append(idx)
                break
        else:
            bases.append([None if ch == "I" else ch for ch in label])
            members.append([idx])
    return [
        MeasurementGroup("".join(b or "Z" for b in basis), tuple(group))
        for basis, group in zip(bases, members)
    ]


def beta_bound(op: PauliSum) -> float:
    """Upper bound on the spectral spread, ``2 * sum |c_i|``."""
    return float(2.0 * np.sum(np.abs(op.coeffs))) if op.terms else 0.0
