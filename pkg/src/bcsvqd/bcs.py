"""Constant-coupling BCS pairing model in its qubit form.

Pair level ``m`` (occupied or empty) maps to qubit ``m``.  The qubit image is

    H = sum_m (eps_m / 2) Z_m + (V / 2) sum_{m<l} (X_m X_l + Y_m Y_l)

and shares its spectrum with the fermionic pairing Hamiltonian.  Because
``Z|0> = +|0>``, the all-ones string is the V=0 ground state when every
``eps_m > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .pauli import PauliSum


@dataclass(frozen=True)
class BcsParams:
    epsilons: tuple[float, ...]
    V: float

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise ValueError("need at least one pair level")
        if not (np.all(np.isfinite(eps)) and np.isfinite(self.V)):
            raise ValueError("parameters must be finite")
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "V", float(self.V))

    @property
    def n(self) -> int:
        return len(self.epsilons)


def _label(n: int, ops: dict[int, str]) -> str:
    return "".join(ops.get(q, "I") for q in range(n))


def build_qubit_hamiltonian(params: BcsParams) -> PauliSum:
    n = params.n
    terms = [(e / 2, _label(n, {m: "Z"})) for m, e in enumerate(params.epsilons)]
    for m, l in combinations(range(n), 2):
        terms.append((params.V / 2, _label(n, {m: "X", l: "X"})))
        terms.append((params.V / 2, _label(n, {m: "Y", l: "Y"})))
    return PauliSum(terms, n=n)


def gap_from_spectrum(spectrum: Sequence[float], n: int = 0) -> float:
    """Gap ``E_{n+1} - E_n`` of an ascending spectrum."""
    spectrum = np.asarray(spectrum, dtype=float)
    if n < 0:
        raise ValueError("gap index must be >= 0")
    if spectrum.size < n + 2:
        raise ValueError(f"gap {n} needs {n + 2} levels, got {spectrum.size}")
    if np.any(np.diff(spectrum) < 0):
        raise ValueError("spectrum must be ascending")
    return float(spectrum[n + 1] - spectrum[n])
