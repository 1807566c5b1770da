"""Thermal-relaxation noise for a single qubit.

Two regimes are covered.  For ``T2 <= T1`` the channel is a mixture of identity,
a Z flip and a reset to ``|0>``.  For ``T1 < T2 <= 2*T1`` it has no such mixture
form and is built from its Choi matrix instead.  Only the zero-temperature
limit (no excited-state population) is supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import constants
from scipy.special import expit

EIG_CUTOFF = 1e-12
PSD_TOLERANCE = 1e-9

I2 = np.eye(2, dtype=complex)
Z2 = np.diag([1.0, -1.0]).astype(complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)  # |0><0|
LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


class ChannelError(ValueError):
    """Raised for parameters or matrices that do not describe a CPTP map."""


def excited_population(temperature: float, qubit_frequency: float) -> float:
    """Thermal excited-state population ``1 / (1 + exp(2 h f / (k_B T)))``."""
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if qubit_frequency <= 0:
        raise ValueError("qubit frequency must be > 0")
    if temperature == 0:
        return 0.0
    ratio = 2 * constants.h * qubit_frequency / (constants.k * temperature)
    return float(expit(-ratio))


@dataclass(frozen=True)
class RelaxationParams:
    """Relaxation times and gate duration share one time unit."""

    T1: float
    T2: float
    Tg: float
    temperature: float = 0.0
    qubit_frequency: float = 5e9

    def __post_init__(self):
        if self.T1 <= 0 or self.T2 <= 0:
            raise ChannelError("T1 and T2 must be positive")
        if self.Tg < 0:
            raise ChannelError("gate time must be non-negative")
        if self.T2 > 2 * self.T1:
            raise ChannelError(f"T2={self.T2} > 2*T1={2 * self.T1} is not completely positive")

    @property
    def eps_t1(self) -> float:
        return float(np.exp(-self.Tg / self.T1))

    @property
    def eps_t2(self) -> float:
        return float(np.exp(-self.Tg / self.T2))

    @property
    def p_reset(self) -> float:
        return 1.0 - self.eps_t1


def thermal_choi(p: RelaxationParams) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) N(|i><j|)``, input index first."""
    e2, pr = p.eps_t2, p.p_reset
    return np.array(
        [
            [1, 0, 0, e2],
            [0, 0, 0, 0],
            [0, 0, pr, 0],
            [e2, 0, 0, 1 - pr],
        ],
        dtype=complex,
    )


def thermal_relaxation_channel(p: RelaxationParams) -> list[np.ndarray]:
    """Kraus operators of the relaxation channel over one gate duration."""
    if excited_population(p.temperature, p.qubit_frequency) > PSD_TOLERANCE:
        raise NotImplementedError("only the T ~ 0 channel (no excited population) is supported")
    if p.T2 <= p.T1:
        p_reset = p.p_reset
        p_z = 0.5 * (1 - p_reset) * (1 - p.eps_t2 / p.eps_t1)
        p_i = 1 - p_z - p_reset
        ops = [np.sqrt(p_i) * I2, np.sqrt(p_z) * Z2, np.sqrt(p_reset) * P0, np.sqrt(p_reset) * LOWER]
        return [k for k in ops if np.any(k)]
    return choi_to_kraus(thermal_choi(p))


def choi_to_kraus(choi: np.ndarray) -> list[np.ndarray]:
    """Kraus operators from the spectral decomposition of a single-qubit Choi matrix."""
    choi = np.asarray(choi, dtype=complex)
    if choi.shape != (4, 4):
        raise ValueError("expected a 4x4 Choi matrix")
    if np.max(np.abs(choi - choi.conj().T)) > 1e-10:
        raise ChannelError("Choi matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(choi)
    if vals.min() < -PSD_TOLERANCE:
        raise ChannelError(f"Choi matrix has eigenvalue {vals.min():.3e} < 0")
    vals = np.clip(vals, 0.0, None)
    # Choi index is 2*input + output, so column-major reshape gives K[output, input]
    return [
        np.sqrt(lam) * vecs[:, k].reshape((2, 2), order="F")
        for k, lam in enumerate(vals)
        if lam > EIG_CUTOFF
    ]


def kraus_to_choi(kraus: list[np.ndarray]) -> np.ndarray:
    choi = np.zeros((4, 4), dtype=complex)
    for k in kraus:
        v = np.asarray(k).reshape(4, order="F")
        choi += np.outer(v, v.conj())
    return choi


def validate_cptp(kraus: list[np.ndarray]) -> float:
    """Largest entry of ``|sum K^dag K - I|``."""
    if not kraus:
        raise ValueError("empty Kraus set")
    dim = kraus[0].shape[0]
    total = sum(k.conj().T @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(dim))))


def apply_channel(kraus: list[np.ndarray], rho: np.ndarray) -> np.ndarray:
    """Apply a channel to a density matrix of matching dimension."""
    return sum(k @ rho @ k.conj().T for k in kraus)


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate-class relaxation channels.

    Every gate is followed by the relaxation channel on each of its operand
    qubits, using the duration of its class (1, 2 or 3 operands).  Defaults are
    representative transmon numbers in seconds, not measured device values.
    """

    T1: float = 50e-6
    T2: float = 70e-6
    tg_1q: float = 50e-9
    tg_2q: float = 300e-9
    tg_3q: float | None = None
    temperature: float = 0.0
    qubit_frequency: float = 5e9
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for arity in (1, 2, 3):
            RelaxationParams(self.T1, self.T2, self.duration(arity), self.temperature, self.qubit_frequency)

    def duration(self, arity: int) -> float:
        if arity == 1:
            return self.tg_1q
        if arity == 2:
            return self.tg_2q
        return self.tg_2q if self.tg_3q is None else self.tg_3q

    def channel(self, arity: int) -> list[np.ndarray]:
        if arity not in self._cache:
            params = RelaxationParams(
                self.T1, self.T2, self.duration(arity), self.temperature, self.qubit_frequency
            )
            kraus = thermal_relaxation_channel(params)
            if validate_cptp(kraus) > PSD_TOLERANCE:
                raise ChannelError("relaxation channel failed the completeness check")
            self._cache[arity] = kraus
        return self._cache[arity]
