"""Variational quantum deflation: VQE energy plus overlap penalties against found states."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bcs import gap_from_spectrum
from .circuit import Circuit, bind_parameters
from .optimizers import CobylaConfig, OptimizationError, OptimizerConfig, minimize
from .overlap import OverlapMethod, estimate_overlap
from .pauli import PauliSum, beta_bound
from .simulator import Backend, as_backend, expectation_sampled

DEFAULT_SHOTS = 10_000
# beta_bound can equal the spectral spread; equality leaves a flat two-level landscape
BETA_MARGIN = 0.1


@dataclass
class DeflationState:
    """Parameters and energies of the levels found so far, with their penalty weights."""

    found: list[tuple[np.ndarray, float]] = field(default_factory=list)
    betas: list[float] = field(default_factory=list)

    @property
    def level(self) -> int:
        return len(self.found)

    def add(self, params: np.ndarray, energy: float, beta: float) -> None:
        if beta <= 0:
            raise ValueError("beta must be positive")
        self.found.append((np.asarray(params, dtype=float), float(energy)))
        self.betas.append(float(beta))


@dataclass
class SpectrumResult:
    energies: list[float]
    params: list[np.ndarray]
    evaluations: list[int]
    seed: int | None

    def sorted_energies(self) -> np.ndarray:
        return np.sort(np.asarray(self.energies, dtype=float))


class DeflationError(RuntimeError):
    """An optimizer failed at some level; ``partial`` holds the levels found before it."""

    def __init__(self, message: str, partial: SpectrumResult):
        super().__init__(message)
        self.partial = partial


def vqe_cost(theta, H: PauliSum, ansatz: Circuit, shots: int = DEFAULT_SHOTS, backend=None, rng=None) -> float:
    """Energy of the ansatz state at ``theta`` (sampled, or exact when ``shots == 0``)."""
    bound = bind_parameters(ansatz, theta)
    return expectation_sampled(bound, H, shots, backend, rng)


def vqd_cost(
    theta,
    H: PauliSum,
    ansatz: Circuit,
    deflation: DeflationState,
    overlap_method: OverlapMethod | str = OverlapMethod.transition_amplitude,
    shots: int = DEFAULT_SHOTS,
    backend=None,
    rng=None,
) -> float:
    """Energy plus ``sum_i beta_i |<psi(theta)|psi_i>|^2`` over the found levels."""
    rng = np.random.default_rng(rng)
    backend = as_backend(backend)
    bound = bind_parameters(ansatz, theta)
    cost = expectation_sampled(bound, H, shots, backend, rng)
    for (params, _), beta in zip(deflation.found, deflation.betas):
        prev = bind_parameters(ansatz, params)
        est = estimate_overlap(overlap_method, bound, prev, shots, backend, rng)
        cost += beta * est.clamped
    return cost


def solve_spectrum(
    H: PauliSum,
    ansatz: Circuit,
    optimizer: OptimizerConfig = CobylaConfig(),
    k_states: int = 2,
    shots: int = DEFAULT_SHOTS,
    backend: Backend | str | None = None,
    overlap_method: OverlapMethod | str = OverlapMethod.transition_amplitude,
    rng_seed: int | None = 0,
    beta: float | None = None,
) -> SpectrumResult:
    """Find ``k_states`` levels one after another, each from a uniform random start.

    Reported energies exclude the penalty: they are fresh VQE evaluations at the
    optimized parameters.  The default penalty weight is ``beta_bound(H)`` raised
    by ``BETA_MARGIN`` so that it strictly exceeds the spectral spread.
    """
    if k_states < 1 or k_states > 2**H.n:
        raise ValueError(f"k_states must be in [1, {2**H.n}]")
    backend = as_backend(backend)
    method = OverlapMethod.parse(overlap_method)
    beta = (1 + BETA_MARGIN) * beta_bound(H) if beta is None else float(beta)
    init_seq, sample_seq, opt_seq = np.random.SeedSequence(rng_seed).spawn(3)
    init_rng = np.random.default_rng(init_seq)
    sample_rng = np.random.default_rng(sample_seq)
    opt_rng = np.random.default_rng(opt_seq)

    deflation = DeflationState()
    result = SpectrumResult([], [], [], rng_seed)
    num_params = ansatz.num_parameters
    for _ in range(k_states):
        x0 = init_rng.uniform(0, 2 * np.pi, num_params)

        def cost(theta):
            return vqd_cost(theta, H, ansatz, deflation, method, shots, backend, sample_rng)

        try:
            opt = minimize(cost, x0, optimizer, opt_rng)
        except OptimizationError as exc:
            raise DeflationError(f"level {deflation.level}: {exc}", result) from exc
        energy = vqe_cost(opt.best_params, H, ansatz, shots, backend, sample_rng)
        deflation.add(opt.best_params, energy, beta)
        result.energies.append(energy)
        result.params.append(opt.best_params)
        result.evaluations.append(opt.evaluations)
    return result


@dataclass
class RunRecord:
    run: int
    seed: int
    energies: list[float]
    gap: float
    wall_time: float
    evaluations: list[int]
    config_hash: str = ""


@dataclass
class GapEstimate:
    mean: float
    std: float
    records: list[RunRecord]

    @property
    def gaps(self) -> np.ndarray:
        return np.array([r.gap for r in self.records])


def run_seed(seed: int, run: int) -> int:
    """Seed of run ``run`` derived from a top-level seed."""
    return seed + run


def gap_run(
    H: PauliSum, gap_index: int, run: int, seed: int = 0, offset: float = 0.0, **config
) -> RunRecord:
    """One deflation run solving ``gap_index + 2`` levels and its sorted-level gap."""
    run_s = run_seed(seed, run)
    start = time.perf_counter()
    res = solve_spectrum(H, k_states=gap_index + 2, rng_seed=run_s, **config)
    energies = [e + offset for e in res.energies]
    gap = gap_from_spectrum(np.sort(energies), gap_index)
    return RunRecord(run, run_s, energies, gap, time.perf_counter() - start, res.evaluations)


def summarize(records: list[RunRecord]) -> GapEstimate:
    if len(records) < 2:
        raise RuntimeError(f"need at least two successful runs, got {len(records)}")
    gaps = np.array([rec.gap for rec in records])
    return GapEstimate(float(gaps.mean()), float(gaps.std(ddof=1)), list(records))


def estimate_gap(H: PauliSum, gap_index: int, runs: int, seed: int = 0, **config) -> GapEstimate:
    """Mean and sample standard deviation of the gap over independently seeded runs.

    ``config`` is forwarded to :func:`solve_spectrum` (ansatz, optimizer, shots, ...).
    Failed runs are dropped; at least two must succeed.
    """
    if runs < 2:
        raise ValueError("need at least two runs for a standard deviation")
    records = []
    for r in range(runs):
        try:
            records.append(gap_run(H, gap_index, r, seed, **config))
        except DeflationError:
            continue
    return summarize(records)
