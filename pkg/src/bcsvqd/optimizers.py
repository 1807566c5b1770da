"""SPSA and an unconstrained linear-interpolation trust-region optimizer (COBYLA core)."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

Objective = Callable[[np.ndarray], float]


class OptimizationError(RuntimeError):
    """Raised when the objective returns a non-finite value."""


@dataclass(frozen=True)
class SpsaConfig:
    c: float = 0.7
    a: float | str = "calibrate"
    alpha: float = 0.602
    gamma: float = 0.101
    max_iter: int = 300
    avg_tail: int = 25
    calibration_samples: int = 25
    rng_seed: int | None = None

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")
        if not (0 < self.alpha <= 1 and 0 < self.gamma <= 1):
            raise ValueError("alpha and gamma must lie in (0, 1]")
        if not 1 <= self.avg_tail <= self.max_iter:
            raise ValueError("avg_tail must be in [1, max_iter]")
        if self.a != "calibrate" and float(self.a) <= 0:
            raise ValueError("a must be positive or 'calibrate'")


@dataclass(frozen=True)
class CobylaConfig:
    rho_init: float = 1.0
    rho_end: float = 1e-4
    max_iter: int = 500

    def __post_init__(self):
        if not self.rho_init > self.rho_end > 0:
            raise ValueError("need rho_init > rho_end > 0")


OptimizerConfig = Union[SpsaConfig, CobylaConfig]


@dataclass
class OptResult:
    best_params: np.ndarray
    best_value: float
    iterations: int
    evaluations: int
    converged: bool = True
    # SPSA: (mean of the two probes, a_i, c_i); COBYLA: (best value, rho)
    trace: list[tuple[float, ...]] = field(default_factory=list)


def _checked(f: Objective, x: np.ndarray) -> float:
    value = float(f(x))
    if not math.isfinite(value):
        raise OptimizationError(f"objective returned {value} at {x.tolist()}")
    return value


def _rademacher(rng: np.random.Generator, n: int) -> np.ndarray:
    return 2.0 * rng.integers(0, 2, size=n) - 1.0


def spsa_calibrate_a(f: Objective, x0, c: float, n_samples: int = 25, rng=None) -> float:
    """Learning-rate scale ``a = (2 pi / 5) c / <|f(x + c D) - f(x - c D)|>``.

    Falls back to ``2 pi / 10`` when the average difference vanishes.
    """
    if c <= 0 or n_samples < 1:
        raise ValueError("need c > 0 and n_samples >= 1")
    rng = np.random.default_rng(rng)
    x0 = np.asarray(x0, dtype=float)
    diffs = []
    for _ in range(n_samples):
        delta = _rademacher(rng, x0.size)
        diffs.append(abs(_checked(f, x0 + c * delta) - _checked(f, x0 - c * delta)))
    mean = float(np.mean(diffs))
    if not mean > 1e-12:
        return 2 * math.pi / 10
    return 2 * math.pi / 5 * c / mean


def spsa_minimize(f: Objective, x0, cfg: SpsaConfig = SpsaConfig(), rng=None) -> OptResult:
    """Minimize with simultaneous-perturbation gradient estimates.

    The returned parameters are the mean of the last ``avg_tail`` iterates.
    ``best_value`` is the lowest objective value seen during the run.
    """
    rng = np.random.default_rng(cfg.rng_seed if rng is None else rng)
    x = np.array(x0, dtype=float)
    if x.size < 1:
        raise ValueError("need at least one parameter")
    evaluations = 0
    if cfg.a == "calibrate":
        a = spsa_calibrate_a(f, x, cfg.c, cfg.calibration_samples, rng)
        evaluations += 2 * cfg.calibration_samples
    else:
        a = float(cfg.a)
    tail: deque[np.ndarray] = deque(maxlen=cfg.avg_tail)
    best_value = math.inf
    trace = []
    for i in range(1, cfg.max_iter + 1):
        c_i = cfg.c / i**cfg.gamma
        a_i = a / i**cfg.alpha
        delta = _rademacher(rng, x.size)
        f_plus = _checked(f, x + c_i * delta)
        f_minus = _checked(f, x - c_i * delta)
        evaluations += 2
        grad = (f_plus - f_minus) / (2 * c_i * delta)
        x = x - a_i * grad
        tail.append(x)
        best_value = min(best_value, f_plus, f_minus)
        trace.append((0.5 * (f_plus + f_minus), a_i, c_i))
    return OptResult(np.mean(tail, axis=0), best_value, cfg.max_iter, evaluations, True, trace)


def _null_direction(rows: np.ndarray, n: int) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.eye(n)[0]
    _, _, vt = np.linalg.svd(rows)
    return vt[-1]


def cobyla_minimize(f: Objective, x0, cfg: CobylaConfig = CobylaConfig()) -> OptResult:
    """Linear-interpolation trust-region minimization on a simplex of ``n + 1`` points.

    Each iteration either improves the simplex geometry or steps to the minimizer
    of the interpolating linear model within radius ``rho`` of the best vertex.
    ``rho`` halves whenever such a step fails to lower the best value.
    """
    x0 = np.array(x0, dtype=float)
    n = x0.size
    if n < 1:
        raise ValueError("need at least one parameter")
    rho = cfg.rho_init
    sim = np.vstack([x0, x0 + rho * np.eye(n)])
    fv = np.array([_checked(f, x) for x in sim])
    evaluations = n + 1
    iterations = 0
    trace = []
    converged = False
    while True:
        if rho < cfg.rho_end:
            converged = True
            break
        if iterations >= cfg.max_iter:
            break
        iterations += 1
        b = int(np.argmin(fv))
        others = [j for j in range(n + 1) if j != b]
        offsets = sim[others] - sim[b]
        dist = np.linalg.norm(offsets, axis=1)
        sv = np.linalg.svd(offsets, compute_uv=False)

        replace = None
        if dist.max() > 2 * rho:
            replace = int(np.argmax(dist))
        elif sv[-1] < 0.1 * rho:
            scores = [
                np.linalg.svd(np.delete(offsets, k, axis=0), compute_uv=False)[-1] if n > 1 else 1.0
                for k in range(n)
            ]
            replace = int(np.argmax(scores))
        if replace is not None:
            rest = np.delete(offsets, replace, axis=0)
            u = _null_direction(rest, n)
            if sv[-1] > 1e-14 * max(rho, 1.0):
                grad = np.linalg.solve(offsets, fv[others] - fv[b])
                if u @ grad > 0:
                    u = -u
            x_new = sim[b] + rho * u
            j = others[replace]
            sim[j] = x_new
            fv[j] = _checked(f, x_new)
            evaluations += 1
            trace.append((float(fv.min()), rho))
            continue

        grad = np.linalg.solve(offsets, fv[others] - fv[b])
        norm = np.linalg.norm(grad)
        if norm == 0.0:
            rho /= 2
            trace.append((float(fv[b]), rho))
            continue
        x_new = sim[b] - rho * grad / norm
        f_new = _checked(f, x_new)
        evaluations += 1
        worst = int(np.argmax(fv))
        if f_new < fv[b]:
            sim[worst], fv[worst] = x_new, f_new
        else:
            if f_new < fv[worst]:
                sim[worst], fv[worst] = x_new, f_new
            rho /= 2
        trace.append((float(fv.min()), rho))
    b = int(np.argmin(fv))
    return OptResult(sim[b].copy(), float(fv[b]), iterations, evaluations, converged, trace)


def minimize(f: Objective, x0, config: OptimizerConfig, rng=None) -> OptResult:
    if isinstance(config, SpsaConfig):
        return spsa_minimize(f, x0, config, rng)
    if isinstance(config, CobylaConfig):
        return cobyla_minimize(f, x0, config)
    raise TypeError(f"unsupported optimizer config {config!r}")
