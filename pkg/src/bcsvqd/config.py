"""Flat ``key = value`` experiment configuration.

Lists are comma separated.  Lines starting with ``#`` are comments.  Every key
can also be given on the command line as ``--key value``.  Times (``t1``,
``t2``, ``tg_1q``, ``tg_2q``) are in seconds.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .circuit import CouplingGraph, line_graph
from .noise import NoiseModel
from .optimizers import CobylaConfig, SpsaConfig
from .overlap import OverlapMethod
from .simulator import IDEAL, Backend


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _names(text: str) -> tuple[str, ...]:
    return tuple(x.strip().lower() for x in text.split(",") if x.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    epsilons: tuple[float, ...] = (3.0, 3.0)
    v: tuple[float, ...] = (1.0,)
    depth: tuple[int, ...] = (3,)
    topology: str = "line"
    backend: str = "ideal"
    t1: float = 50e-6
    t2: float = 70e-6
    tg_1q: float = 50e-9
    tg_2q: float = 300e-9
    temperature: float = 0.0
    qubit_frequency: float = 5e9
    optimizer: tuple[str, ...] = ("cobyla",)
    spsa_c: float = 0.7
    spsa_a: str = "calibrate"
    spsa_alpha: float = 0.602
    spsa_gamma: float = 0.101
    spsa_max_iter: int = 300
    spsa_avg_tail: int = 25
    cobyla_rho_init: float = 1.0
    cobyla_rho_end: float = 1e-4
    cobyla_max_iter: int = 500
    shots: int = 10_000
    runs: int = 10
    gap: int = 1
    k_states: int = 0  # 0 means gap + 2
    overlap: str = "transition"
    offset: float = 0.0
    seed: int = 0
    workers: int = field(default=1, metadata={"hashed": False})

    def __post_init__(self):
        if not self.epsilons or not self.v or not self.depth or not self.optimizer:
            raise ConfigError("epsilons, v, depth and optimizer must be non-empty")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.shots < 0:
            raise ConfigError("shots must be >= 1, or 0 for exact expectations")
        if self.backend not in ("ideal", "noisy"):
            raise ConfigError(f"backend must be ideal or noisy, got {self.backend!r}")
        if self.topology != "line":
            raise ConfigError(f"unsupported ansatz topology {self.topology!r}")
        for name in self.optimizer:
            if name not in ("cobyla", "spsa"):
                raise ConfigError(f"unknown optimizer {name!r}")
        if min(self.depth) < 1 or self.gap < 0:
            raise ConfigError("depth must be >= 1 and gap >= 0")
        try:
            OverlapMethod.parse(self.overlap)
            self.optimizer_config("cobyla")
            self.optimizer_config("spsa")
            self.noise_model()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def n(self) -> int:
        return len(self.epsilons)

    @property
    def levels(self) -> int:
        return self.k_states or self.gap + 2

    def graph(self) -> CouplingGraph:
        return line_graph(self.n)

    def noise_model(self) -> NoiseModel:
        return NoiseModel(self.t1, self.t2, self.tg_1q, self.tg_2q, None, self.temperature, self.qubit_frequency)

    def make_backend(self) -> Backend:
        return Backend(self.noise_model()) if self.backend == "noisy" else IDEAL

    def energy_offset(self) -> float:
        return self.offset if self.backend == "noisy" else 0.0

    def optimizer_config(self, name: str):
        if name == "cobyla":
            return CobylaConfig(self.cobyla_rho_init, self.cobyla_rho_end, self.cobyla_max_iter)
        a = self.spsa_a if self.spsa_a == "calibrate" else float(self.spsa_a)
        return SpsaConfig(self.spsa_c, a, self.spsa_alpha, self.spsa_gamma, self.spsa_max_iter, self.spsa_avg_tail)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(repr(x) if isinstance(x, float) else str(x) for x in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        hashed = [
            line for line, f in zip(self.to_text().splitlines(), dataclasses.fields(self))
            if f.metadata.get("hashed", True)
        ]
        return hashlib.sha256("\n".join(hashed).encode()).hexdigest()[:12]

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def parse_value(key: str, text: str):
    kind = FIELD_TYPES.get(key)
    if kind is None:
        raise ConfigError(f"unknown config key {key!r}")
    text = text.strip()
    try:
        if kind == "tuple[float, ...]":
            return _floats(text)
        if kind == "tuple[int, ...]":
            return _ints(text)
        if kind == "tuple[str, ...]":
            return _names(text)
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        return text.lower()
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc


def parse_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        values[key] = parse_value(key, value)
    return values


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> ExperimentConfig:
    values = parse_text(Path(path).read_text()) if path else {}
    values.update(overrides or {})
    return ExperimentConfig(**values)
