"""Flat ``key = value`` experiment configuration.

Grammar: one ``key = value`` pair per line; blank lines and everything after
``#`` are ignored; keys are case-sensitive.  Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import TypicalityError
from .linalg import BasisProjector, DenseEffect, DiagonalEffect, Effect, Rank1Effect, StateVector
from .montecarlo import METHODS
from .sampler import SeedSpec, haar_unitary, sample_uniform

EXPERIMENTS = (
    "concentration",
    "mean-identity",
    "reliability",
    "pair-fraction",
    "favoring",
    "quantifier-contrast",
    "bayes-flatness",
    "bayes-set",
    "gaussian-overlap",
    "mixed-vs-pure",
    "spin",
    "full-suite",
)
EFFECT_KINDS = ("rank1", "projector", "diagonal", "dense")
DENSE_MAX_DIM = 2048
# stream index reserved for objects derived from the config (random effects, POVMs)
CONFIG_STREAM = 2**40


class ConfigError(TypicalityError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    experiment: str
    d0: int = 4096
    epsilon: float = 0.05
    delta: float = 0.1
    n_samples: int = 100_000
    master_seed: int = 42
    effect: str = "rank1"
    effect_weight: float = 1.0
    effect_vector: str = "basis"
    effect_rank: int = 0  # 0 means d0 // 2
    effect_levels: tuple = (0.1, 0.3, 0.5, 0.7, 0.9)
    n_outcomes: int = 4
    n_povms: int = 5
    n_qubits: int = 10
    histogram_bins: int = 200
    method: str = "auto"
    output_dir: str = ""
    ungated: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for name in ("d0", "n_samples", "n_outcomes", "n_povms", "n_qubits"):
            if getattr(self, name) < 1:
                raise ConfigError(name, "must be a positive integer")
        if self.histogram_bins < 2:
            raise ConfigError("histogram_bins", "need at least 2 bins")
        if self.n_samples < 100:
            raise ConfigError("n_samples", "statistical claims need at least 100 samples")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError("epsilon", "must lie strictly inside (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta", "must lie strictly inside (0, 1)")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed", "must be a 64-bit unsigned integer")
        if self.effect not in EFFECT_KINDS:
            raise ConfigError("effect", f"unknown effect kind {self.effect!r}; choose from {', '.join(EFFECT_KINDS)}")
        if not 0.0 <= self.effect_weight <= 1.0:
            raise ConfigError("effect_weight", "must lie in [0, 1]")
        if self.effect_vector not in ("basis", "random"):
            raise ConfigError("effect_vector", "must be 'basis' or 'random'")
        if not 0 <= self.effect_rank <= self.d0:
            raise ConfigError("effect_rank", f"must lie in [0, d0 = {self.d0}]")
        if not self.effect_levels or any(not 0.0 <= v <= 1.0 for v in self.effect_levels):
            raise ConfigError("effect_levels", "need a non-empty list of values in [0, 1]")
        if self.effect == "dense" and self.d0 > DENSE_MAX_DIM:
            raise ConfigError("effect", f"dense effects are limited to d0 <= {DENSE_MAX_DIM}")
        if self.method not in METHODS:
            raise ConfigError("method", f"choose from {', '.join(METHODS)}")
        if self.n_qubits > 20:
            raise ConfigError("n_qubits", "at most 20 qubits")
        return self

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["effect_levels"] = list(self.effect_levels)
        return out

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}

DEFAULTS = {
    "concentration": dict(d0=4096, epsilon=0.01, effect="rank1"),
    "mean-identity": dict(d0=128, effect="diagonal"),
    "reliability": dict(d0=1024, epsilon=0.05, effect="projector"),
    "pair-fraction": dict(d0=2, delta=0.1, effect="projector", effect_rank=1, n_samples=1_000_000),
    "favoring": dict(d0=100_000, epsilon=0.101, effect="diagonal", n_samples=10_000),
    "quantifier-contrast": dict(d0=1024, n_samples=10_000),
    "bayes-flatness": dict(d0=100_000, epsilon=0.101, effect="diagonal"),
    "bayes-set": dict(d0=100_000, epsilon=0.101, effect="diagonal", n_samples=4_000),
    "gaussian-overlap": dict(d0=1024),
    "mixed-vs-pure": dict(d0=64, effect="dense"),
    "spin": dict(n_qubits=10),
    "full-suite": dict(d0=4096, epsilon=0.05, n_samples=100_000, master_seed=42),
}


def default_config(experiment: str) -> ExperimentConfig:
    if experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {experiment!r}")
    return ExperimentConfig(experiment=experiment, **DEFAULTS[experiment])


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        return ", ".join(repr(v) for v in value)
    return str(value)


def render_config(cfg: ExperimentConfig) -> str:
    lines = [f"# typicality-lab configuration for '{cfg.experiment}'"]
    for name in _FIELDS:
        lines.append(f"{name} = {_format(getattr(cfg, name))}")
    return "\n".join(lines) + "\n"


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(name: str, text: str):
    ftype = _FIELDS[name].type
    if ftype == "int":
        return int(text.replace("_", ""))
    if ftype == "float":
        return float(text)
    if ftype == "bool":
        return _parse_bool(text)
    if ftype == "tuple":
        return tuple(float(t) for t in text.split(",") if t.strip())
    return text


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config; missing keys take the experiment's defaults."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(key, "unknown configuration key")
        try:
            values[key] = _convert(key, value)
        except ValueError as exc:
            raise ConfigError(key, f"cannot parse {value!r}: {exc}") from None
    if "experiment" not in values:
        raise ConfigError("experiment", "missing required key")
    base = DEFAULTS.get(values["experiment"], {})
    cfg = ExperimentConfig(**{**base, **values})
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def build_effect(cfg: ExperimentConfig, d0: int | None = None) -> Effect:
    """Effect described by the ``effect*`` keys at dimension ``d0`` (default ``cfg.d0``)."""
    d0 = cfg.d0 if d0 is None else d0
    kind = cfg.effect
    if kind == "rank1":
        if cfg.effect_vector == "basis":
            v = StateVector.basis(d0, 0)
        else:
            v = sample_uniform(d0, SeedSpec(cfg.master_seed, CONFIG_STREAM))
        return Rank1Effect(v, cfg.effect_weight)
    if kind == "projector":
        rank = cfg.effect_rank or max(1, d0 // 2)
        return BasisProjector(range(min(rank, d0)), d0)
    if kind == "diagonal":
        levels = np.asarray(cfg.effect_levels, dtype=np.float64)
        return DiagonalEffect(np.resize(levels, d0))
    if d0 > DENSE_MAX_DIM:
        raise ConfigError("effect", f"dense effects are limited to d0 <= {DENSE_MAX_DIM}")
    seed = SeedSpec(cfg.master_seed, CONFIG_STREAM + 1)
    u = haar_unitary(d0, seed)
    spectrum = seed.generator(7).uniform(0.0, 1.0, d0)
    m = (u * spectrum) @ u.conj().T
    return DenseEffect(0.5 * (m + m.conj().T))
