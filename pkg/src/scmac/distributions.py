"""Synthetic sensor-input distributions for experiments.

Samples are unsigned fractions of full scale in [0, 1]; weights are signed
in [-1, 1]. The zero-peaked option mimics convolution-layer outputs, whose
values cluster around zero; its width is a config knob.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .energy import uniform_survival, zero_peaked_survival
from .errors import ConfigError


@dataclass(frozen=True)
class InputDistribution:
    kind = "abstract"

    def draw(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        """(samples in [0,1], weights in [-1,1]) for one trial."""
        raise NotImplementedError

    def sample_survival(self) -> Callable[[float], float]:
        """P(sample magnitude >= a), for the gating closed form."""
        raise NotImplementedError

    def to_json_dict(self) -> dict:
        return {"kind": self.kind}


@dataclass(frozen=True)
class Uniform(InputDistribution):
    kind = "uniform"

    def draw(self, rng, n):
        return rng.uniform(0.0, 1.0, n), rng.uniform(-1.0, 1.0, n)

    def sample_survival(self):
        return uniform_survival


@dataclass(frozen=True)
class ZeroPeakedGaussian(InputDistribution):
    """Gaussian around zero, clipped to range; sigma in full-scale units."""

    sigma: float = 0.15
    kind = "zero_peaked_gaussian"

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ConfigError(f"sigma must be positive, got {self.sigma}")

    def draw(self, rng, n):
        samples = np.clip(np.abs(rng.normal(0.0, self.sigma, n)), 0.0, 1.0)
        weights = np.clip(rng.normal(0.0, self.sigma, n), -1.0, 1.0)
        return samples, weights

    def sample_survival(self):
        return zero_peaked_survival(self.sigma)

    def to_json_dict(self):
        return {"kind": self.kind, "sigma": self.sigma}


@dataclass(frozen=True)
class Explicit(InputDistribution):
    """Fixed sample/weight vectors, identical every trial."""

    samples: tuple[float, ...]
    weights: tuple[float, ...]
    kind = "explicit"

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(float(x) for x in self.samples))
        object.__setattr__(self, "weights", tuple(float(x) for x in self.weights))
        if len(self.samples) != len(self.weights):
            raise ConfigError("explicit samples and weights must have equal length")
        if any(not (0.0 <= x <= 1.0) for x in self.samples):
            raise ConfigError("explicit samples must lie in [0, 1]")
        if any(not (-1.0 <= w <= 1.0) for w in self.weights):
            raise ConfigError("explicit weights must lie in [-1, 1]")

    def draw(self, rng, n):
        if n != len(self.samples):
            raise ConfigError(
                f"explicit distribution has {len(self.samples)} entries, need {n}"
            )
        return np.asarray(self.samples), np.asarray(self.weights)

    def sample_survival(self):
        samples = np.asarray(self.samples)

        def survival(a: float) -> float:
            return float((samples >= a).mean())

        return survival

    def to_json_dict(self):
        return {"kind": self.kind, "samples": list(self.samples), "weights": list(self.weights)}


def distribution_from_dict(d: dict) -> InputDistribution:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError("input_distribution must be an object with a 'kind' field")
    kind = d["kind"]
    extra = set(d) - {"kind", "sigma", "samples", "weights"}
    if extra:
        raise ConfigError(f"unknown input_distribution fields: {sorted(extra)}")
    if kind == "uniform":
        return Uniform()
    if kind == "zero_peaked_gaussian":
        return ZeroPeakedGaussian(float(d.get("sigma", 0.15)))
    if kind == "explicit":
        if "samples" not in d or "weights" not in d:
            raise ConfigError("explicit distribution needs 'samples' and 'weights'")
        return Explicit(tuple(d["samples"]), tuple(d["weights"]))
    raise ConfigError(f"unknown input_distribution kind {kind!r}")
