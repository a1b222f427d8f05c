"""Core DP primitives: Gaussian/Laplace calibration and sampling,
randomized response, and leaky randomized response."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from lndp.rng import child_rng

__all__ = [
    "PrivacyParams",
    "NoiseSpec",
    "CalibrationError",
    "gaussian_sigma",
    "sample_noise",
    "randomized_response",
    "leaky_rr_pmf",
]


class CalibrationError(ValueError):
    """Raised when a mechanism is requested outside its valid regime."""


@dataclass(frozen=True)
class PrivacyParams:
    """An (eps, delta) indistinguishability target."""

    eps: float
    delta: float

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise CalibrationError(f"eps must be positive, got {self.eps}")
        if not 0.0 <= self.delta <= 1.0:
            raise CalibrationError(f"delta must lie in [0, 1], got {self.delta}")

    @property
    def c(self) -> float:
        """The recurring noise constant sqrt(log(1/delta))/eps."""
        if self.delta <= 0:
            raise CalibrationError("c is undefined at delta = 0")
        return math.sqrt(math.log(1.0 / self.delta)) / self.eps


@dataclass(frozen=True)
class NoiseSpec:
    """A named additive-noise distribution.

    scale is the standard deviation for "gaussian" and the scale b
    (variance 2b^2) for "laplace".
    """

    kind: str
    scale: float

    def __post_init__(self) -> None:
        if self.kind not in ("gaussian", "laplace"):
            raise CalibrationError(f"unknown noise kind {self.kind!r}")
        if not self.scale > 0:
            raise CalibrationError(f"scale must be positive, got {self.scale}")


def gaussian_sigma(delta2: float, params: PrivacyParams) -> float:
    """Gaussian-mechanism standard deviation for l2 sensitivity delta2:
    sigma = delta2 * sqrt(2 ln(1.25/delta)) / eps."""
    if delta2 < 0:
        raise CalibrationError(f"l2 sensitivity must be >= 0, got {delta2}")
    if not 0.0 < params.delta < 1.0:
        raise CalibrationError(
            "the Gaussian mechanism requires delta in (0, 1); "
            f"got delta={params.delta} (no silent Laplace fallback)"
        )
    return delta2 * math.sqrt(2.0 * math.log(1.25 / params.delta)) / params.eps


def sample_noise(spec: NoiseSpec, count: int, seed: int) -> np.ndarray:
    """count iid samples from the named distribution, keyed by seed."""
    if count < 0:
        raise CalibrationError(f"count must be >= 0, got {count}")
    rng = child_rng(seed, "noise", spec.kind)
    if spec.kind == "gaussian":
        return rng.normal(0.0, spec.scale, size=count)
    return rng.laplace(0.0, spec.scale, size=count)


def randomized_response(b: int, eps: float, seed: int) -> int:
    """Return b with probability e^eps/(e^eps+1), the flipped bit otherwise."""
    if b not in (0, 1):
        raise CalibrationError(f"input bit must be 0 or 1, got {b}")
    if eps < 0:
        raise CalibrationError(f"eps must be >= 0, got {eps}")
    keep = 1.0 / (1.0 + math.exp(-eps))  # e^eps/(e^eps+1), overflow-safe
    rng = child_rng(seed, "rr")
    return b if rng.random() < keep else 1 - b


def leaky_rr_pmf(b: int, params: PrivacyParams) -> np.ndarray:
    """Exact output pmf over {0, 1, 2, 3} of leaky randomized response.

    With alpha = 1-delta, input 0 maps to (alpha*e^eps/(e^eps+1),
    alpha/(e^eps+1), delta, 0) and input 1 to the mirrored table: the
    symbols 2 and 3 leak the input outright with probability delta.
    """
    if b not in (0, 1):
        raise CalibrationError(f"input bit must be 0 or 1, got {b}")
    alpha = 1.0 - params.delta
    keep = 1.0 / (1.0 + math.exp(-params.eps))
    p_same = alpha * keep
    p_flip = alpha - p_same  # alpha/(e^eps+1), summing exactly to alpha
    if b == 0:
        return np.array([p_same, p_flip, params.delta, 0.0])
    return np.array([p_flip, p_same, 0.0, params.delta])
