"""Gate-error model and closed-form error predictions.

Noise parameters are given in Hilbert-space (amplitude) angle, which is half
the physical Bloch rotation angle. Samplers return physical angles so they
can be fed straight into the rotation and phase-pulse operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

COMFORTABLE = "comfortable"
MARGINAL = "marginal"
VIOLATED = "violated"


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate angle error ``N(bias, phi0**2)`` plus a per-qubit flip probability.

    ``p_flip`` only affects the GHZ register and applies once per qubit after
    every phase pulse.
    """

    phi0: float = 0.0
    bias: float = 0.0
    p_flip: float = 0.0

    def __post_init__(self) -> None:
        for name in ("phi0", "bias", "p_flip"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"{name} must be finite")
        if self.phi0 < 0:
            raise InvalidArgumentError(f"phi0 must be >= 0, got {self.phi0}")
        if not 0.0 <= self.p_flip <= 1.0:
            raise InvalidArgumentError(f"p_flip must be in [0, 1], got {self.p_flip}")

    @property
    def is_noiseless(self) -> bool:
        return self.phi0 == 0.0 and self.bias == 0.0 and self.p_flip == 0.0


NOISELESS = NoiseModel()


def sample_angle_error(model: NoiseModel, rng: np.random.Generator) -> float:
    """One gate's physical-angle error (twice the Hilbert-angle draw)."""
    return 2.0 * float(rng.normal(model.bias, model.phi0))


def sample_angle_errors(model: NoiseModel, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` consecutive draws of :func:`sample_angle_error`, as one array.

    Produces exactly the values ``count`` single calls would, in the same order.
    """
    return 2.0 * rng.normal(model.bias, model.phi0, size=count)


def predicted_variance(N1: int, phi0: float) -> float:
    """Hilbert-angle variance after ``N1`` independent gates."""
    if N1 < 0:
        raise InvalidArgumentError(f"N1 must be >= 0, got {N1}")
    return N1 * phi0 * phi0


def predicted_error_prob(variance: float, mean: float = 0.0) -> float:
    """Mean of ``sin(phi)**2`` for ``phi ~ N(mean, variance)``.

    With zero mean this is ``(1 - exp(-2 variance)) / 2``, which is close to
    the variance itself when the variance is small. A nonzero ``mean`` covers
    accumulated systematic error.
    """
    if variance < 0:
        raise InvalidArgumentError(f"variance must be >= 0, got {variance}")
    if math.isinf(variance):
        return 0.5
    if mean == 0.0:
        return -0.5 * math.expm1(-2.0 * variance)
    return 0.5 * (1.0 - math.cos(2.0 * mean) * math.exp(-2.0 * variance))


def variance_for_error_prob(p: float) -> float:
    """Inverse of :func:`predicted_error_prob` on ``[0, 0.5)``."""
    if not 0.0 <= p < 0.5:
        raise InvalidArgumentError(f"p must be in [0, 0.5), got {p}")
    return -0.5 * math.log1p(-2.0 * p)


def phi0_for_error_prob(p: float, N1: int) -> float:
    """Per-gate spread that gives wrong-outcome probability ``p`` after ``N1`` gates."""
    if N1 <= 0:
        raise InvalidArgumentError("N1 must be positive")
    return math.sqrt(variance_for_error_prob(p) / N1)


def workability_margin(N: int, phi0: float) -> float:
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    return phi0 * math.sqrt(N)


def margin_flag(margin: float) -> str:
    if margin < 0.1:
        return COMFORTABLE
    if margin < 1.0:
        return MARGINAL
    return VIOLATED
