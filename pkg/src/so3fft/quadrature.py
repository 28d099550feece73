"""Equiangular sampling grid and quadrature weights on the rotation group.

The grid places ``alpha_i = i*pi/B`` and ``gamma_k = k*pi/B`` uniformly on
the two torus angles and ``beta_j = (2j+1)*pi/(4B)`` on the open interval
(0, pi), for i, j, k = 0..2B-1.  The beta nodes are symmetric about pi/2:
``beta_{2B-1-j} = pi - beta_j`` exactly.

The weights

    w_B(j) = (2*pi/B^2) * sin(beta_j) * sum_{i=0}^{B-1} sin((2i+1) beta_j) / (2i+1)

make the discrete analysis sums exact for band-limited inputs.  They are
strictly positive, symmetric (w[j] = w[2B-1-j]), and sum to 2*pi/B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import grid_size, validate_bandwidth


@dataclass(frozen=True, eq=False)
class SampleAngles:
    """Per-axis sample angles of the (2B)^3 grid."""

    bandwidth: int
    alphas: np.ndarray = field(repr=False)
    betas: np.ndarray = field(repr=False)
    gammas: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = grid_size(self.bandwidth)
        for name in ("alphas", "betas", "gammas"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} must have shape ({n},)")


@dataclass(frozen=True, eq=False)
class QuadratureWeights:
    """Beta-axis weights w_B(j), one per beta node."""

    bandwidth: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = grid_size(self.bandwidth)
        if self.values.shape != (n,):
            raise ValueError(f"weights must have shape ({n},)")
        if np.any(self.values <= 0.0):
            raise ValueError("quadrature weights must be strictly positive")


def sample_angles(bandwidth: int) -> SampleAngles:
    """Angles of the equiangular grid for the given bandwidth."""
    b = validate_bandwidth(bandwidth)
    idx = np.arange(2 * b, dtype=np.float64)
    alphas = idx * math.pi / b
    betas = (2.0 * idx + 1.0) * math.pi / (4.0 * b)
    return SampleAngles(b, alphas, betas, alphas.copy())


def quadrature_weights(bandwidth: int) -> QuadratureWeights:
    """Weights w_B(j) of the beta-axis quadrature."""
    b = validate_bandwidth(bandwidth)
    betas = sample_angles(b).betas
    odd = 2.0 * np.arange(b, dtype=np.float64) + 1.0
    kernel = np.sin(np.outer(betas, odd)) / odd
    values = (2.0 * math.pi / (b * b)) * np.sin(betas) * kernel.sum(axis=1)
    return QuadratureWeights(b, values)
