"""Discrete Wigner transform: the beta-axis half of the full transforms.

For a fixed order pair (m, m') with L = max(|m|, |m'|), the analysis step
maps the partial spectrum s(j) = S(m, m'; j) to coefficients

    f(l) = v_l * sum_j  T[l, j] * w(j) * s(j),      l = L .. B-1,

with T[l, j] = d^l_{m,m'}(beta_j), quadrature weights w, and degree scale
v_l = (2l+1)/(8*pi*B).  The synthesis step is the plain transpose action

    g(j) = sum_l  f(l) * T[l, j]

computed by iterating the stored row-major matrix without materializing a
transpose.  Member matrices of a symmetry cluster are derived from the base
matrix by per-degree signs and (for reflecting relations) reversing the
column order, since beta_{2B-1-j} = pi - beta_j exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import grid_size, validate_bandwidth
from .quadrature import QuadratureWeights, sample_angles
from .schedule import OrderPair, SymmetryCluster
from .wigner import wigner_d_rows


@dataclass(frozen=True, eq=False)
class WignerMatrix:
    """Sampled Wigner functions for one order pair: rows l = L..B-1, columns beta_j."""

    m: int
    mp: int
    bandwidth: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        rows = self.bandwidth - self.lowest_degree
        if rows < 1 or self.values.shape != (rows, grid_size(self.bandwidth)):
            raise ValueError(
                f"matrix for (m={self.m}, m'={self.mp}) at B={self.bandwidth} "
                f"must have shape ({rows}, {grid_size(self.bandwidth)}), got {self.values.shape}"
            )

    @property
    def lowest_degree(self) -> int:
        return max(abs(self.m), abs(self.mp))


@dataclass(frozen=True, eq=False)
class DwtScalers:
    """Degree scale v_l = (2l+1)/(8*pi*B) and quadrature weights for one pair."""

    m: int
    mp: int
    bandwidth: int
    v: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)


def build_wigner_matrix(m: int, mp: int, bandwidth: int, betas: np.ndarray | None = None) -> WignerMatrix:
    """Sample d^l_{m,m'} on the beta grid via the recurrence route."""
    b = validate_bandwidth(bandwidth)
    if betas is None:
        betas = sample_angles(b).betas
    betas = np.asarray(betas, dtype=np.float64)
    if betas.shape != (grid_size(b),):
        raise ValueError(f"betas must have shape ({grid_size(b)},)")
    return WignerMatrix(m, mp, b, wigner_d_rows(m, mp, betas, b))


def derive_cluster_matrices(base: WignerMatrix, cluster: SymmetryCluster) -> dict[OrderPair, WignerMatrix]:
    """Matrices for every cluster member, derived from the base matrix.

    A relation contributes per-degree signs; reflecting relations also read
    the base at pi - beta, i.e. with columns reversed on this grid.
    """
    if (base.m, base.mp) != tuple(cluster.base):
        raise ValueError(
            f"matrix pair (m={base.m}, m'={base.mp}) is not the cluster base {tuple(cluster.base)}"
        )
    out: dict[OrderPair, WignerMatrix] = {}
    for pair, relation in cluster.members:
        values = base.values
        signs = relation.sign_column(base.m, base.mp, base.bandwidth)
        if relation.reflect:
            values = values[:, ::-1]
        out[pair] = WignerMatrix(pair.m, pair.mp, base.bandwidth, signs[:, None] * values)
    return out


def make_scalers(m: int, mp: int, bandwidth: int, weights: QuadratureWeights) -> DwtScalers:
    """Scalers of the analysis step for one order pair."""
    b = validate_bandwidth(bandwidth)
    if weights.bandwidth != b:
        raise ValueError(f"weights are for B={weights.bandwidth}, expected B={b}")
    low = max(abs(m), abs(mp))
    if low >= b:
        raise ValueError(f"order pair (m={m}, m'={mp}) has no degrees below B={b}")
    ls = np.arange(low, b, dtype=np.float64)
    v = (2.0 * ls + 1.0) / (8.0 * math.pi * b)
    return DwtScalers(m, mp, b, v, weights.values)


def dwt_apply(matrix: WignerMatrix, scalers: DwtScalers, values: np.ndarray) -> np.ndarray:
    """Analysis: coefficient column v * (T @ (w * s)) for one order pair."""
    n = grid_size(matrix.bandwidth)
    if values.shape != (n,):
        raise ValueError(f"expected {n} slice values, got shape {values.shape}")
    if scalers.v.shape[0] != matrix.values.shape[0] or scalers.bandwidth != matrix.bandwidth:
        raise ValueError("scalers do not match the matrix degree range")
    return scalers.v * (matrix.values @ (scalers.w * values))


def idwt_apply(matrix: WignerMatrix, coeffs: np.ndarray) -> np.ndarray:
    """Synthesis: g(j) = sum_l coeffs[l] T[l, j], iterating rows in place."""
    if coeffs.shape != (matrix.values.shape[0],):
        raise ValueError(
            f"expected {matrix.values.shape[0]} coefficients, got shape {coeffs.shape}"
        )
    return coeffs @ matrix.values
