"""Unnormalized discrete Fourier transforms for the torus angles.

All transforms here use the explicit-sign kernel

    out[q] = sum_p  in[p] * exp(sign * 2*pi*i * p*q / n)

with no normalization in either direction, so a sign=+1 transform followed
by sign=-1 multiplies by n.  Power-of-two lengths run through an iterative
radix-2 butterfly (bit-reversal permutation, then log2(n) merge stages);
other lengths fall back to direct summation against the kernel matrix.

The forward analysis stage takes the sample grid to the partial spectrum
S(m, m'; j): for each beta slice j, a 2D sign=+1 transform over the alpha
and gamma axes.  Orders are held at bins (m mod 2B, m' mod 2B); for
band-limited data the bins at |order| = B (row/column index B) vanish.
The inverse synthesis stage is the 2D sign=-1 transform per slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import So3SampleGrid, grid_size, validate_bandwidth


def _bit_reversal(n: int) -> np.ndarray:
    idx = np.zeros(1, dtype=np.intp)
    while idx.shape[0] < n:
        idx = np.concatenate([2 * idx, 2 * idx + 1])
    return idx


def _dft_last_axis(values: np.ndarray, sign: int) -> np.ndarray:
    """Transform along the last axis; values must already be complex128."""
    n = values.shape[-1]
    if n == 1:
        return values.copy()
    if n & (n - 1) == 0:
        out = np.ascontiguousarray(values[..., _bit_reversal(n)])
        size = 2
        while size <= n:
            half = size // 2
            twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / size)
            blocks = out.reshape(out.shape[:-1] + (n // size, size))
            spun = blocks[..., half:] * twiddle
            blocks[..., half:] = blocks[..., :half] - spun
            blocks[..., :half] += spun
            size *= 2
        return out
    grid = np.arange(n)
    kernel = np.exp(sign * 2j * np.pi * np.outer(grid, grid) / n)
    return values @ kernel


def _dft_axis(values: np.ndarray, sign: int, axis: int) -> np.ndarray:
    moved = np.moveaxis(np.asarray(values, dtype=np.complex128), axis, -1)
    return np.moveaxis(_dft_last_axis(moved, sign), -1, axis)


def dft_1d(signal: np.ndarray, sign: int) -> np.ndarray:
    """Unnormalized 1-D DFT with explicit kernel sign (+1 or -1)."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    arr = np.asarray(signal, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError("signal must be a nonempty 1-D array")
    return _dft_axis(arr, sign, 0)


def transform_slice(plane: np.ndarray, sign: int) -> np.ndarray:
    """2-D unnormalized DFT of one beta slice (alpha axis 0, gamma axis 1)."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return _dft_axis(_dft_axis(plane, sign, 0), sign, 1)


@dataclass(frozen=True, eq=False)
class SpectralSlice:
    """Partial spectrum S(m, m'; j) of one beta slice.

    ``bins[m mod 2B, m' mod 2B]`` holds the order pair (m, m').
    """

    bandwidth: int
    j: int
    bins: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = grid_size(self.bandwidth)
        if not 0 <= self.j < n:
            raise ValueError(f"slice index j={self.j} outside [0, {n})")
        if self.bins.shape != (n, n):
            raise ValueError(f"bins must have shape ({n}, {n})")


def forward_stage(samples: So3SampleGrid) -> list[SpectralSlice]:
    """Analysis half-transform: per-slice 2D sign=+1 DFT over alpha and gamma."""
    b = validate_bandwidth(samples.bandwidth)
    n = grid_size(b)
    cube = samples.as_3d()
    spectrum = np.empty((n, n, n), dtype=np.complex128)
    for j in range(n):
        spectrum[:, j, :] = transform_slice(cube[:, j, :], +1)
    return [SpectralSlice(b, j, spectrum[:, j, :]) for j in range(n)]


def inverse_stage(slices: list[SpectralSlice]) -> So3SampleGrid:
    """Synthesis half-transform: per-slice 2D sign=-1 DFT back to samples."""
    if not slices:
        raise ValueError("no spectral slices given")
    b = validate_bandwidth(slices[0].bandwidth)
    n = grid_size(b)
    if len(slices) != n or sorted(s.j for s in slices) != list(range(n)):
        raise ValueError(f"need slices j=0..{n - 1} exactly once")
    cube = np.empty((n, n, n), dtype=np.complex128)
    for piece in slices:
        if piece.bandwidth != b:
            raise ValueError("mixed bandwidths in slice list")
        cube[:, piece.j, :] = transform_slice(piece.bins, -1)
    return So3SampleGrid(b, cube.reshape(-1))
