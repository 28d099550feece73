"""Core conventions: bandwidth, grids, coefficient layout, binary formats.

A band-limited function on the rotation group is sampled on the
``2B x 2B x 2B`` equiangular grid

    alpha_i = i*pi/B,  beta_j = (2j+1)*pi/(4B),  gamma_k = k*pi/B

for ``i, j, k = 0 .. 2B-1`` (ZYZ Euler angles), and its spectrum is the set
of coefficients ``f(l, m, m')`` for degrees ``0 <= l < B`` and orders
``|m|, |m'| <= l``.  Coefficients are stored degree-major in a flat complex
array: block ``l`` starts at ``l*(4*l*l - 1)//3`` and is laid out row-major
in ``(m + l, m' + l)``, giving ``B*(4*B*B - 1)//3`` slots in total.

Grids and coefficient sets are persisted in two little-endian binary
containers (SOFG for sample grids, SOFC for coefficients): a 4-byte magic,
a u32 format version, a u32 bandwidth, then the complex128 payload in
storage order (re, im float64 pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SOFC_MAGIC = b"SOFC"
SOFG_MAGIC = b"SOFG"
FORMAT_VERSION = 1

_HEADER_BYTES = 12  # magic + u32 version + u32 bandwidth


def validate_bandwidth(bandwidth: int) -> int:
    """Check that ``bandwidth`` is an integer >= 1 and return it."""
    if isinstance(bandwidth, bool) or not isinstance(bandwidth, (int, np.integer)):
        raise ValueError(f"bandwidth must be an integer, got {bandwidth!r}")
    if bandwidth < 1:
        raise ValueError(f"bandwidth must be >= 1, got {bandwidth}")
    return int(bandwidth)


def grid_size(bandwidth: int) -> int:
    """Number of samples per Euler angle axis (2B)."""
    return 2 * validate_bandwidth(bandwidth)


def coeff_count(bandwidth: int) -> int:
    """Total number of coefficients below bandwidth B: sum of (2l+1)^2 = B(4B^2-1)/3."""
    b = validate_bandwidth(bandwidth)
    return b * (4 * b * b - 1) // 3


def coeff_index(l: int, m: int, mp: int, bandwidth: int) -> int:
    """Flat slot of coefficient (l, m, m') in the degree-major layout."""
    b = validate_bandwidth(bandwidth)
    if not 0 <= l < b:
        raise ValueError(f"degree l={l} outside [0, {b})")
    if abs(m) > l or abs(mp) > l:
        raise ValueError(f"orders (m={m}, m'={mp}) exceed degree l={l}")
    return l * (4 * l * l - 1) // 3 + (m + l) * (2 * l + 1) + (mp + l)


def order_pair_slots(m: int, mp: int, bandwidth: int) -> np.ndarray:
    """Slots of the coefficient column (l=L..B-1) for a fixed order pair.

    L = max(|m|, |m'|) is the lowest degree carrying the pair.
    """
    b = validate_bandwidth(bandwidth)
    low = max(abs(m), abs(mp))
    if low >= b:
        raise ValueError(f"order pair (m={m}, m'={mp}) has no degrees below B={b}")
    ls = np.arange(low, b, dtype=np.int64)
    return ls * (4 * ls * ls - 1) // 3 + (m + ls) * (2 * ls + 1) + (mp + ls)


@dataclass(frozen=True)
class EulerAngles:
    """ZYZ Euler angles with alpha, gamma in [0, 2*pi) and beta in [0, pi]."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < 2.0 * math.pi:
            raise ValueError(f"alpha={self.alpha} outside [0, 2*pi)")
        if not 0.0 <= self.beta <= math.pi:
            raise ValueError(f"beta={self.beta} outside [0, pi]")
        if not 0.0 <= self.gamma < 2.0 * math.pi:
            raise ValueError(f"gamma={self.gamma} outside [0, 2*pi)")


def euler_to_matrix(angles: EulerAngles) -> np.ndarray:
    """Rotation matrix R = Rz(alpha) @ Ry(beta) @ Rz(gamma)."""

    def rz(t: float) -> np.ndarray:
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    def ry(t: float) -> np.ndarray:
        c, s = math.cos(t), math.sin(t)
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])

    return rz(angles.alpha) @ ry(angles.beta) @ rz(angles.gamma)


def is_rotation_matrix(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """True if ``matrix`` is orthogonal with determinant +1 within ``tol``."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (3, 3):
        return False
    residual = matrix.T @ matrix - np.eye(3)
    return bool(
        np.max(np.abs(residual)) <= tol
        and abs(np.linalg.det(matrix) - 1.0) <= tol
    )


def _as_complex_vector(data: np.ndarray, expected: int, what: str) -> np.ndarray:
    arr = np.asarray(data)
    if arr.dtype != np.complex128:
        arr = arr.astype(np.complex128)
    if arr.ndim != 1 or arr.shape[0] != expected:
        raise ValueError(f"{what} must be a flat complex array of length {expected}, got shape {arr.shape}")
    return arr


@dataclass
class So3Coefficients:
    """Spectrum of a band-limited function: flat complex128 array in layout order."""

    bandwidth: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.bandwidth = validate_bandwidth(self.bandwidth)
        self.data = _as_complex_vector(self.data, coeff_count(self.bandwidth), "coefficient data")

    @classmethod
    def zeros(cls, bandwidth: int) -> "So3Coefficients":
        return cls(bandwidth, np.zeros(coeff_count(bandwidth), dtype=np.complex128))

    def slot(self, l: int, m: int, mp: int) -> int:
        return coeff_index(l, m, mp, self.bandwidth)


@dataclass
class So3SampleGrid:
    """Function values on the (2B)^3 grid, flattened C-order over (i, j, k)."""

    bandwidth: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.bandwidth = validate_bandwidth(self.bandwidth)
        n = grid_size(self.bandwidth)
        self.data = _as_complex_vector(self.data, n**3, "sample data")

    @classmethod
    def zeros(cls, bandwidth: int) -> "So3SampleGrid":
        n = grid_size(bandwidth)
        return cls(bandwidth, np.zeros(n**3, dtype=np.complex128))

    @classmethod
    def from_3d(cls, bandwidth: int, values: np.ndarray) -> "So3SampleGrid":
        n = grid_size(bandwidth)
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (n, n, n):
            raise ValueError(f"expected shape {(n, n, n)}, got {values.shape}")
        return cls(bandwidth, values.reshape(-1).copy())

    def as_3d(self) -> np.ndarray:
        """View of the samples as a (2B, 2B, 2B) array indexed [i, j, k]."""
        n = grid_size(self.bandwidth)
        return self.data.reshape(n, n, n)


def _write_container(path: str, magic: bytes, bandwidth: int, payload: np.ndarray) -> None:
    if not np.all(np.isfinite(payload.view(np.float64))):
        raise ValueError("refusing to persist non-finite values")
    header = magic + np.asarray([FORMAT_VERSION, bandwidth], dtype="<u4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(payload, dtype="<c16").tobytes())


def _read_container(path: str, magic: bytes) -> tuple[int, np.ndarray]:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER_BYTES or blob[:4] != magic:
        raise ValueError(f"{path}: not a {magic.decode()} container")
    version, bandwidth = np.frombuffer(blob[4:_HEADER_BYTES], dtype="<u4")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    payload = np.frombuffer(blob[_HEADER_BYTES:], dtype="<c16").astype(np.complex128)
    if not np.all(np.isfinite(payload.view(np.float64))):
        raise ValueError(f"{path}: payload contains non-finite values")
    return int(bandwidth), payload


def write_coefficients(path: str, coeffs: So3Coefficients) -> None:
    """Persist coefficients as an SOFC container."""
    _write_container(path, SOFC_MAGIC, coeffs.bandwidth, coeffs.data)


def read_coefficients(path: str) -> So3Coefficients:
    """Load coefficients from an SOFC container."""
    bandwidth, payload = _read_container(path, SOFC_MAGIC)
    if payload.shape[0] != coeff_count(bandwidth):
        raise ValueError(f"{path}: payload length {payload.shape[0]} does not match bandwidth {bandwidth}")
    return So3Coefficients(bandwidth, payload)


def write_samples(path: str, grid: So3SampleGrid) -> None:
    """Persist a sample grid as an SOFG container."""
    _write_container(path, SOFG_MAGIC, grid.bandwidth, grid.data)


def read_samples(path: str) -> So3SampleGrid:
    """Load a sample grid from an SOFG container."""
    bandwidth, payload = _read_container(path, SOFG_MAGIC)
    if payload.shape[0] != grid_size(bandwidth) ** 3:
        raise ValueError(f"{path}: payload length {payload.shape[0]} does not match bandwidth {bandwidth}")
    return So3SampleGrid(bandwidth, payload)
