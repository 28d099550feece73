"""Fast forward and inverse transforms on the rotation group.

The forward transform separates into two stages: per beta slice, a 2D
Fourier analysis over the alpha/gamma axes produces the partial spectrum
S(m, m'; j); then, per order pair, the discrete Wigner transform along beta
yields the coefficients.  The inverse transform runs the two stages the
other way round.  Both stages are embarrassingly parallel — over beta
slices in the Fourier stage, over symmetry clusters in the Wigner stage —
and the parallel entry points run the exact same per-item code as the
sequential ones, so results are identical bit for bit for any thread count.

``fsoft_direct`` / ``ifsoft_direct`` are deliberately slow reference
transforms that evaluate the defining sums

    f(l,m,m') = (2l+1)/(8 pi B) * sum_{ijk} w(j) f(i,j,k) conj(D^l_{m,m'})
    f(i,j,k)  = sum_{lmm'} f(l,m,m') D^l_{m,m'}(alpha_i, beta_j, gamma_k)

coefficient by coefficient from the closed-form Wigner functions.  They
share no code with the fast path (no recurrence, no FFT, no symmetry
derivation) and serve as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    So3Coefficients,
    So3SampleGrid,
    coeff_count,
    grid_size,
    order_pair_slots,
    validate_bandwidth,
)
from .dwt import (
    DwtScalers,
    WignerMatrix,
    build_wigner_matrix,
    derive_cluster_matrices,
    dwt_apply,
    idwt_apply,
)
from .fft import transform_slice
from .quadrature import QuadratureWeights, SampleAngles, quadrature_weights, sample_angles
from .schedule import OrderPair, SymmetryCluster, WorkItem, enumerate_clusters, make_work_items, run_items
from .wigner import wigner_d_direct

DIRECT_BANDWIDTH_CAP = 12

_MATRIX_POLICIES = ("streaming", "precomputed")


@dataclass(frozen=True, eq=False)
class TransformPlan:
    """Reusable per-bandwidth state: grid, weights, clusters, matrix policy.

    ``matrix_policy`` is "streaming" (Wigner matrices are rebuilt inside each
    work item; O(B^2) transient memory) or "precomputed" (all member matrices
    are derived once at plan time and cached; much more memory, less repeated
    recurrence work when a plan is reused).  ``degree_scale`` holds
    (2l+1)/(8*pi*B) for l = 0..B-1 and ``slot_table`` the coefficient slots
    of every order pair's degree column, so transforms spend no time on
    index arithmetic.
    """

    bandwidth: int
    angles: SampleAngles
    weights: QuadratureWeights
    clusters: list[SymmetryCluster] = field(repr=False)
    work_items: list[WorkItem] = field(repr=False)
    matrix_policy: str
    matrices: dict[OrderPair, WignerMatrix] | None = field(repr=False)
    degree_scale: np.ndarray = field(repr=False)
    slot_table: dict[OrderPair, np.ndarray] = field(repr=False)


def make_plan(
    bandwidth: int,
    matrix_policy: str = "streaming",
    partitioner: str = "kappa",
) -> TransformPlan:
    """Build the reusable plan for one bandwidth."""
    b = validate_bandwidth(bandwidth)
    if matrix_policy not in _MATRIX_POLICIES:
        raise ValueError(f"matrix_policy must be one of {_MATRIX_POLICIES}, got {matrix_policy!r}")
    angles = sample_angles(b)
    weights = quadrature_weights(b)
    clusters = enumerate_clusters(b, partitioner)
    matrices: dict[OrderPair, WignerMatrix] | None = None
    if matrix_policy == "precomputed":
        matrices = {}
        for cluster in clusters:
            base = build_wigner_matrix(cluster.base.m, cluster.base.mp, b, angles.betas)
            matrices.update(derive_cluster_matrices(base, cluster))
    ls = np.arange(b, dtype=np.float64)
    degree_scale = (2.0 * ls + 1.0) / (8.0 * math.pi * b)
    slot_table = {
        pair: order_pair_slots(pair.m, pair.mp, b)
        for cluster in clusters
        for pair, _ in cluster.members
    }
    return TransformPlan(
        b, angles, weights, clusters, make_work_items(clusters),
        matrix_policy, matrices, degree_scale, slot_table,
    )


def _cluster_matrices(plan: TransformPlan, cluster: SymmetryCluster) -> dict[OrderPair, WignerMatrix]:
    if plan.matrices is not None:
        return {pair: plan.matrices[pair] for pair, _ in cluster.members}
    base = build_wigner_matrix(cluster.base.m, cluster.base.mp, plan.bandwidth, plan.angles.betas)
    return derive_cluster_matrices(base, cluster)


def _check_plan(data_bandwidth: int, plan: TransformPlan, what: str) -> int:
    if data_bandwidth != plan.bandwidth:
        raise ValueError(f"{what} bandwidth {data_bandwidth} does not match plan bandwidth {plan.bandwidth}")
    return plan.bandwidth


def _fsoft(samples: So3SampleGrid, plan: TransformPlan, threads: int) -> So3Coefficients:
    b = _check_plan(samples.bandwidth, plan, "sample")
    n = grid_size(b)
    cube = samples.as_3d()

    spectrum = np.empty((n, n, n), dtype=np.complex128)  # [m bin, j, m' bin]
    planes = run_items(range(n), lambda j: transform_slice(cube[:, j, :], +1), threads)
    for j, plane in enumerate(planes):
        spectrum[:, j, :] = plane

    def analyze(item: WorkItem) -> np.ndarray:
        # One stacked block per cluster (member columns share the degree
        # range), so a work item's result crosses the pool as a single array.
        matrices = _cluster_matrices(plan, item.cluster)
        low = max(abs(item.cluster.base.m), abs(item.cluster.base.mp))
        block = np.empty((len(item.cluster.members), b - low), dtype=np.complex128)
        for row, (pair, _) in enumerate(item.cluster.members):
            scalers = DwtScalers(pair.m, pair.mp, b, plan.degree_scale[low:], plan.weights.values)
            block[row] = dwt_apply(matrices[pair], scalers, spectrum[pair.m % n, :, pair.mp % n])
        return block

    coeffs = np.empty(coeff_count(b), dtype=np.complex128)
    for item, block in zip(plan.work_items, run_items(plan.work_items, analyze, threads)):
        for row, (pair, _) in enumerate(item.cluster.members):
            coeffs[plan.slot_table[pair]] = block[row]
    return So3Coefficients(b, coeffs)


def _ifsoft(coeffs: So3Coefficients, plan: TransformPlan, threads: int) -> So3SampleGrid:
    b = _check_plan(coeffs.bandwidth, plan, "coefficient")
    n = grid_size(b)
    flat = coeffs.data

    def synthesize(item: WorkItem) -> np.ndarray:
        matrices = _cluster_matrices(plan, item.cluster)
        block = np.empty((len(item.cluster.members), n), dtype=np.complex128)
        for row, (pair, _) in enumerate(item.cluster.members):
            block[row] = idwt_apply(matrices[pair], flat[plan.slot_table[pair]])
        return block

    spectrum = np.zeros((n, n, n), dtype=np.complex128)  # bins at |order| = B stay zero
    for item, block in zip(plan.work_items, run_items(plan.work_items, synthesize, threads)):
        for row, (pair, _) in enumerate(item.cluster.members):
            spectrum[pair.m % n, :, pair.mp % n] = block[row]

    cube = np.empty((n, n, n), dtype=np.complex128)
    planes = run_items(range(n), lambda j: transform_slice(spectrum[:, j, :], -1), threads)
    for j, plane in enumerate(planes):
        cube[:, j, :] = plane
    return So3SampleGrid(b, cube.reshape(-1))


def fsoft_sequential(samples: So3SampleGrid, plan: TransformPlan) -> So3Coefficients:
    """Forward transform, single worker."""
    return _fsoft(samples, plan, threads=1)


def fsoft_parallel(samples: So3SampleGrid, plan: TransformPlan, threads: int) -> So3Coefficients:
    """Forward transform on a worker pool; identical values to sequential."""
    return _fsoft(samples, plan, threads=threads)


def ifsoft_sequential(coeffs: So3Coefficients, plan: TransformPlan) -> So3SampleGrid:
    """Inverse transform, single worker."""
    return _ifsoft(coeffs, plan, threads=1)


def ifsoft_parallel(coeffs: So3Coefficients, plan: TransformPlan, threads: int) -> So3SampleGrid:
    """Inverse transform on a worker pool; identical values to sequential."""
    return _ifsoft(coeffs, plan, threads=threads)


def _check_direct_cap(bandwidth: int, max_bandwidth: int) -> None:
    if bandwidth > max_bandwidth:
        raise ValueError(
            f"direct transform capped at B={max_bandwidth} (got B={bandwidth}); "
            "raise max_bandwidth explicitly if you really want this"
        )


def _phase_vectors(bandwidth: int, angles: SampleAngles) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """exp(+i m alpha_.) and exp(+i m gamma_.) for every order |m| < B."""
    return {
        m: (np.exp(1j * m * angles.alphas), np.exp(1j * m * angles.gammas))
        for m in range(-(bandwidth - 1), bandwidth)
    }


def fsoft_direct(samples: So3SampleGrid, max_bandwidth: int = DIRECT_BANDWIDTH_CAP) -> So3Coefficients:
    """Reference forward transform: the analysis sum, one coefficient at a time."""
    b = validate_bandwidth(samples.bandwidth)
    _check_direct_cap(b, max_bandwidth)
    angles = sample_angles(b)
    weights = quadrature_weights(b)
    cube = samples.as_3d()
    phases = _phase_vectors(b, angles)

    out = np.empty(coeff_count(b), dtype=np.complex128)
    slot = 0
    for l in range(b):
        scale = (2 * l + 1) / (8.0 * math.pi * b)
        for m in range(-l, l + 1):
            e_alpha = phases[m][0]
            for mp in range(-l, l + 1):
                e_gamma = phases[mp][1]
                d_beta = wigner_d_direct(l, m, mp, angles.betas)
                conj_d = e_alpha[:, None, None] * (weights.values * d_beta)[None, :, None] * e_gamma[None, None, :]
                out[slot] = scale * np.sum(cube * conj_d)
                slot += 1
    return So3Coefficients(b, out)


def ifsoft_direct(coeffs: So3Coefficients, max_bandwidth: int = DIRECT_BANDWIDTH_CAP) -> So3SampleGrid:
    """Reference inverse transform: pointwise synthesis accumulated per coefficient."""
    b = validate_bandwidth(coeffs.bandwidth)
    _check_direct_cap(b, max_bandwidth)
    angles = sample_angles(b)
    phases = _phase_vectors(b, angles)

    n = grid_size(b)
    cube = np.zeros((n, n, n), dtype=np.complex128)
    slot = 0
    for l in range(b):
        for m in range(-l, l + 1):
            e_alpha = np.conj(phases[m][0])
            for mp in range(-l, l + 1):
                e_gamma = np.conj(phases[mp][1])
                d_beta = wigner_d_direct(l, m, mp, angles.betas)
                cube += coeffs.data[slot] * (
                    e_alpha[:, None, None] * d_beta[None, :, None] * e_gamma[None, None, :]
                )
                slot += 1
    return So3SampleGrid(b, cube.reshape(-1))
