"""Fast Fourier transforms on the rotation group.

Sequential and parallel forward/inverse transforms between equiangular
sample grids and spectral coefficients, plus slow reference transforms,
quadrature, Wigner function kernels, and a benchmark CLI (``so3fft-bench``).

Submodules are imported lazily so the CLI can configure the process
environment before numpy loads.
"""

from __future__ import annotations

import importlib

__version__ = "0.1.0"

_EXPORTS = {
    # core
    "EulerAngles": "core",
    "So3Coefficients": "core",
    "So3SampleGrid": "core",
    "coeff_count": "core",
    "coeff_index": "core",
    "euler_to_matrix": "core",
    "grid_size": "core",
    "is_rotation_matrix": "core",
    "order_pair_slots": "core",
    "read_coefficients": "core",
    "read_samples": "core",
    "validate_bandwidth": "core",
    "write_coefficients": "core",
    "write_samples": "core",
    # wigner
    "SYMMETRY_RELATIONS": "wigner",
    "SymmetryRelation": "wigner",
    "WignerColumn": "wigner",
    "apply_symmetry": "wigner",
    "jacobi_poly": "wigner",
    "wigner_D": "wigner",
    "wigner_d_column": "wigner",
    "wigner_d_direct": "wigner",
    "wigner_d_seed": "wigner",
    # quadrature
    "QuadratureWeights": "quadrature",
    "SampleAngles": "quadrature",
    "quadrature_weights": "quadrature",
    "sample_angles": "quadrature",
    # fft
    "SpectralSlice": "fft",
    "dft_1d": "fft",
    "forward_stage": "fft",
    "inverse_stage": "fft",
    # dwt
    "DwtScalers": "dwt",
    "WignerMatrix": "dwt",
    "build_wigner_matrix": "dwt",
    "derive_cluster_matrices": "dwt",
    "dwt_apply": "dwt",
    "idwt_apply": "dwt",
    "make_scalers": "dwt",
    # schedule
    "OrderPair": "schedule",
    "SymmetryCluster": "schedule",
    "WorkItem": "schedule",
    "WorkItemError": "schedule",
    "cluster_for_base": "schedule",
    "enumerate_clusters": "schedule",
    "kappa_count": "schedule",
    "kappa_split": "schedule",
    "kappa_to_orders": "schedule",
    "make_work_items": "schedule",
    "rect_to_orders": "schedule",
    "run_items": "schedule",
    "sigma_index": "schedule",
    "sigma_inverse": "schedule",
    # soft
    "DIRECT_BANDWIDTH_CAP": "soft",
    "TransformPlan": "soft",
    "fsoft_direct": "soft",
    "fsoft_parallel": "soft",
    "fsoft_sequential": "soft",
    "ifsoft_direct": "soft",
    "ifsoft_parallel": "soft",
    "ifsoft_sequential": "soft",
    "make_plan": "soft",
    # bench
    "BenchConfig": "bench",
    "BenchRecord": "bench",
    "OracleMismatchError": "bench",
    "error_metrics": "bench",
    "random_coefficients": "bench",
    "run_benchmark": "bench",
    "write_report": "bench",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name: str):
    module_name = _EXPORTS.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    return getattr(importlib.import_module(f".{module_name}", __name__), name)


def __dir__() -> list[str]:
    return __all__
