"""Global operators over F_q[s, t] and the sheaves they define on P^1."""
from __future__ import annotations

from .graded import (
    GradedSubmodule,
    Grading,
    KernelIncomplete,
    SaturationError,
    ambient,
    graded_coker_hilbert,
    graded_image,
    graded_kernel,
    intersect,
    saturate,
)
from .homogeneous import HomMatrix, HomogeneityError, build_theta, named_matrix, theta_power
from .sheaves import (
    FiData,
    SplittingType,
    SplittingUndetermined,
    analyze_hilbert,
    coker_report,
    default_degree_bound,
    fi_data,
    image_report,
    kernel_report,
    splitting_type,
    verify_fi_rank_theorem,
)

__all__ = [
    "FiData",
    "GradedSubmodule",
    "Grading",
    "HomMatrix",
    "HomogeneityError",
    "KernelIncomplete",
    "SaturationError",
    "SplittingType",
    "SplittingUndetermined",
    "ambient",
    "analyze_hilbert",
    "build_theta",
    "coker_report",
    "default_degree_bound",
    "fi_data",
    "graded_coker_hilbert",
    "graded_image",
    "graded_kernel",
    "image_report",
    "intersect",
    "kernel_report",
    "named_matrix",
    "saturate",
    "splitting_type",
    "theta_power",
    "verify_fi_rank_theorem",
]
