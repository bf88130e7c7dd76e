"""Numerical verification of Weil-Petersson curvature operator properties.

The package is layered: `hyperbolic_disk` holds the orthonormal basis and
quadrature on the Poincare disk, `resolvent` the smoothing operator D and
its Green kernel, `wp_tensor` the curvature tensor entries and their cache,
`wedge_operator` the truncated operator matrix, `spectral_analysis` the
verdict battery, and `oracle` the independent cross-check routes.
"""

from .hyperbolic_disk import (
    HarmonicForm,
    QuadratureRule,
    SeparableFunction,
    basis_element,
    gram_matrix,
    sup_norm,
    wp_inner,
)
from .resolvent import (
    GreenKernel,
    apply_D,
    check_contraction,
    check_lower_bound,
    default_green_kernel,
    green_kernel_value,
)
from .spectral_analysis import (
    SpectralReport,
    build_report,
    kernel_dimension,
    noncompactness_evidence,
    verify_bound,
    verify_nonpositive,
)
from .wedge_operator import (
    OperatorMatrix,
    WedgeVector,
    a_vector,
    assemble_matrix,
    j_action,
    quadratic_form,
    reduce_to_AB,
    wedge_inner,
)
from .wp_tensor import TensorCache, compute_block, curvature_component, tensor_entry

__version__ = "0.1.0"

__all__ = [
    "HarmonicForm",
    "QuadratureRule",
    "SeparableFunction",
    "basis_element",
    "gram_matrix",
    "sup_norm",
    "wp_inner",
    "GreenKernel",
    "apply_D",
    "check_contraction",
    "check_lower_bound",
    "default_green_kernel",
    "green_kernel_value",
    "TensorCache",
    "compute_block",
    "curvature_component",
    "tensor_entry",
    "OperatorMatrix",
    "WedgeVector",
    "a_vector",
    "assemble_matrix",
    "j_action",
    "quadratic_form",
    "reduce_to_AB",
    "wedge_inner",
    "SpectralReport",
    "build_report",
    "kernel_dimension",
    "noncompactness_evidence",
    "verify_bound",
    "verify_nonpositive",
    "__version__",
]
