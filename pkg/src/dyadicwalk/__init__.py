"""Return- and loop-counting curves of the dyadic digit walk.

The curve v(x) weights every return to zero of the partial sums of the
signed binary digits of x; u(x) weights every zero-sum digit segment.
This package evaluates both on dyadic cells (a brute-force oracle with
certified truncation bounds, backed by a compiled sweep kernel when
available), all their closed-form integrals (power integrals, monomial
moments, cosine transform, Bernoulli-basis transfer), and cross-checks
everything against everything in a machine-readable validation report.
"""

from .bernoulli import RationalPoly, c_coeffs, monomial_in_p, p_poly, q_poly, u_moment_bernoulli
from .closedform import (
    MomentTable,
    Poly,
    moment_table,
    resolvent_forward,
    resolvent_poly,
    u_moment,
    v_moment,
    v_poly_integral,
    v_power_det,
    v_power_rec,
)
from .digits import DigitExpansion, Params, expand, negate, shift, swap_pairs
from .fourier import (
    CosineSeries,
    FourierKernelEval,
    KernelDomainError,
    QuadratureError,
    cosine_series,
    cosine_transform,
    kernel_cf,
    kernel_series,
    reconstruct,
)
from .kernel import active_backend, set_backend
from .oracle import (
    CellBudgetError,
    CosKernel,
    DyadicCell,
    ExpKernel,
    OracleResult,
    integrate_u_monomial,
    integrate_v_monomial,
    integrate_v_power,
    integrate_weighted,
    u_trunc,
    v_trunc,
)
from .validate import ValidationEntry, ValidationReport, run_validation

__version__ = "0.1.0"

__all__ = [
    "DigitExpansion", "Params", "expand", "shift", "swap_pairs", "negate",
    "DyadicCell", "OracleResult", "CellBudgetError", "ExpKernel", "CosKernel",
    "v_trunc", "u_trunc",
    "integrate_v_power", "integrate_v_monomial", "integrate_u_monomial",
    "integrate_weighted",
    "Poly", "MomentTable", "moment_table",
    "v_power_rec", "v_power_det", "v_poly_integral", "v_moment", "u_moment",
    "resolvent_poly", "resolvent_forward",
    "RationalPoly", "c_coeffs", "p_poly", "monomial_in_p", "q_poly",
    "u_moment_bernoulli",
    "FourierKernelEval", "CosineSeries", "KernelDomainError", "QuadratureError",
    "kernel_series", "kernel_cf", "cosine_transform", "cosine_series", "reconstruct",
    "ValidationEntry", "ValidationReport", "run_validation",
    "active_backend", "set_backend",
    "__version__",
]
