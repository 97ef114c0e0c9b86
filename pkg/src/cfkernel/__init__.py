"""Fractional Clifford-Fourier kernels: evaluation, cross-checks and transforms."""
from .clifford import GeometricFrame, Multivector, PlaneValue, frame_of
from .genfun import TaylorJet, genfun_closed, genfun_coeffs, genfun_integral, genfun_matrix
from .kernels import (
    KernelRequest,
    Strategy,
    kernel,
    kernel_closed_even,
    kernel_dim2,
    kernel_integral,
    kernel_series,
)
from .laplace import laplace_kernel, numeric_laplace_check
from .transform import SampledFunction, cft_apply, gaussian_invariance_report

__all__ = [
    "GeometricFrame",
    "KernelRequest",
    "Multivector",
    "PlaneValue",
    "SampledFunction",
    "Strategy",
    "TaylorJet",
    "cft_apply",
    "frame_of",
    "gaussian_invariance_report",
    "genfun_closed",
    "genfun_coeffs",
    "genfun_integral",
    "genfun_matrix",
    "kernel",
    "kernel_closed_even",
    "kernel_dim2",
    "kernel_integral",
    "kernel_series",
    "laplace_kernel",
    "numeric_laplace_check",
]
