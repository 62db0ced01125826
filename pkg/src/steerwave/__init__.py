"""Steerable wavelet frames built from spherical designs and harmonics.

The package builds undecimated tight frames on periodic d-dimensional grids:
an isotropic radial frame refined by an angular multiplier bank, either
harmonic (Riesz-type) or zonal (kernels centred on a spherical design).
Coefficients can be steered under rotations by a small matrix acting across
channels.
"""

__version__ = "0.1.0"

from .angular import (
    AngularCoeffs,
    MultiplierBank,
    assemble_gram,
    harmonic_bank,
    kernel_profile,
    optimal_coeffs,
    window_coeffs,
    zonal_bank,
)
from .designs import (
    SphericalDesign,
    builtin_design,
    characteristic_matrix,
    resolve_design,
    load_design,
    save_design,
    verify_design,
)
from .frame import Pyramid, SteerableFrame, analyze, build_frame, make_radial, synthesize
from .kernels import BACKEND
from .sphmath import dim_harmonics, legendre, sph_basis_eval, sphere_area
from .steering import (
    Rotation,
    harmonic_steering,
    rotation_from,
    steer_pyramid,
    steering_kernel,
    steering_matrix_zonal,
)

__all__ = [
    "AngularCoeffs",
    "BACKEND",
    "MultiplierBank",
    "Pyramid",
    "Rotation",
    "SphericalDesign",
    "SteerableFrame",
    "analyze",
    "assemble_gram",
    "build_frame",
    "builtin_design",
    "characteristic_matrix",
    "resolve_design",
    "dim_harmonics",
    "harmonic_bank",
    "harmonic_steering",
    "kernel_profile",
    "legendre",
    "load_design",
    "make_radial",
    "optimal_coeffs",
    "rotation_from",
    "save_design",
    "sph_basis_eval",
    "sphere_area",
    "steer_pyramid",
    "steering_kernel",
    "steering_matrix_zonal",
    "synthesize",
    "verify_design",
    "window_coeffs",
    "zonal_bank",
]
