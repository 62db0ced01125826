"""Special functions on the sphere.

Harmonic-space dimensions, sphere areas, generalized Legendre polynomials
P_l(d; x), explicit real orthonormal spherical-harmonic bases for d = 2, 3,
and the Bessel-integral spatial profile of a band-limited radial wavelet.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import kernels

__all__ = [
    "dim_harmonics",
    "dim_harmonics_upto",
    "sphere_area",
    "legendre",
    "legendre_table",
    "sph_basis_eval",
    "sph_basis_upto",
    "radial_profile_spatial",
    "QuadratureError",
]

_X_SLACK = 1e-12


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


def _check_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise ValueError(f"ambient dimension must be an integer >= 2, got {d!r}")
    return int(d)


def dim_harmonics(d: int, l: int) -> int:
    """Dimension N(d, l) of the space of degree-``l`` spherical harmonics on S^{d-1}."""
    d = _check_dim(d)
    if int(l) != l or l < 0:
        raise ValueError(f"degree must be an integer >= 0, got {l!r}")
    l = int(l)
    second = math.comb(d + l - 3, l - 2) if l >= 2 else 0
    return math.comb(d + l - 1, l) - second


def dim_harmonics_upto(d: int, lmax: int) -> int:
    """Dimension of harmonics of degree <= ``lmax`` on S^{d-1}, i.e. N(d+1, lmax)."""
    _check_dim(d)
    return dim_harmonics(d + 1, lmax)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} in R^d."""
    d = _check_dim(d)
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def _as_unit_interval(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) > 1 + _X_SLACK) or not np.all(np.isfinite(x)):
        raise ValueError("Legendre argument must lie in [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def legendre_table(d: int, lmax: int, x) -> np.ndarray:
    """P_l(d; x) for l = 0..lmax, shape ``(lmax + 1,) + x.shape``."""
    d = _check_dim(d)
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    x = _as_unit_interval(x)
    out = kernels.legendre_table(d, lmax, np.ascontiguousarray(x.ravel()))
    return out.reshape((lmax + 1,) + x.shape)


def legendre(d: int, l: int, x):
    """Generalized Legendre polynomial P_l(d; x), normalized so P_l(d; 1) = 1.

    Uses the three-term recurrence
    ``(l + d - 2) P_{l+1} = (2l + d - 2) x P_l - l P_{l-1}``, which reduces to
    Chebyshev polynomials for d = 2 and classical Legendre polynomials for d = 3.
    Scalars in, scalar out.
    """
    if int(l) != l or l < 0:
        raise ValueError(f"degree must be an integer >= 0, got {l!r}")
    x_arr = np.asarray(x, dtype=np.float64)
    vals = legendre_table(d, int(l), x_arr)[int(l)]
    return float(vals) if x_arr.ndim == 0 else vals


def _unit_points(points, d: int) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[-1] != d:
        raise ValueError(f"points must have trailing dimension {d}, got shape {pts.shape}")
    norms = np.linalg.norm(pts, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("cannot evaluate spherical harmonics at the origin")
    return pts / norms


def _circular_upto(lmax: int, pts: np.ndarray) -> list[np.ndarray]:
    theta = np.arctan2(pts[..., 1], pts[..., 0])
    out = [np.full(theta.shape + (1,), 1.0 / math.sqrt(2 * math.pi))]
    inv = 1.0 / math.sqrt(math.pi)
    for l in range(1, lmax + 1):
        out.append(np.stack([np.cos(l * theta) * inv, np.sin(l * theta) * inv], axis=-1))
    return out


def _spherical_upto(lmax: int, pts: np.ndarray) -> list[np.ndarray]:
    # Fully normalized associated Legendre recurrences; no Condon-Shortley phase.
    z = np.clip(pts[..., 2], -1.0, 1.0)
    s = np.hypot(pts[..., 0], pts[..., 1])
    phi = np.arctan2(pts[..., 1], pts[..., 0])
    pbar: dict[tuple[int, int], np.ndarray] = {(0, 0): np.full(z.shape, 1.0 / math.sqrt(4 * math.pi))}
    for m in range(1, lmax + 1):
        pbar[m, m] = math.sqrt((2 * m + 1) / (2 * m)) * s * pbar[m - 1, m - 1]
    for m in range(0, lmax):
        pbar[m + 1, m] = math.sqrt(2 * m + 3) * z * pbar[m, m]
    for m in range(0, lmax + 1):
        for l in range(m + 2, lmax + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            pbar[l, m] = a * (z * pbar[l - 1, m] - b * pbar[l - 2, m])
    cos_m = [np.cos(m * phi) for m in range(lmax + 1)]
    sin_m = [np.sin(m * phi) for m in range(lmax + 1)]
    root2 = math.sqrt(2.0)
    out = []
    for l in range(lmax + 1):
        cols = [root2 * pbar[l, m] * sin_m[m] for m in range(l, 0, -1)]
        cols.append(pbar[l, 0])
        cols.extend(root2 * pbar[l, m] * cos_m[m] for m in range(1, l + 1))
        out.append(np.stack(cols, axis=-1))
    return out


def _basis_upto(d: int, lmax: int, points) -> list[np.ndarray]:
    if d not in (2, 3):
        raise NotImplementedError(f"explicit spherical-harmonic basis only for d in (2, 3), got d={d}")
    pts = _unit_points(points, d)
    return _circular_upto(lmax, pts) if d == 2 else _spherical_upto(lmax, pts)


def sph_basis_eval(d: int, l: int, points) -> np.ndarray:
    """Real orthonormal basis of degree-``l`` harmonics at ``points``.

    Parameters
    ----------
    d : int
        2 or 3.
    l : int
        Degree.
    points : array_like, shape (..., d)
        Evaluation points; renormalized to the unit sphere.

    Returns
    -------
    ndarray, shape (..., N(d, l))
        For d = 2 the columns are ``cos(l t)/sqrt(pi), sin(l t)/sqrt(pi)``
        (``1/sqrt(2 pi)`` at l = 0). For d = 3 the columns run over orders
        m = -l..l, with sine-type harmonics for m < 0 and cosine-type for m > 0.
    """
    return _basis_upto(d, int(l), points)[int(l)]


def sph_basis_upto(d: int, lmax: int, points) -> np.ndarray:
    """All basis functions of degree <= ``lmax``, degree-major, shape (..., N(d+1, lmax))."""
    return np.concatenate(_basis_upto(d, int(lmax), points), axis=-1)


def _profile_callable(h) -> tuple[Callable[[float], float], list[float]]:
    if callable(h):
        breaks = list(getattr(h, "breakpoints", (0.125, 0.25)))
        return (lambda s: float(h(s))), breaks
    s_grid, h_vals = (np.asarray(a, dtype=np.float64) for a in h)
    return (lambda s: float(np.interp(s, s_grid, h_vals, right=0.0))), []


def radial_profile_spatial(h, d: int, l: int, r: float, rtol: float = 1e-8) -> float:
    """Spatial radial factor of a wavelet with Fourier transform h(|w|) P(w)/|w|^l.

    Returns ``F(r) / i**l`` where the spatial wavelet is ``F(|x|) P(x)`` and

        F(r) = 2 pi i^l r^{-nu} int_0^{1/2} h(s) J_nu(2 pi r s) s^{d/2} ds,
        nu = (d + 2l - 2) / 2.

    The phase ``i**l`` is factored out so the result is real; it is real for
    even ``l`` and purely imaginary for odd ``l`` before that division.

    ``h`` is either a callable on [0, 1/2] or a pair ``(s_samples, h_samples)``
    that is linearly interpolated. Support beyond 1/2 is ignored.
    """
    d = _check_dim(d)
    if r <= 0:
        raise ValueError("r must be positive")
    nu = (d + 2 * l - 2) / 2.0
    hf, breaks = _profile_callable(h)
    breaks = [b for b in breaks if 0.0 < b < 0.5]

    def integrand(s):
        return hf(s) * special.jv(nu, 2 * math.pi * r * s) * s ** (d / 2)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info = integrate.quad(
            integrand, 0.0, 0.5, points=breaks or None, epsabs=1e-300, epsrel=1e-11,
            limit=500, full_output=True,
        )[:3]
        # |J_nu| <= 1, so this bounds |val| and sets the scale for the error test
        scale = integrate.quad(lambda s: abs(hf(s)) * s ** (d / 2), 0.0, 0.5, points=breaks or None, limit=500)[0]
    if err > rtol * max(abs(val), scale) and err > 1e-300:
        raise QuadratureError(f"radial quadrature did not converge: value={val!r}, error estimate={err!r}")
    return 2 * math.pi * r ** (-nu) * val
