"""Admissible angular multiplier banks.

A bank is a finite family of degree-0 homogeneous functions m_n whose squared
moduli sum to one on the sphere. Two families are provided:

* harmonic banks, ``m_{l,k} = c_l sqrt(sigma/N(d,l)) Y_{l,k}``;
* zonal banks on a spherical 2*lmax-design,
  ``m_n(w) = sum_l c_l sqrt(N(d,l)/n_max) P_l(d; w_n . w/|w|)``.

The module also builds the degree-weight vector ``c`` from a window or from
the localization eigenproblem, and samples the zonal kernel profile.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .designs import SphericalDesign
from .sphmath import dim_harmonics, legendre_table, sph_basis_upto, sphere_area

__all__ = [
    "AngularCoeffs",
    "MultiplierBank",
    "EnergyProblem",
    "InsufficientDesignError",
    "NonPositiveWeightError",
    "EigenNonconvergenceError",
    "WINDOWS",
    "window_coeffs",
    "assemble_gram",
    "optimal_coeffs",
    "harmonic_bank",
    "zonal_bank",
    "sphere_samples",
    "verify_partition",
    "kernel_profile",
    "format_profile_csv",
]


class InsufficientDesignError(ValueError):
    pass


class NonPositiveWeightError(ValueError):
    pass


class EigenNonconvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class AngularCoeffs:
    """Unit vector of per-degree weights ``c_0..c_lmax``."""

    d: int
    c: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        c = np.array(self.c, dtype=np.float64).ravel()
        if c.size == 0:
            raise ValueError("coefficient vector is empty")
        if abs(np.linalg.norm(c) - 1) > 1e-12:
            raise ValueError(f"coefficients must form a unit vector, norm is {np.linalg.norm(c)!r}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @classmethod
    def normalized(cls, d: int, raw, label: str = "custom") -> "AngularCoeffs":
        raw = np.asarray(raw, dtype=np.float64)
        norm = np.linalg.norm(raw)
        if norm == 0:
            raise ValueError("cannot normalize an all-zero coefficient vector")
        return cls(d, raw / norm, label)

    @property
    def lmax(self) -> int:
        return self.c.size - 1

    def is_flat(self, tol: float = 1e-12) -> bool:
        return bool(np.ptp(self.c) <= tol)


# ----------------------------------------------------------------------------
# windows


def _bspline3(x):
    x = np.abs(x)
    return np.where(x < 1, 2 / 3 - x**2 + x**3 / 2, np.where(x < 2, (2 - x) ** 3 / 6, 0.0))


WINDOWS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "cubic": lambda w: (1 - w) ** 2 * (1 + 2 * w),
    "bspline1": lambda w: 1 - w,
    "bspline3": lambda w: _bspline3(2 * w) / (2 / 3),
    "flat": lambda w: np.ones_like(w),
}


def window_coeffs(kind: str, lmax: int, d: int) -> AngularCoeffs:
    """Degree weights ``c_l ~ a(l/(lmax+1))`` for a decreasing window ``a``.

    ``kind`` is one of ``cubic`` ((1-w)^2 (1+2w)), ``bspline1`` (1-w),
    ``bspline3`` (cubic B-spline rescaled so a(0)=1, a(1)=0) or ``flat``.
    """
    if kind not in WINDOWS:
        raise ValueError(f"unknown window {kind!r}; choose from {sorted(WINDOWS)}")
    if lmax < 0:
        raise ValueError("lmax must be >= 0")
    w = WINDOWS[kind](np.arange(lmax + 1) / (lmax + 1))
    return AngularCoeffs.normalized(d, w, kind)


# ----------------------------------------------------------------------------
# localization energy


@dataclass(frozen=True)
class EnergyProblem:
    """Gram matrix of ``E(P_c; W) = c^T A c`` in the normalized zonal Legendre basis.

    The zonal polynomials ``sqrt(N(d,l)) P_l(d; .)`` have unit norm for the
    normalized surface measure, so ``W == 1`` gives ``A = I``.
    """

    d: int
    lmax: int
    weight: Callable = field(repr=False)
    gram: np.ndarray = field(repr=False)
    nodes: int = 0

    def energy(self, c) -> float:
        c = np.asarray(c, dtype=np.float64)
        return float(c @ self.gram @ c)


def _gram_at(d: int, lmax: int, weight, nodes: int) -> np.ndarray:
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = (x + 1) * (np.pi / 2)
    w = w * (np.pi / 2)
    t = np.cos(theta)
    wt = np.asarray(weight(t), dtype=np.float64) * np.ones_like(t)
    if not np.all(wt > 0):
        i = int(np.argmin(wt))
        raise NonPositiveWeightError(f"weight is not positive: W({t[i]!r}) = {wt[i]!r}")
    scale = math.gamma(d / 2) / (math.sqrt(math.pi) * math.gamma((d - 1) / 2))
    p = legendre_table(d, lmax, t) * np.sqrt([dim_harmonics(d, l) for l in range(lmax + 1)])[:, None]
    return scale * (p * (w * wt * np.sin(theta) ** (d - 2))) @ p.T


def assemble_gram(d: int, lmax: int, weight, nodes: int = 512, tol: float = 1e-11, max_nodes: int = 1 << 16) -> EnergyProblem:
    """Assemble the localization Gram matrix by Gauss-Legendre quadrature in theta.

    Node count starts at ``nodes`` and doubles until two successive estimates
    agree entrywise to ``tol``.
    """
    prev = _gram_at(d, lmax, weight, nodes)
    while True:
        nodes *= 2
        if nodes > max_nodes:
            raise RuntimeError(f"Gram assembly did not converge to {tol:g} within {max_nodes} nodes")
        cur = _gram_at(d, lmax, weight, nodes)
        if np.abs(cur - prev).max() <= tol:
            gram = (cur + cur.T) / 2
            gram.setflags(write=False)
            return EnergyProblem(d, lmax, weight, gram, nodes)
        prev = cur


def optimal_coeffs(problem: EnergyProblem, sense: str = "minimize", degeneracy_tol: float = 1e-10) -> AngularCoeffs:
    """Unit ``c`` minimizing (or maximizing) the energy ``c^T A c``.

    For a degenerate extreme eigenvalue the returned vector is the normalized
    projection of the first standard basis vector with a nonzero projection
    onto the eigenspace. Sign is fixed so the first nonzero entry is positive.
    """
    if sense not in ("minimize", "maximize"):
        raise ValueError("sense must be 'minimize' or 'maximize'")
    try:
        vals, vecs = np.linalg.eigh(problem.gram)
    except np.linalg.LinAlgError as exc:
        raise EigenNonconvergenceError(str(exc)) from exc
    target = vals[0] if sense == "minimize" else vals[-1]
    space = vecs[:, np.abs(vals - target) <= degeneracy_tol * max(1.0, abs(target))]
    proj = space @ space.T
    for i in range(proj.shape[0]):
        v = proj[:, i]
        if np.linalg.norm(v) > 1e-8:
            break
    v = v / np.linalg.norm(v)
    lead = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    return AngularCoeffs(problem.d, v * np.sign(lead), f"optimal-{sense}")


# ----------------------------------------------------------------------------
# banks


@dataclass(frozen=True)
class MultiplierBank:
    """Evaluable admissible collection of Fourier multipliers.

    ``evaluate(points)`` normalizes its argument, so every channel is
    homogeneous of degree 0; points at the origin evaluate to ``zero_value``.
    """

    d: int
    kind: str
    coeffs: AngularCoeffs
    design: SphericalDesign | None = None
    labels: tuple = ()

    @property
    def lmax(self) -> int:
        return self.coeffs.lmax

    @property
    def n_channels(self) -> int:
        return len(self.labels)

    def degree_weights(self) -> np.ndarray:
        """Per-degree factors applied to P_l in each zonal channel."""
        n = self.design.n
        return self.coeffs.c * np.sqrt([dim_harmonics(self.d, l) / n for l in range(self.lmax + 1)])

    def evaluate(self, points, zero_value: float = 0.0) -> np.ndarray:
        """Channel values at ``points`` (shape (..., d)); result has shape (n_channels, ...)."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.shape[-1] != self.d:
            raise ValueError(f"points must have trailing dimension {self.d}")
        lead = pts.shape[:-1]
        flat = pts.reshape(-1, self.d)
        norms = np.linalg.norm(flat, axis=1)
        live = norms > 0
        unit = np.zeros_like(flat)
        unit[live] = flat[live] / norms[live, None]
        out = np.full((self.n_channels, flat.shape[0]), float(zero_value))
        if self.kind == "zonal":
            weights = self.degree_weights()
            for i, centre in enumerate(self.design.points):
                dots = np.clip(unit[live] @ centre, -1.0, 1.0)
                out[i, live] = kernels.legendre_sum(self.d, weights, np.ascontiguousarray(dots))
        else:
            basis = sph_basis_upto(self.d, self.lmax, unit[live])
            scale, keep = self._harmonic_columns()
            out[:, live] = (basis[:, keep] * scale).T
        return out.reshape((self.n_channels,) + lead)

    def _harmonic_columns(self):
        sigma = sphere_area(self.d)
        scale, keep, col = [], [], 0
        for l in range(self.lmax + 1):
            nl = dim_harmonics(self.d, l)
            if self.coeffs.c[l] != 0:
                keep.extend(range(col, col + nl))
                scale.extend([self.coeffs.c[l] * math.sqrt(sigma / nl)] * nl)
            col += nl
        return np.array(scale), np.array(keep, dtype=int)

    def degree_layout(self) -> list[tuple[int, int]]:
        """For harmonic banks: ``(degree, n_channels)`` blocks in channel order."""
        if self.kind != "harmonic":
            raise ValueError("degree layout only exists for harmonic banks")
        blocks = []
        for l, _ in self.labels:
            if blocks and blocks[-1][0] == l:
                blocks[-1] = (l, blocks[-1][1] + 1)
            else:
                blocks.append((l, 1))
        return blocks

    def descriptor(self) -> dict:
        desc = {"kind": self.kind, "d": self.d, "lmax": self.lmax, "window": self.coeffs.label,
                "coeffs": [float(v) for v in self.coeffs.c]}
        if self.design is not None:
            desc.update(design=self.design.source, design_checksum=self.design.checksum(),
                        design_strength=self.design.strength, n_max=self.design.n)
        return desc


def harmonic_bank(d: int, coeffs: AngularCoeffs) -> MultiplierBank:
    """Harmonic Riesz bank ``c_l sqrt(sigma/N(d,l)) Y_{l,k}``; degrees with c_l = 0 are dropped."""
    if d not in (2, 3):
        raise NotImplementedError(f"harmonic banks need an explicit basis, available for d in (2, 3), got {d}")
    if coeffs.d != d:
        raise ValueError("coefficient dimension does not match bank dimension")
    labels = tuple((l, k) for l in range(coeffs.lmax + 1) if coeffs.c[l] != 0 for k in range(dim_harmonics(d, l)))
    return MultiplierBank(d, "harmonic", coeffs, None, labels)


def zonal_bank(design: SphericalDesign, coeffs: AngularCoeffs) -> MultiplierBank:
    """Zonal bank centred on the points of a spherical design of strength >= 2*lmax."""
    if coeffs.d != design.d:
        raise ValueError("coefficient dimension does not match design dimension")
    need = 2 * coeffs.lmax
    if design.strength < need:
        raise InsufficientDesignError(
            f"zonal bank with lmax={coeffs.lmax} needs a {need}-design; "
            f"{design.source} has strength {design.strength}"
        )
    return MultiplierBank(design.d, "zonal", coeffs, design, tuple(range(design.n)))


# ----------------------------------------------------------------------------
# verification


def sphere_samples(d: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic quasi-uniform points: equiangular (d=2), Fibonacci (d=3), seeded Gaussian otherwise."""
    if count < 1:
        raise ValueError("need at least one sample")
    if d == 2:
        ang = 2 * np.pi * (np.arange(count) + 0.5) / count
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    if d == 3:
        i = np.arange(count) + 0.5
        z = 1 - 2 * i / count
        r = np.sqrt(1 - z**2)
        ang = np.pi * (1 + math.sqrt(5)) * i
        return np.stack([r * np.cos(ang), r * np.sin(ang), z], axis=1)
    g = np.random.default_rng(seed).standard_normal((count, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def verify_partition(bank: MultiplierBank, samples: int = 10_000) -> float:
    """Max over sphere samples of ``|sum_n |m_n|^2 - 1|``."""
    vals = bank.evaluate(sphere_samples(bank.d, samples))
    return float(np.abs((np.abs(vals) ** 2).sum(axis=0) - 1).max())


# ----------------------------------------------------------------------------
# kernel profiles


def kernel_profile(coeffs: AngularCoeffs, n_max: int, theta) -> np.ndarray:
    """Table of ``(theta, Lambda(cos theta))`` for the zonal kernel of ``coeffs``."""
    theta = np.asarray(theta, dtype=np.float64)
    d = coeffs.d
    weights = coeffs.c * np.sqrt([dim_harmonics(d, l) / n_max for l in range(coeffs.lmax + 1)])
    values = kernels.legendre_sum(d, weights, np.ascontiguousarray(np.cos(theta).ravel()))
    return np.column_stack([theta.ravel(), values])


def format_profile_csv(table) -> str:
    """CSV text with header ``theta,lambda`` and 17 significant digits, LF endings."""
    buf = io.StringIO()
    buf.write("theta,lambda\n")
    for th, lam in np.asarray(table):
        buf.write(f"{th:.17g},{lam:.17g}\n")
    return buf.getvalue()
