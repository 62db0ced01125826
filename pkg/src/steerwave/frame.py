"""Undecimated steerable wavelet frame on periodic d-dimensional grids.

Every window lives in the DFT domain with frequencies in cycles per sample,
``w in [-1/2, 1/2)^d``. Scale ``j`` uses the radial window ``h(2^j |w|)``
and each angular channel multiplies it by ``m_n(w)``. A lowpass window
completes the partition of unity::

    sum_j h(2^j|w|)^2 * sum_n |m_n(w)|^2 + |a_J(w)|^2 = 1

so analysis is an isometry and synthesis (its adjoint) inverts it exactly.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .angular import MultiplierBank

__all__ = [
    "RadialProfile",
    "SteerableFrame",
    "Pyramid",
    "MomentReport",
    "ShapeTooSmallError",
    "PartitionError",
    "make_radial",
    "build_frame",
    "analyze",
    "synthesize",
    "moments_smoke_check",
    "fft_workers",
]

PARTITION_TOL = 1e-12


class ShapeTooSmallError(ValueError):
    pass


class PartitionError(RuntimeError):
    pass


def fft_workers() -> int:
    """Worker count for scipy.fft, from ``SWT_THREADS`` (0 or unset means all cores)."""
    raw = os.environ.get("SWT_THREADS", "0").strip() or "0"
    n = int(raw)
    return n if n > 0 else (os.cpu_count() or 1)


def _meyer_poly(t):
    # C^3 transition: 0 -> 1 on [0, 1] with nu(t) + nu(1 - t) = 1
    t = np.clip(t, 0.0, 1.0)
    return t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)


@dataclass(frozen=True)
class RadialProfile:
    """Band-limited radial window ``h`` on [0, inf) with dyadic telescoping.

    Nonzero only on (1/8, 1/2); ``h(1/4) = 1`` and
    ``h(w)^2 + h(2w)^2 = 1`` for w in (1/8, 1/4].
    """

    kind: str
    breakpoints: tuple = (0.125, 0.25)

    def __call__(self, w):
        w = np.asarray(w, dtype=np.float64)
        warp = (lambda t: t) if self.kind == "simoncelli-logcos" else _meyer_poly
        out = np.zeros_like(w)
        rise = (w > 0.125) & (w <= 0.25)
        fall = (w > 0.25) & (w <= 0.5)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[rise] = np.sin(np.pi / 2 * warp(np.log2(8 * w[rise])))
            out[fall] = np.cos(np.pi / 2 * warp(np.log2(4 * w[fall])))
        return out if out.ndim else float(out)

    @property
    def support(self) -> tuple[float, float]:
        return (0.125, 0.5)


def make_radial(kind: str = "simoncelli-logcos") -> RadialProfile:
    """``simoncelli-logcos`` (log-cosine bands) or ``meyer-smooth`` (C^3 transitions)."""
    if kind not in ("simoncelli-logcos", "meyer-smooth"):
        raise ValueError(f"unknown radial profile {kind!r}")
    return RadialProfile(kind)


@dataclass(frozen=True)
class SteerableFrame:
    shape: tuple
    J: int
    radial: RadialProfile
    bank: MultiplierBank
    radial_windows: np.ndarray = field(repr=False)
    lowpass: np.ndarray = field(repr=False)
    multipliers: np.ndarray = field(repr=False)
    partition_residual: float = 0.0

    @property
    def n_channels(self) -> int:
        return self.bank.n_channels

    def manifest(self) -> dict:
        return {
            "shape": list(self.shape),
            "J": self.J,
            "n_max": self.n_channels,
            "bank": self.bank.descriptor(),
            "radial": self.radial.kind,
        }


@dataclass
class Pyramid:
    """Coefficients per (scale, channel) at full resolution, plus the lowpass residual.

    ``bands`` has shape ``(J, n_channels) + shape``.
    """

    bands: np.ndarray
    lowpass: np.ndarray
    manifest: dict

    @property
    def J(self) -> int:
        return self.bands.shape[0]

    @property
    def n_channels(self) -> int:
        return self.bands.shape[1]

    def band(self, j: int, n: int) -> np.ndarray:
        return self.bands[j, n]

    def n_arrays(self) -> int:
        return self.J * self.n_channels + 1

    def energy(self) -> float:
        return float((np.abs(self.bands) ** 2).sum() + (np.abs(self.lowpass) ** 2).sum())

    def copy(self, bands=None, lowpass=None) -> "Pyramid":
        bands = self.bands.copy() if bands is None else bands
        lowpass = self.lowpass.copy() if lowpass is None else lowpass
        manifest = dict(self.manifest)
        out = Pyramid(bands, lowpass, manifest)
        out.manifest["energy"] = out.energy()
        return out


def frequency_grid(shape) -> np.ndarray:
    """DFT frequencies in cycles/sample, shape ``shape + (d,)``, in FFT order."""
    axes = [np.fft.fftfreq(n) for n in shape]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def build_frame(shape, J: int, radial: RadialProfile, bank: MultiplierBank) -> SteerableFrame:
    """Sample all windows on the DFT grid and check the discrete partition of unity.

    The DC bin belongs entirely to the lowpass window; multipliers are 0 there.
    """
    shape = tuple(int(s) for s in shape)
    if J < 0:
        raise ValueError("J must be >= 0")
    if len(shape) != bank.d:
        raise ValueError(f"grid has {len(shape)} dimensions but bank has d={bank.d}")
    need = 4 * 2**J
    if min(shape) < need:
        raise ShapeTooSmallError(f"grid shape {shape} too small for J={J}: every side must be >= {need}")
    freqs = frequency_grid(shape)
    radius = np.linalg.norm(freqs, axis=-1)
    radial_windows = np.stack([radial(2.0**j * radius) for j in range(J)]) if J else np.zeros((0,) + shape)
    band_sq = (radial_windows**2).sum(axis=0)
    lowpass = np.sqrt(np.clip(1.0 - band_sq, 0.0, None))
    multipliers = bank.evaluate(freqs, zero_value=0.0)
    angular_sq = (np.abs(multipliers) ** 2).sum(axis=0)
    residual = float(np.abs(band_sq * angular_sq + lowpass**2 - 1.0).max())
    if residual > PARTITION_TOL:
        raise PartitionError(f"discrete partition of unity violated by {residual:.3e}")
    for arr in (radial_windows, lowpass, multipliers):
        arr.setflags(write=False)
    return SteerableFrame(shape, int(J), radial, bank, radial_windows, lowpass, multipliers, residual)


def analyze(signal, frame: SteerableFrame) -> Pyramid:
    """Coefficients ``IDFT(conj(m_n) h_j F)`` for every scale/channel, and ``IDFT(a_J F)``."""
    f = np.asarray(signal)
    if f.shape != frame.shape:
        raise ValueError(f"signal shape {f.shape} does not match frame shape {frame.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("signal contains non-finite values")
    workers = fft_workers()
    fhat = sfft.fftn(f, workers=workers)
    bands = np.empty((frame.J, frame.n_channels) + frame.shape, dtype=np.complex128)
    conj_m = np.conj(frame.multipliers)
    for j in range(frame.J):
        filtered = frame.radial_windows[j] * fhat
        for n in range(frame.n_channels):
            bands[j, n] = sfft.ifftn(conj_m[n] * filtered, workers=workers)
    low = sfft.ifftn(frame.lowpass * fhat, workers=workers).astype(np.complex128)
    pyr = Pyramid(bands, low, frame.manifest())
    pyr.manifest["energy"] = pyr.energy()
    return pyr


def _check_manifest(pyramid: Pyramid, frame: SteerableFrame) -> None:
    got = (tuple(pyramid.lowpass.shape), pyramid.J, pyramid.n_channels)
    want = (frame.shape, frame.J, frame.n_channels)
    if got != want:
        raise ValueError(f"pyramid layout {got} does not match frame {want}")
    desc = pyramid.manifest.get("bank")
    if desc is not None and desc.get("design_checksum") != frame.bank.descriptor().get("design_checksum"):
        raise ValueError("pyramid was produced with a different design")


def synthesize(pyramid: Pyramid, frame: SteerableFrame) -> np.ndarray:
    """Adjoint of :func:`analyze`; returns the real part of the reconstruction."""
    _check_manifest(pyramid, frame)
    workers = fft_workers()
    axes = tuple(range(-len(frame.shape), 0))
    acc = frame.lowpass * sfft.fftn(pyramid.lowpass, workers=workers)
    for j in range(frame.J):
        band_spec = sfft.fftn(pyramid.bands[j], axes=axes, workers=workers)
        acc += frame.radial_windows[j] * np.einsum("n...,n...->...", frame.multipliers, band_spec)
    return sfft.ifftn(acc, workers=workers).real


@dataclass
class MomentReport:
    order: int
    max_moment: dict
    unreliable_orders: list
    lowpass_moment0: float

    @property
    def max_reliable(self) -> float:
        vals = [v for k, v in self.max_moment.items() if k not in self.unreliable_orders]
        return max(vals, default=0.0)


def moments_smoke_check(frame: SteerableFrame, order: int) -> MomentReport:
    """Discrete moments of the finest-scale wavelets on the periodic grid.

    Monomials are replaced by their periodic analogues
    ``(n_i / 2 pi) sin(2 pi x_i / n_i)``, whose DFT is supported on bins
    with ``|k_i| <= alpha_i``. A moment is therefore exactly zero whenever
    the wavelet spectrum vanishes on that neighbourhood of DC; orders whose
    monomial spectrum reaches past the radial window's lower edge cannot be
    resolved on this grid and are reported as unreliable.
    """
    if frame.J == 0:
        raise ValueError("frame has no wavelet scales")
    d = len(frame.shape)
    coords = np.meshgrid(*[np.arange(n) for n in frame.shape], indexing="ij")
    mono = [(n / (2 * math.pi)) * np.sin(2 * math.pi * c / n) for c, n in zip(coords, frame.shape)]
    workers = fft_workers()
    wavelets = [sfft.ifftn(frame.multipliers[n] * frame.radial_windows[0], workers=workers) for n in range(frame.n_channels)]
    edge = frame.radial.support[0]
    max_moment, unreliable = {}, []
    for k in range(order + 1):
        worst = 0.0
        flagged = False
        for alpha in itertools.product(range(k + 1), repeat=d):
            if sum(alpha) != k:
                continue
            if math.sqrt(sum((a / n) ** 2 for a, n in zip(alpha, frame.shape))) > edge:
                flagged = True
            weight = np.ones(frame.shape)
            for m, a in zip(mono, alpha):
                weight = weight * m**a
            for psi in wavelets:
                denom = (np.abs(weight) * np.abs(psi)).sum()
                if denom > 0:
                    worst = max(worst, abs((weight * psi).sum()) / denom)
        max_moment[k] = worst
        if flagged:
            unreliable.append(k)
    low = sfft.ifftn(frame.lowpass, workers=workers)
    low0 = abs(low.sum()) / np.abs(low).sum()
    return MomentReport(order, max_moment, unreliable, float(low0))
