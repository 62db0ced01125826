"""Steering of channel coefficients under rotations.

Zonal banks steer with ``S = U_{X1} U_{X0}^T``, whose entries are values of
the reproducing kernel ``Lambda_lmax(R w_{n1} . w_{n2})``. Harmonic banks
steer degree by degree with orthogonal blocks ``V_l`` computed by design
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .angular import MultiplierBank
from .designs import SphericalDesign
from .frame import Pyramid
from .sphmath import dim_harmonics, sph_basis_eval, sphere_area

__all__ = [
    "Rotation",
    "SteeringMatrix",
    "rotation_from",
    "parse_rotation",
    "steering_kernel",
    "steering_matrix_zonal",
    "steering_matrix_harmonic",
    "harmonic_steering",
    "steer_pyramid",
]

ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class Rotation:
    matrix: np.ndarray

    def __post_init__(self):
        r = np.array(self.matrix, dtype=np.float64)
        if r.ndim != 2 or r.shape[0] != r.shape[1] or r.shape[0] < 2:
            raise ValueError(f"rotation must be a square matrix of size >= 2, got shape {r.shape}")
        ortho = float(np.abs(r.T @ r - np.eye(r.shape[0])).max())
        if ortho > ORTHO_TOL:
            raise ValueError(f"matrix is not orthogonal: max |R^T R - I| = {ortho:.3e}")
        det = float(np.linalg.det(r))
        if abs(det - 1) > ORTHO_TOL:
            raise ValueError(f"matrix is not a proper rotation: det = {det!r}")
        r.setflags(write=False)
        object.__setattr__(self, "matrix", r)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def T(self) -> "Rotation":
        return Rotation(self.matrix.T)

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation(self.matrix @ other.matrix)


def rotation_from(*, angle: float | None = None, axis=None, matrix=None) -> Rotation:
    """Rotation from a 2-D angle, a 3-D axis and angle (Rodrigues), or an explicit matrix."""
    if matrix is not None:
        return Rotation(matrix)
    if angle is None:
        raise ValueError("need an angle or an explicit matrix")
    c, s = math.cos(angle), math.sin(angle)
    if axis is None:
        return Rotation(np.array([[c, -s], [s, c]]))
    a = np.asarray(axis, dtype=np.float64)
    norm = np.linalg.norm(a)
    if a.shape != (3,) or norm == 0:
        raise ValueError("axis must be a nonzero 3-vector")
    a = a / norm
    k = np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
    return Rotation(np.eye(3) + s * k + (1 - c) * (k @ k))


def parse_rotation(text: str) -> Rotation:
    """Parse ``angle=<rad>``, ``axis=x,y,z;angle=<rad>`` or a path to a CSV matrix."""
    text = text.strip()
    if Path(text).is_file():
        return Rotation(np.loadtxt(text, delimiter=",", ndmin=2))
    fields = {}
    for part in text.split(";"):
        if "=" not in part:
            raise ValueError(f"cannot parse rotation {text!r}")
        key, _, val = part.partition("=")
        fields[key.strip().lower()] = val.strip()
    if "angle" not in fields or set(fields) - {"angle", "axis"}:
        raise ValueError(f"cannot parse rotation {text!r}")
    angle = float(fields["angle"])
    axis = [float(v) for v in fields["axis"].split(",")] if "axis" in fields else None
    return rotation_from(angle=angle, axis=axis)


def steering_kernel(d: int, lmax: int, n_max: int, x) -> np.ndarray:
    """``Lambda_lmax(x) = sum_l N(d,l)/n_max P_l(d; x)``."""
    weights = np.array([dim_harmonics(d, l) / n_max for l in range(lmax + 1)])
    x = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
    return kernels.legendre_sum(d, weights, np.ascontiguousarray(x.ravel())).reshape(x.shape)


@dataclass(frozen=True)
class SteeringMatrix:
    """Coefficient-space rotation operator, dense (zonal) or block diagonal (harmonic)."""

    kind: str
    entries: np.ndarray = field(repr=False)
    rotation: Rotation
    blocks: tuple = ()
    bank: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def steering_matrix_zonal(bank: MultiplierBank, rotation: Rotation) -> SteeringMatrix:
    """``[S]_{n1,n2} = Lambda_lmax(R w_{n1} . w_{n2})`` for a zonal bank.

    ``S`` maps the channel functions of the bank on X0 to those of the bank
    with the same coefficients on ``X1 = R X0``. The identity
    ``U1 C Y = U1 U0^T U0 C Y`` holds for any per-degree weights, so ``c``
    need not be flat.
    """
    if bank.kind != "zonal":
        raise ValueError("zonal steering needs a zonal bank")
    if rotation.d != bank.d:
        raise ValueError("rotation dimension does not match bank")
    pts = bank.design.points
    dots = (pts @ rotation.matrix.T) @ pts.T
    s = steering_kernel(bank.d, bank.lmax, bank.design.n, dots)
    s.setflags(write=False)
    return SteeringMatrix("zonal", s, rotation, bank=bank.descriptor())


def steering_matrix_harmonic(d: int, l: int, rotation: Rotation, quad: SphericalDesign) -> np.ndarray:
    """Block ``V_l`` with ``sum_k V[k0, k] Y_{l,k}(w) = Y_{l,k0}(R w)``.

    Entries are the inner products ``<Y_{l,k0}(R .), Y_{l,k}>`` evaluated by
    equal-weight quadrature on ``quad``, exact for strength >= 2l.
    """
    if quad.d != d or rotation.d != d:
        raise ValueError("dimension mismatch between rotation, design and d")
    if quad.strength < 2 * l:
        raise ValueError(f"harmonic steering of degree {l} needs a {2 * l}-design; {quad.source} has strength {quad.strength}")
    y = sph_basis_eval(d, l, quad.points)
    y_rot = sph_basis_eval(d, l, quad.points @ rotation.matrix.T)
    return sphere_area(d) / quad.n * (y_rot.T @ y)


def harmonic_steering(bank: MultiplierBank, rotation: Rotation, quad: SphericalDesign) -> SteeringMatrix:
    """Block-diagonal steering for every degree present in a harmonic bank.

    Blocks are built from ``R^T`` so that, as in the zonal case, the steered
    coefficients are those of the wavelets rotated by ``R``:
    ``S m(w) = m(R^T w)``.
    """
    if bank.kind != "harmonic":
        raise ValueError("harmonic steering needs a harmonic bank")
    blocks = [steering_matrix_harmonic(bank.d, l, rotation.T, quad) for l, _ in bank.degree_layout()]
    size = sum(b.shape[0] for b in blocks)
    full = np.zeros((size, size))
    at = 0
    for b in blocks:
        full[at:at + b.shape[0], at:at + b.shape[0]] = b
        at += b.shape[0]
    full.setflags(write=False)
    return SteeringMatrix("harmonic-block", full, rotation, tuple(blocks), bank.descriptor())


def steer_pyramid(pyramid: Pyramid, steer: SteeringMatrix) -> Pyramid:
    """Left-multiply the channel vector at every scale and position; lowpass untouched."""
    if steer.size != pyramid.n_channels:
        raise ValueError(f"steering matrix of size {steer.size} does not fit {pyramid.n_channels} channels")
    bands = np.einsum("ab,jb...->ja...", steer.entries, pyramid.bands)
    out = pyramid.copy(bands=bands, lowpass=pyramid.lowpass.copy())
    out.manifest["steered"] = {"kind": steer.kind, "rotation": steer.rotation.matrix.tolist()}
    return out
