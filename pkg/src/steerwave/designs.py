"""Spherical t-designs: built-ins, file I/O, verification, characteristic matrices."""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels
from .sphmath import dim_harmonics, dim_harmonics_upto, sph_basis_eval, sph_basis_upto, sphere_area

__all__ = [
    "SphericalDesign",
    "DesignReport",
    "CharacteristicMatrix",
    "DesignError",
    "DesignParseError",
    "DesignVerificationError",
    "InsufficientStrengthWarning",
    "builtin_design",
    "builtin_names",
    "resolve_design",
    "load_design",
    "read_design_points",
    "save_design",
    "format_design",
    "verify_design",
    "characteristic_matrix",
]

DESIGN_TOL = 1e-10
NORM_REJECT_TOL = 1e-6
_PHI = (1 + math.sqrt(5)) / 2


class DesignError(ValueError):
    pass


class DesignParseError(DesignError):
    pass


class DesignVerificationError(DesignError):
    def __init__(self, report: "DesignReport"):
        self.report = report
        deg = report.first_failure
        super().__init__(
            f"design fails quadrature exactness at degree {deg} "
            f"(residual {report.residuals[deg]:.3e} >= {report.tol:g})"
        )


class InsufficientStrengthWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SphericalDesign:
    """Equal-weight point set on S^{d-1} with a (verified) design strength."""

    points: np.ndarray
    strength: int
    source: str

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] < 2:
            raise DesignError(f"design points must be a non-empty (n, d) array with d >= 2, got {pts.shape}")
        if np.abs(np.linalg.norm(pts, axis=1) - 1).max() > 1e-12:
            raise DesignError("design points must be unit vectors")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def checksum(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.points, dtype="<f8").tobytes()).hexdigest()

    def rotated(self, matrix) -> "SphericalDesign":
        """Design with every point rotated by ``matrix`` (strength is rotation invariant)."""
        pts = self.points @ np.asarray(matrix, dtype=np.float64).T
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        return SphericalDesign(pts, self.strength, f"{self.source}@rotated")


@dataclass(frozen=True)
class DesignReport:
    """Per-degree quadrature residuals of a point set."""

    residuals: dict[int, float]
    tol: float = DESIGN_TOL

    @property
    def passed(self) -> bool:
        return all(r < self.tol for r in self.residuals.values())

    @property
    def first_failure(self) -> int | None:
        for deg in sorted(self.residuals):
            if not self.residuals[deg] < self.tol:
                return deg
        return None

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def lines(self) -> list[str]:
        return [
            f"degree {deg:3d}  residual {res:.3e}  {'ok' if res < self.tol else 'FAIL'}"
            for deg, res in sorted(self.residuals.items())
        ]


@dataclass(frozen=True)
class CharacteristicMatrix:
    """Scaled harmonic evaluations ``sqrt(sigma/n) Y_m(w_n)`` at design points."""

    design: SphericalDesign
    lmax: int
    entries: np.ndarray = field(repr=False)

    def isometry_defect(self) -> float:
        u = self.entries
        return float(np.abs(u.T @ u - np.eye(u.shape[1])).max())


# ----------------------------------------------------------------------------
# verification


def _explicit_residual(points: np.ndarray, l: int) -> float:
    d = points.shape[1]
    y = sph_basis_eval(d, l, points)
    return float(np.abs(sphere_area(d) / len(points) * y.sum(axis=0)).max())


def _zonal_residual(points: np.ndarray, l: int) -> float:
    d, n = points.shape[1], points.shape[0]
    gram = np.clip(points @ points.T, -1.0, 1.0).ravel()
    weights = np.zeros(l + 1)
    weights[l] = 1.0
    total = kernels.legendre_sum(d, weights, np.ascontiguousarray(gram)).sum()
    return float(abs(dim_harmonics(d, l) * total / n**2))


def verify_design(design, t: int, tol: float = DESIGN_TOL) -> DesignReport:
    """Check equal-weight quadrature exactness for every degree 1..t.

    For d in (2, 3) the residual is the larger of the explicit-basis residual
    ``max_k |sigma/n sum_n Y_{l,k}(w_n)|`` and the zonal Gram residual
    ``|N(d,l)/n^2 sum_{n,n'} P_l(d; w_n . w_n')|``. For d >= 4 only the zonal
    residual is available. Degree 0 is exact for equal weights and omitted.
    """
    points = design.points if isinstance(design, SphericalDesign) else np.asarray(design, dtype=np.float64)
    if len(points) == 0:
        raise DesignError("cannot verify an empty design")
    d = points.shape[1]
    residuals = {}
    for l in range(1, int(t) + 1):
        res = _zonal_residual(points, l)
        if d in (2, 3):
            res = max(res, _explicit_residual(points, l))
        residuals[l] = res
    return DesignReport(residuals, tol)


# ----------------------------------------------------------------------------
# built-ins


def _equiangular(n: int) -> np.ndarray:
    ang = 2 * np.pi * np.arange(n) / n
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def _icosahedron() -> np.ndarray:
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            base = np.array([0.0, s1, s2 * _PHI])
            pts.extend(np.roll(base, k) for k in range(3))
    return np.array(pts) / math.sqrt(1 + _PHI**2)


def _dodecahedron() -> np.ndarray:
    pts = [np.array([a, b, c], float) for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    for s1 in (1, -1):
        for s2 in (1, -1):
            base = np.array([0.0, s1 / _PHI, s2 * _PHI])
            pts.extend(np.roll(base, k) for k in range(3))
    return np.array(pts) / math.sqrt(3)


def _octahedron() -> np.ndarray:
    return np.concatenate([np.eye(3), -np.eye(3)])


def _cube() -> np.ndarray:
    return np.array([[a, b, c] for a in (1, -1) for b in (1, -1) for c in (1, -1)], float) / math.sqrt(3)


def _icosahedral120() -> np.ndarray:
    text = resources.files("steerwave").joinpath("data/icosahedral120.txt").read_text()
    pts = _parse_points(text, 3)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


_BUILTINS = {
    "icosahedron": (_icosahedron, 4),
    "dodecahedron": (_dodecahedron, 4),
    "octahedron": (_octahedron, 3),
    "cube": (_cube, 3),
    "icosahedral120": (_icosahedral120, 11),
}


def builtin_names() -> list[str]:
    return ["equiangular"] + sorted(_BUILTINS)


def builtin_design(name: str, n: int | None = None) -> SphericalDesign:
    """Named design with its known strength.

    ``equiangular`` needs ``n`` and gives n points on S^1 with strength n - 1.
    Polyhedral designs live on S^2: icosahedron and dodecahedron (strength 4),
    octahedron and cube (strength 3), and ``icosahedral120``, a 120-point
    11-design built from two icosahedral-group orbits.
    """
    key = name.lower()
    if key == "equiangular":
        if n is None or n < 1:
            raise DesignError("equiangular design needs a point count n >= 1")
        return SphericalDesign(_equiangular(int(n)), int(n) - 1, f"equiangular({int(n)})")
    if key not in _BUILTINS:
        raise DesignError(f"unknown built-in design {name!r}; choose from {builtin_names()}")
    make, strength = _BUILTINS[key]
    return SphericalDesign(make(), strength, key)


def resolve_design(text: str, d: int | None = None, claimed_t: int | None = None) -> SphericalDesign:
    """Resolve ``name``, ``equiangular:<n>`` / ``equiangular(<n>)`` or a file path."""
    text = text.strip()
    low = text.lower()
    for prefix in ("equiangular:", "equiangular(", "equiangular"):
        if low.startswith(prefix) and low[len(prefix):].rstrip(")").isdigit():
            return builtin_design("equiangular", int(low[len(prefix):].rstrip(")")))
    if low in _BUILTINS:
        return builtin_design(low)
    path = Path(text)
    if not path.exists():
        raise FileNotFoundError(f"no built-in design or file named {text!r}")
    if d is None or claimed_t is None:
        raise DesignError("loading a design file requires d and claimed_t")
    return load_design(path, d, claimed_t)


# ----------------------------------------------------------------------------
# file I/O


def _parse_points(text: str, d: int) -> np.ndarray:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.replace(",", " ").split()])
        except ValueError as exc:
            raise DesignParseError(f"bad number in design file: {line!r}") from exc
    if not rows:
        raise DesignParseError("design file contains no points")
    widths = {len(r) for r in rows}
    if widths == {d}:
        return np.array(rows)
    if len(rows) > 1 and len(widths) == 1 and 1 not in widths:
        raise DesignParseError(f"design file has {widths.pop()} coordinates per line, expected d={d}")
    # flat stream: one number per line, or everything on one line
    flat = [v for r in rows for v in r]
    if len(flat) % d:
        raise DesignParseError(f"cannot split {len(flat)} coordinates into points of dimension {d}")
    return np.array(flat).reshape(-1, d)


def read_design_points(path, d: int) -> np.ndarray:
    """Parse and renormalize the points of a design file without verifying it."""
    pts = _parse_points(Path(path).read_text(), int(d))
    norms = np.linalg.norm(pts, axis=1)
    bad = np.abs(norms - 1) > NORM_REJECT_TOL
    if bad.any():
        i = int(np.argmax(bad))
        raise DesignParseError(f"point {i} has norm {norms[i]!r}, not unit length")
    # already-unit points are kept verbatim so save/load cycles are byte-stable
    fix = np.abs(norms - 1) > 4 * np.finfo(float).eps
    pts[fix] /= norms[fix, None]
    return pts


def load_design(path, d: int, claimed_t: int) -> SphericalDesign:
    """Read a design file and verify its claimed strength.

    Accepts one point per line or a flat stream of n*d numbers. Lines starting
    with ``#`` are comments. Points are renormalized; a norm off by more than
    1e-6 is treated as corruption and rejected.
    """
    pts = read_design_points(path, d)
    report = verify_design(pts, claimed_t)
    if not report.passed:
        raise DesignVerificationError(report)
    return SphericalDesign(pts, int(claimed_t), str(path))


def format_design(design: SphericalDesign) -> str:
    return "".join(" ".join(f"{v:.17g}" for v in p) + "\n" for p in design.points)


def save_design(design: SphericalDesign, path) -> None:
    """Write n lines of d coordinates at 17 significant digits."""
    Path(path).write_text(format_design(design), newline="\n")


# ----------------------------------------------------------------------------
# characteristic matrix


def characteristic_matrix(design: SphericalDesign, lmax: int) -> CharacteristicMatrix:
    """``U[n, m] = sqrt(sigma/n_max) Y_m(w_n)`` over all harmonics of degree <= lmax.

    The columns are orthonormal when the design has strength >= 2*lmax; with a
    weaker design the matrix is still returned, with an
    :class:`InsufficientStrengthWarning`.
    """
    d = design.d
    if design.strength < 2 * lmax:
        warnings.warn(
            f"design {design.source} has strength {design.strength} < {2 * lmax}; "
            "characteristic matrix is not guaranteed to be an isometry",
            InsufficientStrengthWarning,
            stacklevel=2,
        )
    u = math.sqrt(sphere_area(d) / design.n) * sph_basis_upto(d, lmax, design.points)
    assert u.shape == (design.n, dim_harmonics_upto(d, lmax))
    u.setflags(write=False)
    return CharacteristicMatrix(design, int(lmax), u)
