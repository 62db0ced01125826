"""Generate the built-in 120-point spherical 11-design on S^2.

The point set is the union of two orbits of the icosahedral rotation group
(60 elements).  Group averaging kills every harmonic of degree <= 11 except
the invariants of degree 6 and 10, so two orbit representatives are chosen to
cancel those two invariants.  Output is polished with least squares and
written in the design-file format.

Usage: python tools/make_icosahedral_design.py OUT_PATH
"""
import sys

import numpy as np
from scipy.optimize import least_squares
from scipy.special import eval_legendre

from steerwave.sphmath import sph_basis_eval

PHI = (1 + 5**0.5) / 2


def rotation(axis, angle):
    axis = np.asarray(axis, float) / np.linalg.norm(axis)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * k @ k


def icosahedral_group():
    gens = [rotation([0, 1, PHI], 2 * np.pi / 5), rotation([1, 1, 1], 2 * np.pi / 3)]
    group = [np.eye(3)]
    frontier = [np.eye(3)]
    while frontier:
        new = []
        for g in frontier:
            for h in gens:
                m = h @ g
                if not any(np.abs(m - e).max() < 1e-9 for e in group):
                    group.append(m)
                    new.append(m)
        frontier = new
    assert len(group) == 60
    return np.array(group)


def unit(angles):
    th, ph = angles
    return np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])


def residuals(params, group):
    # linear residuals (harmonic sums), so the fit reaches machine precision
    pts = np.concatenate([group @ unit(params[:2]), group @ unit(params[2:])])
    return np.concatenate([sph_basis_eval(3, l, pts).sum(axis=0) / len(pts) for l in (6, 10)])


def main(out):
    group = icosahedral_group()
    rng = np.random.default_rng(7)
    best = None
    for _ in range(200):
        x0 = rng.uniform([0, 0, 0, 0], [np.pi, 2 * np.pi, np.pi, 2 * np.pi])
        sol = least_squares(residuals, x0, args=(group,), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if best is None or sol.cost < best.cost:
            best = sol
        if best.cost < 1e-30:
            break
    pts = np.concatenate([group @ unit(best.x[:2]), group @ unit(best.x[2:])])
    gram = np.clip(pts @ pts.T, -1, 1)
    for l in range(1, 14):
        print(l, (2 * l + 1) * eval_legendre(l, gram).sum() / len(pts) ** 2)
    with open(out, "w") as fh:
        fh.write("# 120-point spherical 11-design on S^2 (two icosahedral orbits)\n")
        for p in pts:
            fh.write(" ".join(f"{v:.17g}" for v in p) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
