import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from steerwave.designs import builtin_design
from steerwave.frame import make_radial
from steerwave.sphmath import (
    dim_harmonics,
    dim_harmonics_upto,
    legendre,
    legendre_table,
    radial_profile_spatial,
    sph_basis_eval,
    sph_basis_upto,
    sphere_area,
)


def explicit_legendre(d, ell, x):
    # factorial-sum form, kept here as an independent oracle for the recurrence
    total = 0.0
    for l in range(ell // 2 + 1):
        total += (-0.25) ** l * (1 - x * x) ** l * x ** (ell - 2 * l) / (
            math.factorial(l) * math.factorial(ell - 2 * l) * math.gamma(l + (d - 1) / 2)
        )
    return math.factorial(ell) * math.gamma((d - 1) / 2) * total


def random_unit(rng, d, count):
    g = rng.standard_normal((count, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@pytest.mark.parametrize("d,l,expected", [(2, 3, 2), (3, 2, 5), (5, 0, 1), (2, 0, 1), (3, 10, 21), (4, 2, 9)])
def test_dim_harmonics_examples(d, l, expected):
    assert dim_harmonics(d, l) == expected


@pytest.mark.parametrize("d,lmax,expected", [(3, 10, 121), (2, 4, 9), (3, 0, 1)])
def test_dim_harmonics_upto_examples(d, lmax, expected):
    assert dim_harmonics_upto(d, lmax) == expected


def test_dim_harmonics_upto_is_the_sum():
    for d in range(2, 9):
        for L in range(21):
            assert dim_harmonics_upto(d, L) == sum(dim_harmonics(d, l) for l in range(L + 1))


def test_dim_harmonics_rejects_bad_arguments():
    with pytest.raises(ValueError):
        dim_harmonics(1, 2)
    with pytest.raises(ValueError):
        dim_harmonics(3, -1)


@pytest.mark.parametrize("d,expected", [(2, 6.283185307179586), (3, 12.566370614359172), (4, 19.739208802178716)])
def test_sphere_area(d, expected):
    assert sphere_area(d) == pytest.approx(expected, rel=1e-15)


def test_legendre_examples():
    for d in (2, 3, 5, 9):
        assert legendre(d, 1, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert legendre(3, 2, 0.5) == pytest.approx(-0.125, abs=1e-15)
    assert legendre(7, 5, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_legendre_d2_is_chebyshev():
    x = np.linspace(-1, 1, 101)
    table = legendre_table(2, 8, x)
    for l in range(9):
        assert np.allclose(table[l], np.cos(l * np.arccos(x)), atol=1e-13)


def test_legendre_matches_explicit_sum():
    rng = np.random.default_rng(7)
    xs = rng.uniform(-1, 1, 50)
    worst = 0.0
    for d in range(2, 7):
        table = legendre_table(d, 12, xs)
        for ell in range(13):
            for x, got in zip(xs, table[ell]):
                worst = max(worst, abs(got - explicit_legendre(d, ell, x)))
    assert worst < 1e-9


def test_legendre_bounded_on_interval():
    x = np.linspace(-1, 1, 10_000)
    for d in range(2, 9):
        table = legendre_table(d, 30, x)
        assert np.abs(table).max() <= 1 + 1e-12
        assert np.allclose(table[:, -1], 1.0, atol=1e-12)


def test_legendre_argument_checks():
    assert legendre(3, 4, 1 + 1e-14) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        legendre(3, 2, 1.01)


@given(st.integers(2, 10), st.integers(0, 20), st.floats(-1, 1))
def test_legendre_parity(d, l, x):
    assert legendre(d, l, -x) == pytest.approx((-1) ** l * legendre(d, l, x), abs=1e-12)


def test_basis_d2_examples():
    assert np.allclose(sph_basis_eval(2, 0, [0.3, 0.4]), [1 / math.sqrt(2 * math.pi)])
    p = [math.cos(math.pi / 4), math.sin(math.pi / 4)]
    assert np.allclose(sph_basis_eval(2, 2, p), [0.0, 1 / math.sqrt(math.pi)], atol=1e-15)


def test_basis_d3_degree_one():
    rng = np.random.default_rng(3)
    u, v = random_unit(rng, 3, 2)
    lhs = sph_basis_eval(3, 1, u) @ sph_basis_eval(3, 1, v)
    assert lhs == pytest.approx(3 / (4 * math.pi) * (u @ v), abs=1e-15)


@pytest.mark.parametrize("d", [2, 3])
def test_addition_formula(d):
    rng = np.random.default_rng(d)
    u = random_unit(rng, d, 100)
    v = random_unit(rng, d, 100)
    worst = 0.0
    for l in range(9):
        lhs = (sph_basis_eval(d, l, u) * sph_basis_eval(d, l, v)).sum(axis=1)
        rhs = dim_harmonics(d, l) / sphere_area(d) * legendre_table(d, l, (u * v).sum(axis=1))[l]
        worst = max(worst, np.abs(lhs - rhs).max())
    assert worst < 1e-10


def test_basis_shapes_and_homogeneity():
    pts = np.array([[0.0, 0.0, 2.0], [1.0, 1.0, 1.0]])
    assert sph_basis_eval(3, 4, pts).shape == (2, 9)
    assert sph_basis_upto(3, 4, pts).shape == (2, 25)
    assert np.allclose(sph_basis_upto(3, 4, pts), sph_basis_upto(3, 4, pts * 3.5))
    with pytest.raises(NotImplementedError):
        sph_basis_eval(4, 1, [1.0, 0, 0, 0])


def test_radial_profile_zero_window():
    assert radial_profile_spatial(lambda s: 0.0, 3, 2, 1.5) == 0.0


def test_radial_profile_d2_matches_fft_oracle():
    h = make_radial("simoncelli-logcos")
    n, dx = 1024, 1 / 8
    w = np.fft.fftfreq(n, d=dx)
    wx, wy = np.meshgrid(w, w, indexing="ij")
    spatial = np.fft.ifft2(h(np.hypot(wx, wy))).real / dx**2
    oracle = spatial[8, 0]  # r = 1
    assert radial_profile_spatial(h, 2, 0, 1.0) == pytest.approx(oracle, rel=1e-3)


def test_radial_profile_accepts_samples():
    h = make_radial("simoncelli-logcos")
    s = np.linspace(0, 0.5, 20001)
    direct = radial_profile_spatial(h, 2, 0, 0.5)
    sampled = radial_profile_spatial((s, h(s)), 2, 0, 0.5)
    assert sampled == pytest.approx(direct, rel=1e-4)


def test_radial_profile_degree_one_has_mean_zero():
    # psi(x) = F(|x|) Y_1(x/|x|); its ball integral factors into a radial and a spherical part
    h = make_radial("simoncelli-logcos")
    r = np.linspace(1e-3, 20, 601)
    F = np.array([radial_profile_spatial(h, 3, 1, ri) for ri in r])
    signed_radial = trapezoid(F * r**2, r)
    abs_radial = trapezoid(np.abs(F) * r**2, r)
    quad = builtin_design("icosahedral120")
    y = sph_basis_eval(3, 1, quad.points)
    sphere_integral = sphere_area(3) / quad.n * y.sum(axis=0)
    sphere_abs = sphere_area(3) / quad.n * np.abs(y).sum(axis=0)
    ratio = np.abs(signed_radial * sphere_integral) / (abs_radial * sphere_abs)
    assert abs_radial > 0
    assert ratio.max() < 1e-6


def test_radial_profile_rejects_nonpositive_r():
    with pytest.raises(ValueError):
        radial_profile_spatial(make_radial(), 2, 0, 0.0)
