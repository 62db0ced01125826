import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steerwave.angular import AngularCoeffs, harmonic_bank, window_coeffs, zonal_bank
from steerwave.designs import builtin_design
from steerwave.frame import (
    PartitionError,
    Pyramid,
    ShapeTooSmallError,
    analyze,
    build_frame,
    frequency_grid,
    make_radial,
    moments_smoke_check,
    synthesize,
)


@pytest.fixture(scope="module")
def frame2d():
    bank = zonal_bank(builtin_design("equiangular", 12), window_coeffs("cubic", 3, 2))
    return build_frame((64, 64), 4, make_radial(), bank)


@pytest.fixture(scope="module")
def frame3d():
    bank = zonal_bank(builtin_design("icosahedron"), window_coeffs("cubic", 2, 3))
    return build_frame((32, 32, 32), 2, make_radial(), bank)


@pytest.mark.parametrize("kind", ["simoncelli-logcos", "meyer-smooth"])
def test_radial_values(kind):
    h = make_radial(kind)
    assert h(0.25) == pytest.approx(1.0, abs=1e-15)
    assert h(0.5) == pytest.approx(0.0, abs=1e-15)
    assert h(0.125) == 0.0
    assert h(0.6) == 0.0
    assert h(0.0) == 0.0


@pytest.mark.parametrize("kind", ["simoncelli-logcos", "meyer-smooth"])
def test_radial_telescoping(kind):
    h = make_radial(kind)
    w = np.linspace(0.125, 0.25, 10_001)[1:]
    assert np.abs(h(w) ** 2 + h(2 * w) ** 2 - 1).max() < 1e-12
    w = np.geomspace(1e-6, 0.5, 20_000)
    total = sum(h(2.0**j * w) ** 2 for j in range(-2, 25))
    assert np.abs(total - 1).max() < 1e-12


def test_radial_rejects_unknown():
    with pytest.raises(ValueError):
        make_radial("gabor")


def test_frequency_grid_order():
    g = frequency_grid((4, 6))
    assert g.shape == (4, 6, 2)
    assert np.allclose(g[1, 0], [0.25, 0.0]) and np.allclose(g[0, 5], [0.0, -1 / 6])


def test_partition_harmonic_64():
    bank = harmonic_bank(2, window_coeffs("cubic", 1, 2))
    frame = build_frame((64, 64), 3, make_radial(), bank)
    assert frame.partition_residual < 1e-12
    assert frame.n_channels == 3


def test_partition_error_on_bad_bank():
    bank = harmonic_bank(2, window_coeffs("cubic", 1, 2))

    class Loud(type(bank)):
        def evaluate(self, points, zero_value=0.0):
            return 1.01 * super().evaluate(points, zero_value)

    loud = Loud(bank.d, bank.kind, bank.coeffs, bank.design, bank.labels)
    with pytest.raises(PartitionError):
        build_frame((32, 32), 2, make_radial(), loud)


def test_shape_and_dimension_checks():
    bank = harmonic_bank(2, window_coeffs("cubic", 1, 2))
    with pytest.raises(ShapeTooSmallError):
        build_frame((8, 8), 3, make_radial(), bank)
    build_frame((32, 32), 3, make_radial(), bank)
    with pytest.raises(ValueError):
        build_frame((32, 32, 32), 2, make_radial(), bank)
    with pytest.raises(ValueError):
        build_frame((32, 32), -1, make_radial(), bank)


def test_lowpass_only_frame():
    bank = harmonic_bank(2, window_coeffs("cubic", 2, 2))
    frame = build_frame((16, 16), 0, make_radial(), bank)
    f = np.random.default_rng(0).standard_normal((16, 16))
    pyr = analyze(f, frame)
    assert pyr.bands.shape == (0, bank.n_channels, 16, 16)
    assert np.allclose(pyr.lowpass, f, atol=1e-13)
    assert np.allclose(synthesize(pyr, frame), f, atol=1e-13)


def test_single_channel_is_isotropic_frame():
    bank = harmonic_bank(2, AngularCoeffs(2, [1.0]))
    frame = build_frame((64, 64), 3, make_radial(), bank)
    assert frame.n_channels == 1
    radius = np.linalg.norm(frequency_grid((64, 64)), axis=-1)
    live = radius > 0
    assert np.allclose(frame.multipliers[0][live], 1.0)
    for j in range(3):
        assert np.allclose(frame.radial_windows[j], make_radial()(2.0**j * radius))


def test_parseval_and_reconstruction_2d(frame2d):
    rng = np.random.default_rng(11)
    for _ in range(5):
        f = rng.standard_normal((64, 64))
        pyr = analyze(f, frame2d)
        assert abs(pyr.energy() - (f**2).sum()) / (f**2).sum() < 1e-9
        assert np.linalg.norm(synthesize(pyr, frame2d) - f) / np.linalg.norm(f) < 1e-9


def test_parseval_and_reconstruction_3d(frame3d):
    f = np.random.default_rng(12).standard_normal((32, 32, 32))
    pyr = analyze(f, frame3d)
    assert abs(pyr.energy() - (f**2).sum()) / (f**2).sum() < 1e-9
    assert np.linalg.norm(synthesize(pyr, frame3d) - f) / np.linalg.norm(f) < 1e-9


def test_meyer_radial_reconstructs():
    bank = harmonic_bank(3, window_coeffs("bspline3", 2, 3))
    frame = build_frame((16, 16, 32), 2, make_radial("meyer-smooth"), bank)
    f = np.random.default_rng(13).standard_normal((16, 16, 32))
    assert np.linalg.norm(synthesize(analyze(f, frame), frame) - f) / np.linalg.norm(f) < 1e-9


def test_constant_signal(frame2d):
    f = np.full((64, 64), 3.0)
    pyr = analyze(f, frame2d)
    assert np.abs(pyr.bands).max() < 1e-12
    assert np.linalg.norm(pyr.lowpass) == pytest.approx(np.linalg.norm(f), rel=1e-12)


def test_sinusoid_channel_energies(frame2d):
    n = 64
    x = np.arange(n)[:, None] * np.ones((1, n))
    f = np.cos(2 * np.pi * 0.25 * x)
    pyr = analyze(f, frame2d)
    energy = (np.abs(pyr.bands) ** 2).sum(axis=(2, 3))
    e1 = np.array([[1.0, 0.0], [-1.0, 0.0]])
    m = frame2d.bank.evaluate(e1)
    h = make_radial()(2.0 ** np.arange(frame2d.J) * 0.25)
    # each of the two bins carries |F|^2 / N = N / 4 of energy
    expected = (h**2)[:, None] * (np.abs(m) ** 2).sum(axis=1)[None, :] * (n * n / 4)
    assert np.allclose(energy, expected, rtol=1e-9, atol=1e-9)
    assert np.allclose(energy[0] / energy[0].sum(), expected[0] / expected[0].sum(), rtol=1e-9)


def test_lowpass_only_pyramid(frame2d):
    f = np.random.default_rng(14).standard_normal((64, 64))
    pyr = analyze(f, frame2d)
    kept = pyr.copy(bands=np.zeros_like(pyr.bands))
    rec = synthesize(kept, frame2d)
    expected = np.fft.ifft2(frame2d.lowpass**2 * np.fft.fft2(f)).real
    assert np.allclose(rec, expected, atol=1e-12)
    low_energy = (np.abs(pyr.lowpass) ** 2).sum()
    assert kept.energy() == pytest.approx(low_energy, rel=1e-10)


def test_zero_pyramid(frame2d):
    pyr = analyze(np.zeros((64, 64)), frame2d)
    assert np.all(synthesize(pyr, frame2d) == 0)


def test_translation_covariance(frame2d):
    f = np.random.default_rng(15).standard_normal((64, 64))
    shifted = analyze(np.roll(f, (5, -9), axis=(0, 1)), frame2d)
    base = analyze(f, frame2d)
    assert np.abs(shifted.bands - np.roll(base.bands, (5, -9), axis=(2, 3))).max() < 1e-10
    assert np.abs(shifted.lowpass - np.roll(base.lowpass, (5, -9), axis=(0, 1))).max() < 1e-10


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_linearity(frame2d, a, b, seed):
    rng = np.random.default_rng(seed)
    f, g = rng.standard_normal((2, 64, 64))
    lhs = analyze(a * f + b * g, frame2d)
    pf, pg = analyze(f, frame2d), analyze(g, frame2d)
    assert np.abs(lhs.bands - (a * pf.bands + b * pg.bands)).max() < 1e-10
    assert np.abs(lhs.lowpass - (a * pf.lowpass + b * pg.lowpass)).max() < 1e-10


def test_channel_count(frame2d, frame3d):
    for frame in (frame2d, frame3d):
        pyr = analyze(np.zeros(frame.shape), frame)
        assert pyr.n_arrays() == frame.n_channels * frame.J + 1


def test_analysis_input_checks(frame2d):
    with pytest.raises(ValueError):
        analyze(np.zeros((32, 32)), frame2d)
    bad = np.zeros((64, 64))
    bad[3, 3] = np.nan
    with pytest.raises(ValueError):
        analyze(bad, frame2d)


def test_synthesis_layout_check(frame2d, frame3d):
    pyr = analyze(np.zeros((64, 64)), frame2d)
    with pytest.raises(ValueError):
        synthesize(Pyramid(pyr.bands[:2], pyr.lowpass, pyr.manifest), frame2d)
    other = zonal_bank(builtin_design("equiangular", 12).rotated([[0.0, -1.0], [1.0, 0.0]]), window_coeffs("cubic", 3, 2))
    with pytest.raises(ValueError):
        synthesize(pyr, build_frame((64, 64), 4, make_radial(), other))


def test_moments(frame2d):
    report = moments_smoke_check(frame2d, 3)
    assert report.unreliable_orders == []
    assert report.max_reliable < 1e-8
    assert report.lowpass_moment0 > 0.1


def test_moments_flag_unresolved_orders():
    bank = harmonic_bank(2, window_coeffs("cubic", 1, 2))
    frame = build_frame((32, 32), 2, make_radial(), bank)
    report = moments_smoke_check(frame, 6)
    assert 5 in report.unreliable_orders and 6 in report.unreliable_orders
    assert all(report.max_moment[k] < 1e-8 for k in range(5))
