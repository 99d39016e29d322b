import math

import numpy as np
import pytest

from mixednorm.bumps import (
    CounterexampleFamily,
    band_window,
    dyadic_bump,
    gaussian_envelope,
    make_bump,
    mirrored_band,
    smooth_step,
    transform_peak_bound,
)
from mixednorm.errors import ParameterError
from mixednorm.fourier import Spectrum1D, ift1
from mixednorm.grid_field import Field1D, integrate, make_grid
from mixednorm.norms import INF, MixedNormSpec, mixed_norm


@pytest.fixture(scope="module")
def family():
    # lighter quadrature table than the production default; the window is
    # smooth and compactly supported, so the trapezoid table is spectrally
    # accurate already at this resolution
    return CounterexampleFamily(j0=3, nmax=9, band_width=4.0, profile_points=4097)


def test_bump_plateau_and_support():
    b = make_bump((0, 4), (0.25, 3.75))
    assert b(2.0) == 1.0
    assert b(-0.1) == 0.0
    assert b(4.5) == 0.0
    assert b(0.125) == pytest.approx(0.5, abs=1e-13)  # ramp midpoint


def test_bump_range_and_ramp_monotone():
    b = make_bump((0, 1), (0.4, 0.6))
    t = np.linspace(-0.5, 1.5, 2001)
    v = b(t)
    assert np.all(v >= 0) and np.all(v <= 1)
    rise = v[(t > 0) & (t < 0.4)]
    assert np.all(np.diff(rise) >= 0)


def test_bump_rejects_bad_intervals():
    with pytest.raises(ParameterError):
        make_bump((0, 1), (0.6, 0.4))
    with pytest.raises(ParameterError):
        make_bump((0, 1), (0.0, 0.5))


def test_smooth_step_finite_differences_bounded():
    # numerical smoothness proxy: centered differences up to order 4 stay finite
    h = 1e-3
    t = np.linspace(5 * h, 1 - 5 * h, 2001)
    for order in range(1, 5):
        offsets = np.arange(order + 1)
        coeffs = np.array([(-1) ** k * math.comb(order, k) for k in offsets])
        vals = sum(c * smooth_step(t + (order / 2 - k) * h)
                   for k, c in zip(offsets, coeffs))
        deriv = vals / h ** order
        assert np.all(np.isfinite(deriv))
        assert np.max(np.abs(deriv)) < 1e4


def test_band_window_bounds():
    with pytest.raises(ParameterError):
        band_window(2.0)
    with pytest.raises(ParameterError):
        band_window(101.0)
    w = band_window(4.0)
    assert w.support == (0.0, 4.0) and w.plateau == (0.25, 3.75)


def test_dyadic_bump_plateau_point():
    b = dyadic_bump(5)
    assert b(2.0 ** -5 + 2.0 ** -15 * 16) == 1.0
    assert b(2.0 ** -5) == 0.0
    assert b(2.0 ** -4) == 0.0


def test_dyadic_supports_pairwise_disjoint():
    y = np.linspace(0.0, 1.0, 40001)
    active = np.stack([dyadic_bump(j)(y) != 0 for j in range(1, 10)])
    assert np.all(active.sum(axis=0) <= 1)


def test_weighted_dyadic_bump_bounded_by_e():
    for j in range(1, 13):
        y = np.linspace(2.0 ** -j, 2.0 ** (-j + 1), 4097)
        assert np.max(np.exp(y * y) * dyadic_bump(j)(y)) <= np.e


def test_mirrored_band_plateau_and_symmetry():
    band = mirrored_band(4, band_window(4.0))
    assert band(np.array([17.0]))[0] == 1.0
    assert band(np.array([-17.0]))[0] == 1.0
    xi = np.linspace(-25, 25, 501)
    assert np.array_equal(band(xi), band(-xi))


def test_band_profile_bounded_by_peak_bound(family):
    x = np.linspace(-20, 20, 2001)
    d = family.peak_bound
    for j in (3, 6, 9):
        assert np.max(np.abs(family.mirrored_band_profile(j, x))) <= d * (1 + 1e-9)


def test_band_profile_at_origin_independent_of_j(family):
    vals = [family.mirrored_band_profile(j, 0.0)[0]
            for j in range(family.j0, family.nmax + 1)]
    assert np.allclose(vals, vals[0], rtol=1e-14)
    assert vals[0] == pytest.approx(2 * family.window_profile(0.0)[0].real)


@pytest.mark.parametrize("j", [3, 4, 5, 6, 7, 8])
def test_band_profile_matches_discrete_transform(family, j):
    # oracle: ift1 of the band sampled on a fine frequency grid
    n, dk = 65536, 1.0 / 64.0
    fg = make_grid(-(n // 2) * dk, dk, n)
    band = mirrored_band(j, family.window)
    spec = Spectrum1D(fg, band(fg.points()).astype(complex))
    f = ift1(spec)
    x = f.grid.points()
    mask = np.abs(x) <= 8.0
    ana = family.mirrored_band_profile(j, x[mask])
    assert np.max(np.abs(f.values[mask].real - ana)) <= 1e-6
    assert np.max(np.abs(f.values[mask].imag)) <= 1e-10


def test_component_vanishes_outside_y_support(family):
    j = 4
    fn = family.component(j)
    x = np.linspace(-3, 3, 11)
    assert np.all(fn(x, np.full(11, 2.0 ** (-j + 2))) == 0)
    assert np.all(fn(x, np.full(11, 2.0 ** (-j - 1))) == 0)


def test_component_gaussian_bound(family):
    j = 5
    xg = make_grid(-8.0, 1.0 / 64, 1024)
    yg = make_grid(2.0 ** -j - 0.01, 0.0005, 128)
    f = family.sample_component(j, xg, yg)
    x = xg.points()
    bound = family.peak_bound * np.exp(-x * x)
    assert np.all(np.abs(f.values) <= bound[None, :] * (1 + 1e-9))


def test_component_weighted_sup(family):
    j = 4
    xg = make_grid(-6.0, 1.0 / 64, 768)
    yg = make_grid(0.0, 2.0 ** -9, 256)  # covers [2^-4, 2^-3]
    f = family.sample_component(j, xg, yg)
    w = np.exp(xg.points()[None, :] ** 2 + yg.points()[:, None] ** 2)
    assert np.max(w * np.abs(f.values)) <= family.peak_bound * np.e * (1 + 1e-9)


def test_partial_sum_is_sum_of_components(family):
    xg = make_grid(-4.0, 1.0 / 32, 256)
    yg = make_grid(0.0, 2.0 ** -9, 256)
    n = family.j0 + 1
    g = family.sample_partial_sum(n, xg, yg)
    f_lo = family.sample_component(family.j0, xg, yg)
    f_hi = family.sample_component(n, xg, yg)
    # disjoint y-supports: at each sample at most one term is nonzero
    assert np.array_equal(g.values - f_lo.values - f_hi.values,
                          np.zeros_like(g.values))


def test_partial_sum_bounds(family):
    n = 6
    xg = make_grid(-8.0, 1.0 / 64, 1024)
    yg = make_grid(-0.5, 1.0 / 1024, 1024)
    g = family.sample_partial_sum(n, xg, yg)
    d = family.peak_bound
    w = np.exp(xg.points()[None, :] ** 2 + yg.points()[:, None] ** 2)
    assert np.max(w * np.abs(g.values)) <= d * np.e * (1 + 1e-9)
    n3 = mixed_norm(g, MixedNormSpec("y", INF, 2.0))
    assert n3 <= d * (np.pi / 2) ** 0.25 * (1 + 1e-9)


def test_peak_bound_properties(family):
    d = family.peak_bound
    assert d > 0
    w = family.window
    g = make_grid(0.0, family.band_width / 4096, 4097)
    mass = integrate(Field1D(g, w(g.points()).astype(complex))).real
    assert d >= mass / np.sqrt(2 * np.pi) - 1e-12
    refined = transform_peak_bound(family, points=16385)
    assert abs(refined - d) <= 1e-3 * d


def test_family_parameter_validation():
    with pytest.raises(ParameterError):
        CounterexampleFamily(j0=1, nmax=5)
    with pytest.raises(ParameterError):
        CounterexampleFamily(j0=5, nmax=5)
    fam = CounterexampleFamily(j0=3, nmax=6)
    with pytest.raises(ParameterError):
        fam.component(2)
    with pytest.raises(ParameterError):
        fam.component(7)
    with pytest.raises(ParameterError):
        fam.partial_sum(3)  # needs n > j0


def test_gaussian_envelope():
    x = np.array([0.0, 1.0, -2.0])
    assert np.allclose(gaussian_envelope(x), np.exp(-x * x))
