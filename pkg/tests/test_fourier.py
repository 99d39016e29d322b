import numpy as np
import pytest

from mixednorm.fourier import (
    Spectrum1D,
    frequency_grid,
    ft1,
    ft2,
    ft_axis,
    ift1,
    ift2,
    read_spectrum,
    write_spectrum,
)
from mixednorm.errors import FormatError
from mixednorm.grid_field import Field1D, Field2D, field_from_fn, make_grid
from mixednorm.norms import p_norm, p_norm2


def centered(half, n):
    return make_grid(-half, 2 * half / n, n)


GRID = centered(16.0, 4096)


def band_limited_1d(grid, seed=0, terms=5):
    rng = np.random.default_rng(seed)
    x = grid.points()
    vals = np.zeros(x.size, dtype=complex)
    for _ in range(terms):
        a = rng.normal() + 1j * rng.normal()
        vals += a * np.exp(-((x - rng.uniform(-3, 3)) ** 2) / 2) * np.exp(1j * rng.uniform(0, 5) * x)
    return Field1D(grid, vals)


def test_gaussian_calibration():
    f = field_from_fn(GRID, lambda x: np.exp(-x * x))
    s = ft1(f)
    xi = s.grid.points()
    exact = np.exp(-xi * xi / 4) / np.sqrt(2)
    window = np.abs(xi) <= 8
    assert np.max(np.abs(s.values - exact)[window]) <= 1e-8
    assert s.warnings == ()


def test_modulation_shifts_center():
    omega = 3.0
    f = field_from_fn(GRID, lambda x: np.exp(-x * x) * np.exp(1j * omega * x))
    s = ft1(f)
    xi = s.grid.points()
    exact = np.exp(-((xi - omega) ** 2) / 4) / np.sqrt(2)
    assert np.max(np.abs(s.values - exact)) <= 1e-8


def test_roundtrip_identity():
    f = band_limited_1d(centered(8.0, 1024), seed=3)
    back = ift1(ft1(f))
    scale = np.max(np.abs(f.values))
    assert back.grid == f.grid
    assert np.max(np.abs(back.values - f.values)) <= 1e-10 * scale


def test_plancherel_1d():
    f = band_limited_1d(centered(8.0, 1024), seed=4)
    s = ft1(f)
    a, b = p_norm(f, 2), p_norm(s, 2)
    assert abs(a - b) <= 1e-10 * a


def test_frequency_grid_shape():
    fg = frequency_grid(GRID)
    xi = fg.points()
    assert xi[0] < 0 < xi[-1]
    assert np.any(xi == 0.0)
    assert fg.step == pytest.approx(2 * np.pi / (GRID.count * GRID.step))


def test_separable_ft2():
    xg, yg = centered(8.0, 256), centered(8.0, 128)
    a = np.exp(-xg.points() ** 2)
    b = np.exp(-2 * yg.points() ** 2)
    f = Field2D(xg, yg, np.outer(b, a))
    s = ft2(f)
    sa = ft1(Field1D(xg, a)).values
    sb = ft1(Field1D(yg, b)).values
    assert np.max(np.abs(s.values - np.outer(sb, sa))) <= 1e-10


def test_ft_axis_transforms_one_axis():
    xg, yg = centered(8.0, 256), centered(4.0, 64)
    a = np.exp(-xg.points() ** 2)
    b = np.cos(yg.points())
    f = Field2D(xg, yg, np.outer(b, a))
    g = ft_axis(f, "x")
    sa = ft1(Field1D(xg, a)).values
    assert np.max(np.abs(g.values - np.outer(b, sa))) <= 1e-10
    assert g.ygrid == yg


def test_ift_axis_roundtrip():
    xg, yg = centered(8.0, 256), centered(4.0, 64)
    f = field_from_fn(xg, yg, lambda x, y: np.exp(-x * x - y * y) * np.cos(x + 2 * y))
    from mixednorm.fourier import ift_axis
    back = ift_axis(ft_axis(f, "x"), "x", source_grid=xg)
    assert back.xgrid == xg
    assert np.max(np.abs(back.values - f.values)) <= 1e-12


def test_partial_transform_order_immaterial():
    xg, yg = centered(8.0, 128), centered(8.0, 128)
    rng = np.random.default_rng(9)
    f = Field2D(xg, yg, np.exp(-xg.points()[None, :] ** 2 - yg.points()[:, None] ** 2)
                * (1 + 0.1 * rng.normal(size=(128, 128))))
    xy = ft_axis(ft_axis(f, "x"), "y").values
    yx = ft_axis(ft_axis(f, "y"), "x").values
    assert np.max(np.abs(xy - yx)) <= 1e-12 * np.max(np.abs(xy))


def test_plancherel_2d():
    xg, yg = centered(8.0, 256), centered(8.0, 256)
    rng = np.random.default_rng(11)
    vals = np.zeros((256, 256), dtype=complex)
    x, y = xg.points()[None, :], yg.points()[:, None]
    for _ in range(4):
        vals += ((rng.normal() + 1j * rng.normal())
                 * np.exp(-(x - rng.uniform(-2, 2)) ** 2 - (y - rng.uniform(-2, 2)) ** 2)
                 * np.exp(1j * (rng.uniform(0, 4) * x + rng.uniform(0, 4) * y)))
    f = Field2D(xg, yg, vals)
    s = ft2(f)
    a, b = p_norm2(f, 2), p_norm2(s, 2)
    assert abs(a - b) <= 1e-10 * a


def test_real_even_gives_real_even_spectrum():
    f = field_from_fn(GRID, lambda x: np.exp(-np.abs(x) ** 2 / 2) * np.cos(2 * x))
    s = ft1(f)
    assert np.max(np.abs(s.values.imag)) <= 1e-10
    # the lone -Nyquist sample has no positive partner on an even-count grid
    v = s.values[1:]
    assert np.max(np.abs(v - v[::-1])) <= 1e-10


def test_boundary_decay_warning_recorded():
    g = centered(4.0, 128)
    const = Field1D(g, np.ones(128))
    s = ft1(const)
    assert len(s.warnings) == 1 and "boundary" in s.warnings[0]
    decaying = field_from_fn(g, lambda x: np.exp(-4 * x * x))
    assert ft1(decaying).warnings == ()


def test_ift2_restores_source_grids():
    xg, yg = centered(8.0, 128), centered(2.0, 64)
    f = field_from_fn(xg, yg, lambda x, y: np.exp(-x * x - 4 * y * y))
    back = ift2(ft2(f))
    assert back.xgrid == xg and back.ygrid == yg
    assert np.max(np.abs(back.values - f.values)) <= 1e-12


def test_spectrum_round_trip(tmp_path):
    f = band_limited_1d(centered(8.0, 256), seed=6)
    s = ft1(f)
    p = tmp_path / "spec.json"
    write_spectrum(p, s)
    back = read_spectrum(p)
    assert isinstance(back, Spectrum1D)
    assert np.array_equal(back.values, s.values)
    assert back.grid == s.grid
    # marker is mandatory
    import json
    obj = json.loads(p.read_text())
    assert obj["domain"] == "frequency"
    del obj["domain"]
    p.write_text(json.dumps(obj))
    with pytest.raises(FormatError):
        read_spectrum(p)
