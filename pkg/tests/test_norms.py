import math

import numpy as np
import pytest

from mixednorm.errors import ParameterError
from mixednorm.grid_field import Field1D, Field2D, field_from_fn, make_grid
from mixednorm.norms import (
    INF,
    MixedNormSpec,
    distribution,
    interpolation_constant,
    layer_cake,
    mixed_norm,
    p_norm,
    truncation_split,
    weak_norm,
)


def centered(half, n):
    return make_grid(-half, 2 * half / n, n)


def smooth_field(seed, grid, terms=4):
    rng = np.random.default_rng(seed)
    x = grid.points()
    vals = np.zeros(x.size, dtype=complex)
    for _ in range(terms):
        vals += ((rng.normal() + 1j * rng.normal())
                 * np.exp(-((x - rng.uniform(-2, 2)) ** 2) / (2 * rng.uniform(0.3, 1.5) ** 2))
                 * np.exp(1j * rng.uniform(0, 5) * x))
    return Field1D(grid, vals)


def tent_field(n=4001):
    g = make_grid(-2.0, 4.0 / (n - 1), n)
    return field_from_fn(g, lambda x: np.maximum(0.0, 1.0 - np.abs(x)))


# --- mixed norms -----------------------------------------------------------------


@pytest.mark.parametrize("p,q", [(1.0, 2.0), (2.0, 2.0), (3.0, 1.5), (2.0, INF)])
def test_mixed_norm_separable_factorization(p, q):
    xg, yg = centered(8.0, 512), centered(6.0, 256)
    a = np.exp(-xg.points() ** 2) * (1 + 0.3 * np.cos(2 * xg.points()))
    b = np.exp(-2 * yg.points() ** 2)
    f = Field2D(xg, yg, np.outer(b, a))
    got = mixed_norm(f, MixedNormSpec("x", p, q))
    want = p_norm(Field1D(xg, a), p) * p_norm(Field1D(yg, b), q)
    assert got == pytest.approx(want, rel=1e-10)


def test_mixed_norm_gaussian_sup_slab():
    # oracle: ||exp(-x^2)||_{L2} = (pi/2)^(1/4) via the erf closed form
    xg, yg = centered(16.0, 4096), centered(2.0, 64)
    f = field_from_fn(xg, yg,
                      lambda x, y: np.exp(-x * x) * ((y >= 0) & (y <= 1)))
    got = mixed_norm(f, MixedNormSpec("y", INF, 2.0))
    oracle = math.sqrt(math.sqrt(math.pi / 2) * math.erf(16.0 * math.sqrt(2)))
    assert got == pytest.approx(oracle, rel=1e-10)
    assert got == pytest.approx((math.pi / 2) ** 0.25, rel=1e-8)
    assert got == pytest.approx(1.11951, abs=1e-5)


def test_mixed_norm_indicator_both_orders():
    # half-open indicator, consistent with the interval convention
    xg = make_grid(-2.0, 0.125, 33)
    yg = make_grid(-2.0, 0.125, 33)
    f = field_from_fn(xg, yg,
                      lambda x, y: ((x >= 0) & (x < 1) & (y >= 0) & (y < 1)) * 1.0)
    a = mixed_norm(f, MixedNormSpec("x", 2.0, 2.0))
    b = mixed_norm(f, MixedNormSpec("y", 2.0, 2.0))
    assert a == pytest.approx(1.0, rel=1e-12)
    assert b == pytest.approx(1.0, rel=1e-12)


def test_mixed_norm_inf_inf_is_global_max():
    xg, yg = centered(4.0, 64), centered(4.0, 64)
    rng = np.random.default_rng(8)
    f = Field2D(xg, yg, rng.normal(size=(64, 64)))
    got = mixed_norm(f, MixedNormSpec("x", INF, INF))
    assert got == pytest.approx(np.max(np.abs(f.values)))


def test_mixed_norm_rejects_bad_exponents():
    with pytest.raises(ParameterError):
        MixedNormSpec("x", 0.5, 2.0)
    with pytest.raises(ParameterError):
        MixedNormSpec("z", 2.0, 2.0)


# --- distribution function --------------------------------------------------------


def test_distribution_indicator():
    g = make_grid(-2.0, 0.01, 401)
    f = field_from_fn(g, lambda x: ((x >= 0) & (x < 1)) * 1.0)
    assert distribution(f, 0.5) == pytest.approx(1.0, abs=g.step)
    assert distribution(f, 1.0) == 0.0
    assert distribution(f, 2.0) == 0.0


def test_distribution_tent():
    f = tent_field()
    step = f.grid.step
    for a in (0.0, 0.25, 0.5, 0.9):
        assert distribution(f, a) == pytest.approx(2 * (1 - a), abs=2 * step)


def test_distribution_monotone_and_validation():
    f = smooth_field(1, centered(8.0, 512))
    alphas = np.linspace(0, np.max(np.abs(f.values)) * 1.1, 50)
    d = [distribution(f, a) for a in alphas]
    assert all(b <= a for a, b in zip(d, d[1:]))
    with pytest.raises(ParameterError):
        distribution(f, -0.1)


# --- weak norm --------------------------------------------------------------------


def test_weak_norm_indicator():
    g = make_grid(-2.0, 0.01, 401)
    f = field_from_fn(g, lambda x: ((x >= 0) & (x < 1)) * 1.0)
    assert weak_norm(f, 1.0) == pytest.approx(1.0, abs=2 * g.step)


def test_weak_norm_tent_against_sweep_oracle():
    # oracle: dense level sweep of alpha * d(alpha); analytic max is 1/2
    f = tent_field()
    got = weak_norm(f, 1.0)
    sweep = max(a * distribution(f, a)
                for a in np.linspace(1e-6, 1.0, 20001))
    assert got >= sweep - 1e-9
    assert got == pytest.approx(0.5, abs=2 * f.grid.step)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_weak_norm_chebyshev(p):
    for seed in range(6):
        f = smooth_field(seed, centered(8.0, 512))
        assert weak_norm(f, p) <= p_norm(f, p) * (1 + 1e-12)
        # Chebyshev at every sampled level
        for a in np.linspace(0.1, 1.0, 7) * np.max(np.abs(f.values)):
            assert a * distribution(f, a) ** (1 / p) <= p_norm(f, p) * (1 + 1e-12)


def test_weak_norm_validation_and_zero():
    g = make_grid(0, 1, 8)
    z = Field1D(g, np.zeros(8))
    assert weak_norm(z, 1.5) == 0.0
    with pytest.raises(ParameterError):
        weak_norm(z, 0.9)


# --- layer cake -------------------------------------------------------------------


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_layer_cake_matches_direct_norm(p):
    for seed in range(5):
        f = smooth_field(seed + 20, centered(8.0, 512))
        direct = p_norm(f, p) ** p
        assert layer_cake(f, p) == pytest.approx(direct, rel=1e-6)


def test_layer_cake_indicator():
    g = make_grid(-2.0, 0.005, 801)
    f = field_from_fn(g, lambda x: ((x >= 0) & (x < 1)) * 1.0)
    assert layer_cake(f, 2.0) == pytest.approx(1.0, abs=2 * g.step)


def test_layer_cake_homogeneous():
    f = smooth_field(31, centered(8.0, 256))
    c = -2.5 + 0.5j
    scaled = Field1D(f.grid, c * f.values)
    p = 2.0
    assert layer_cake(scaled, p) == pytest.approx(abs(c) ** p * layer_cake(f, p),
                                                  rel=1e-10)


def test_layer_cake_zero_field():
    g = make_grid(0, 1, 8)
    assert layer_cake(Field1D(g, np.zeros(8)), 2.0) == 0.0


# --- truncation split -------------------------------------------------------------


def test_truncation_split_extremes():
    xg, yg = centered(4.0, 64), centered(4.0, 32)
    rng = np.random.default_rng(4)
    f = Field2D(xg, yg, rng.normal(size=(32, 64)) + 1j * rng.normal(size=(32, 64)))
    hi = truncation_split(f, float(np.max(np.abs(f.values))) + 1.0)
    assert np.all(hi.f0.values == 0)
    assert np.array_equal(hi.f1.values, f.values)
    lo = truncation_split(f, 1e-300)
    nz = f.values != 0
    assert np.all(lo.f1.values[nz] == 0)
    assert np.array_equal(lo.f0.values[nz], f.values[nz])


def test_truncation_split_partitions_bit_exactly():
    xg, yg = centered(4.0, 128), centered(4.0, 64)
    rng = np.random.default_rng(5)
    f = Field2D(xg, yg, rng.normal(size=(64, 128)) + 1j * rng.normal(size=(64, 128)))
    s = truncation_split(f, 0.7)
    assert np.array_equal(s.f0.values + s.f1.values, f.values)
    assert np.all(np.abs(s.f1.values) <= 0.7)
    live = s.f0.values != 0
    assert np.all(np.abs(s.f0.values[live]) > 0.7)
    with pytest.raises(ParameterError):
        truncation_split(f, 0.0)


# --- interpolation constant -------------------------------------------------------


def test_interpolation_constant_values():
    assert interpolation_constant(1, 3, 2, 1, 1) == 20.0
    assert interpolation_constant(1, 3, 2, 0.5, 0.5) == 4.0


def test_interpolation_constant_guards():
    with pytest.raises(ParameterError):
        interpolation_constant(1, 3, 1 + 1e-12, 1, 1)  # pole at p0
    with pytest.raises(ParameterError):
        interpolation_constant(1, 3, 3.5, 1, 1)
    with pytest.raises(ParameterError):
        interpolation_constant(1, 3, 2, 0.0, 1)
