"""Smooth bumps and the counterexample family built from them.

The family stacks components indexed by j.  Component j is a product of

* a dyadic bump in y supported on [2^-j, 2^-j+1] (plateau margins 2^-j-10),
* the Gaussian envelope exp(-x^2) in x,
* the spatial profile of a mirrored frequency band: two copies of a flat
  window of width A, shifted to +-2^j.  Its inverse transform is the real
  oscillation 2*Re(exp(i*2^j*x) * v(x)) with v the window's own inverse
  transform, so each component is a modulated, y-localized wave packet.

The y-supports are pairwise disjoint across j, so any partial sum of
components has at most one nonzero term at each y.  The peak bound of the
family (sup of |inverse transform| plus sup of |forward transform| of the
window) caps every component: |component_j| <= peak_bound * exp(-x^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import ParameterError
from .grid_field import Field2D, UniformGrid1D, trapezoid_weights

__all__ = [
    "SmoothBump",
    "make_bump",
    "smooth_step",
    "band_window",
    "dyadic_bump",
    "gaussian_envelope",
    "mirrored_band",
    "CounterexampleFamily",
    "transform_peak_bound",
]


def _phi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t) -> np.ndarray:
    """Canonical C-infinity ramp: 0 for t<=0, 1 for t>=1, exp(-1/t) profile.

    r(t) = phi(t) / (phi(t) + phi(1-t)) with phi(t) = exp(-1/t) for t>0.
    Symmetric about t=1/2 where it equals 1/2 exactly.
    """
    t = np.asarray(t, dtype=float)
    a = _phi(t)
    b = _phi(1.0 - t)
    denom = a + b
    # both branches underflow only outside (0,1), where the masks already decide
    safe = denom > 0
    out = np.where(t >= 1.0, 1.0, 0.0)
    out[safe] = a[safe] / denom[safe]
    out[t <= 0.0] = 0.0
    out[t >= 1.0] = 1.0
    return out


@dataclass(frozen=True)
class SmoothBump:
    """Smooth bump: 0 outside support, exactly 1 on the plateau, ramps between."""

    support: tuple[float, float]
    plateau: tuple[float, float]

    def __post_init__(self):
        a, b = self.support
        c, d = self.plateau
        if not (a < c < d < b):
            raise ParameterError(
                f"need support[0] < plateau[0] < plateau[1] < support[1], "
                f"got {self.support} / {self.plateau}"
            )

    def __call__(self, x) -> np.ndarray:
        a, b = self.support
        c, d = self.plateau
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        out[(x >= c) & (x <= d)] = 1.0
        rise = (x > a) & (x < c)
        out[rise] = smooth_step((x[rise] - a) / (c - a))
        fall = (x > d) & (x < b)
        out[fall] = smooth_step((b - x[fall]) / (b - d))
        return float(out[0]) if scalar else out


def make_bump(support: tuple[float, float], plateau: tuple[float, float]) -> SmoothBump:
    return SmoothBump((float(support[0]), float(support[1])),
                      (float(plateau[0]), float(plateau[1])))


def band_window(width: float) -> SmoothBump:
    """Flat frequency window on [0, width], plateau [1/4, width - 1/4]."""
    if not (3.0 <= width <= 100.0):
        raise ParameterError(f"band width must be in [3, 100], got {width}")
    return make_bump((0.0, width), (0.25, width - 0.25))


def dyadic_bump(j: int) -> SmoothBump:
    """Bump on [2^-j, 2^-j+1], equal to 1 up to margins of 2^-j-10."""
    if j < 1:
        raise ParameterError(f"dyadic bump index must be >= 1, got {j}")
    lo, hi = 2.0 ** -j, 2.0 ** (-j + 1)
    m = 2.0 ** (-j - 10)
    return make_bump((lo, hi), (lo + m, hi - m))


def gaussian_envelope(x) -> np.ndarray:
    return np.exp(-np.asarray(x, dtype=float) ** 2)


def mirrored_band(j: int, window: SmoothBump) -> Callable[[np.ndarray], np.ndarray]:
    """Even frequency profile: window shifted to +2^j plus its mirror at -2^j."""
    if j < 1:
        raise ParameterError(f"band index must be >= 1, got {j}")
    shift = 2.0 ** j

    def profile(xi):
        xi = np.asarray(xi, dtype=float)
        return window(xi - shift) + window(-xi - shift)

    return profile


@dataclass
class CounterexampleFamily:
    """Parameters of the component stack plus its cached profile data.

    j0 is the first dyadic index, nmax the last, band_width the frequency
    window width (called A on the CLI).  The window's inverse transform is
    tabulated once by trapezoid quadrature over the window support and reused
    by every component evaluation.
    """

    j0: int = 13
    nmax: int = 26
    band_width: float = 4.0
    profile_points: int = 8193

    def __post_init__(self):
        if self.j0 < 2:
            raise ParameterError(f"j0 must be >= 2, got {self.j0}")
        if self.nmax <= self.j0:
            raise ParameterError(f"nmax must exceed j0, got {self.nmax} <= {self.j0}")
        self.window = band_window(self.band_width)
        self._profile_cache: dict[bytes, np.ndarray] = {}

    @cached_property
    def _window_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        xi = np.linspace(0.0, self.band_width, self.profile_points)
        w = trapezoid_weights(xi.size) * (xi[1] - xi[0]) * self.window(xi)
        return xi, w

    def window_profile(self, x) -> np.ndarray:
        """v(x): inverse transform of the window, by quadrature.

        Results are cached by grid content: the modulated components all
        sample the same v on the same grids.
        """
        xi, w = self._window_nodes
        x = np.atleast_1d(np.asarray(x, dtype=float))
        key = x.tobytes()
        hit = self._profile_cache.get(key)
        if hit is not None:
            return hit
        # chunked matrix quadrature keeps memory flat for large x grids
        out = np.empty(x.shape, dtype=complex)
        step = max(1, 2**22 // xi.size)
        for lo in range(0, x.size, step):
            sl = slice(lo, lo + step)
            out[sl] = (np.exp(1j * np.outer(x[sl], xi)) @ w) / np.sqrt(2.0 * np.pi)
        out.setflags(write=False)
        if len(self._profile_cache) >= 8:
            self._profile_cache.pop(next(iter(self._profile_cache)))
        self._profile_cache[key] = out
        return out

    def window_transform(self, t) -> np.ndarray:
        """Forward transform of the window, by the same quadrature."""
        xi, w = self._window_nodes
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return (np.exp(-1j * np.outer(t, xi)) @ w) / np.sqrt(2.0 * np.pi)

    def mirrored_band_profile(self, j: int, x) -> np.ndarray:
        """Spatial profile of the mirrored band: 2*Re(exp(i*2^j*x) v(x))."""
        self._check_index(j)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return 2.0 * np.real(np.exp(1j * (2.0 ** j) * x) * self.window_profile(x))

    @cached_property
    def peak_bound(self) -> float:
        """sup|inverse transform| + sup|forward transform| of the window."""
        return transform_peak_bound(self)

    def _check_index(self, j: int):
        if not (self.j0 <= j <= self.nmax):
            raise ParameterError(
                f"component index {j} outside [{self.j0}, {self.nmax}]"
            )

    def component(self, j: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        """Pointwise evaluator of component j."""
        self._check_index(j)
        ybump = dyadic_bump(j)

        def fn(x, y):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            return ybump(y) * gaussian_envelope(x) * self.mirrored_band_profile(j, x)

        return fn

    def component_x_profile(self, j: int, x) -> np.ndarray:
        """x-dependence of component j: exp(-x^2) times the band profile."""
        self._check_index(j)
        return gaussian_envelope(x) * self.mirrored_band_profile(j, x)

    def sample_component(self, j: int, xgrid: UniformGrid1D,
                         ygrid: UniformGrid1D) -> Field2D:
        self._check_index(j)
        px = self.component_x_profile(j, xgrid.points())
        py = dyadic_bump(j)(ygrid.points())
        return Field2D(xgrid, ygrid, np.outer(py, px).astype(complex))

    def partial_sum(self, n: int) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        """Pointwise evaluator of the component stack up to index n."""
        if not (self.j0 < n <= self.nmax):
            raise ParameterError(f"stack top {n} outside ({self.j0}, {self.nmax}]")
        parts = [self.component(j) for j in range(self.j0, n + 1)]

        def fn(x, y):
            return sum(p(x, y) for p in parts)

        return fn

    def sample_partial_sum(self, n: int, xgrid: UniformGrid1D,
                           ygrid: UniformGrid1D) -> Field2D:
        if not (self.j0 < n <= self.nmax):
            raise ParameterError(f"stack top {n} outside ({self.j0}, {self.nmax}]")
        x = xgrid.points()
        y = ygrid.points()
        vals = np.zeros((y.size, x.size), dtype=complex)
        for j in range(self.j0, n + 1):
            vals += np.outer(dyadic_bump(j)(y), self.component_x_profile(j, x))
        return Field2D(xgrid, ygrid, vals)


def transform_peak_bound(family: CounterexampleFamily, points: int = 8193,
                         half_width: float = 16.0) -> float:
    """sup|F^-1(window)| + sup|F(window)| over a fine symmetric sample grid.

    The window is nonnegative, so both sups sit at 0, which the odd-count
    grid hits exactly; refinement tests confirm stability.
    """
    t = np.linspace(-half_width, half_width, points)
    return float(np.max(np.abs(family.window_profile(t)))
                 + np.max(np.abs(family.window_transform(t))))
