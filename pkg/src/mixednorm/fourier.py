"""Discrete approximations of the symmetric continuous Fourier transform.

The transform convention approximated here, in n dimensions, is

    forward:  (2*pi)^(-n/2) * integral of exp(-i x.xi) f(x) dx
    inverse:  (2*pi)^(-n/2) * integral of exp(+i x.xi) s(xi) dxi

A sampled field on ``x_k = x0 + k*h`` maps to spectrum samples

    s(xi_m) = h/sqrt(2*pi) * exp(-i*x0*xi_m) * DFT(f)_m,   xi_m = 2*pi*m/(N*h),

stored on an ascending frequency grid (wrap-around order is internalized).
The calibration factor is fixed, not floating: for f = exp(-x^2) on the
default desk-scale grid (half-width 16, 4096 points) the spectrum matches
exp(-xi^2/4)/sqrt(2) to better than 1e-8, and the round trip is the identity
to 1e-10 relative.

Spectra remember the spatial grid they came from so inversion restores it
exactly; spectra built by hand get the canonical centered dual grid.  Fields
should be negligible at the grid boundary (below 1e-10 of their peak);
violations are recorded as warnings on the result rather than raised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import grid_field
from .errors import FormatError, ParameterError
from .grid_field import Field1D, Field2D, UniformGrid1D, _freeze, make_grid

__all__ = [
    "Spectrum1D",
    "Spectrum2D",
    "frequency_grid",
    "dual_source_grid",
    "ft1",
    "ift1",
    "ft2",
    "ift2",
    "ft_axis",
    "ift_axis",
    "write_spectrum",
    "read_spectrum",
    "DEFAULT_HALF_WIDTH",
    "DEFAULT_POINTS",
]

DEFAULT_HALF_WIDTH = 16.0
DEFAULT_POINTS = 4096

BOUNDARY_DECAY = 1e-10


def frequency_grid(grid: UniformGrid1D) -> UniformGrid1D:
    """Ascending frequency grid dual to a spatial grid (step 2*pi/(N*h))."""
    n = grid.count
    dk = 2.0 * np.pi / (n * grid.step)
    return make_grid(-(n // 2) * dk, dk, n)


def dual_source_grid(freq: UniformGrid1D) -> UniformGrid1D:
    """Canonical centered spatial grid whose frequency grid is ``freq``."""
    n = freq.count
    h = 2.0 * np.pi / (n * freq.step)
    return make_grid(-(n // 2) * h, h, n)


@dataclass(frozen=True)
class Spectrum1D:
    """Frequency-side samples; ``grid`` is the ascending frequency grid."""

    grid: UniformGrid1D
    values: np.ndarray
    source_grid: UniformGrid1D | None = None
    warnings: tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        v = _freeze(np.asarray(self.values).reshape(-1))
        if v.size != self.grid.count:
            raise ParameterError(f"expected {self.grid.count} values, got {v.size}")
        object.__setattr__(self, "values", v)
        if self.source_grid is None:
            object.__setattr__(self, "source_grid", dual_source_grid(self.grid))


@dataclass(frozen=True)
class Spectrum2D:
    """2-D frequency samples, same (ny, nx) x-fast layout as Field2D."""

    xgrid: UniformGrid1D
    ygrid: UniformGrid1D
    values: np.ndarray
    source_xgrid: UniformGrid1D | None = None
    source_ygrid: UniformGrid1D | None = None
    warnings: tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim == 1:
            v = v.reshape(self.ygrid.count, self.xgrid.count)
        if v.shape != (self.ygrid.count, self.xgrid.count):
            raise ParameterError(
                f"expected shape ({self.ygrid.count}, {self.xgrid.count}), got {v.shape}"
            )
        object.__setattr__(self, "values", _freeze(v))
        if self.source_xgrid is None:
            object.__setattr__(self, "source_xgrid", dual_source_grid(self.xgrid))
        if self.source_ygrid is None:
            object.__setattr__(self, "source_ygrid", dual_source_grid(self.ygrid))


def _decay_warning(values: np.ndarray, label: str) -> list[str]:
    peak = np.max(np.abs(values))
    if peak == 0.0:
        return []
    if values.ndim == 1:
        edge = max(abs(values[0]), abs(values[-1]))
    else:
        edge = max(
            np.max(np.abs(values[0, :])),
            np.max(np.abs(values[-1, :])),
            np.max(np.abs(values[:, 0])),
            np.max(np.abs(values[:, -1])),
        )
    if edge > BOUNDARY_DECAY * peak:
        return [
            f"{label}: boundary value {edge:.3e} exceeds {BOUNDARY_DECAY:g} of peak {peak:.3e}"
        ]
    return []


def _forward_1d(values: np.ndarray, grid: UniformGrid1D, axis: int) -> np.ndarray:
    n = grid.count
    k = np.fft.fftfreq(n, d=grid.step) * 2.0 * np.pi
    phase = np.exp(-1j * grid.start * k) * (grid.step / np.sqrt(2.0 * np.pi))
    spec = np.fft.fft(values, axis=axis)
    shape = [1] * values.ndim
    shape[axis] = n
    spec = spec * phase.reshape(shape)
    return np.fft.fftshift(spec, axes=axis)


def _inverse_1d(values: np.ndarray, freq: UniformGrid1D,
                source: UniformGrid1D, axis: int) -> np.ndarray:
    n = freq.count
    k_wrap = np.fft.ifftshift(freq.points())
    phase = np.exp(1j * source.start * k_wrap) * (np.sqrt(2.0 * np.pi) / source.step)
    shape = [1] * values.ndim
    shape[axis] = n
    spec = np.fft.ifftshift(values, axes=axis) * phase.reshape(shape)
    return np.fft.ifft(spec, axis=axis)


def ft1(f: Field1D) -> Spectrum1D:
    """Forward transform of a 1-D field under the symmetric convention."""
    warns = _decay_warning(f.values, "ft1")
    spec = _forward_1d(f.values, f.grid, axis=0)
    return Spectrum1D(frequency_grid(f.grid), spec, source_grid=f.grid,
                      warnings=tuple(warns))


def ift1(s: Spectrum1D) -> Field1D:
    """Inverse transform; ``ift1(ft1(f))`` recovers ``f`` on its grid."""
    vals = _inverse_1d(s.values, s.grid, s.source_grid, axis=0)
    return Field1D(s.source_grid, vals)


def ft_axis(f: Field2D, axis: str) -> Field2D:
    """Partial transform along one axis ('x' or 'y').

    The returned Field2D carries the frequency grid in place of the
    transformed axis's grid; the other axis is untouched.
    """
    if axis == "x":
        spec = _forward_1d(f.values, f.xgrid, axis=1)
        return Field2D(frequency_grid(f.xgrid), f.ygrid, spec)
    if axis == "y":
        spec = _forward_1d(f.values, f.ygrid, axis=0)
        return Field2D(f.xgrid, frequency_grid(f.ygrid), spec)
    raise ParameterError(f"axis must be 'x' or 'y', got {axis!r}")


def ift_axis(f: Field2D, axis: str,
             source_grid: UniformGrid1D | None = None) -> Field2D:
    """Inverse partial transform; ``source_grid`` defaults to the centered dual."""
    if axis == "x":
        src = source_grid or dual_source_grid(f.xgrid)
        vals = _inverse_1d(f.values, f.xgrid, src, axis=1)
        return Field2D(src, f.ygrid, vals)
    if axis == "y":
        src = source_grid or dual_source_grid(f.ygrid)
        vals = _inverse_1d(f.values, f.ygrid, src, axis=0)
        return Field2D(f.xgrid, src, vals)
    raise ParameterError(f"axis must be 'x' or 'y', got {axis!r}")


def ft2(f: Field2D) -> Spectrum2D:
    """Full 2-D transform: the x-pass followed by the y-pass."""
    warns = _decay_warning(f.values, "ft2")
    spec = _forward_1d(f.values, f.xgrid, axis=1)
    spec = _forward_1d(spec, f.ygrid, axis=0)
    return Spectrum2D(
        frequency_grid(f.xgrid), frequency_grid(f.ygrid), spec,
        source_xgrid=f.xgrid, source_ygrid=f.ygrid, warnings=tuple(warns),
    )


def ift2(s: Spectrum2D) -> Field2D:
    vals = _inverse_1d(s.values, s.xgrid, s.source_xgrid, axis=1)
    vals = _inverse_1d(vals, s.ygrid, s.source_ygrid, axis=0)
    return Field2D(s.source_xgrid, s.source_ygrid, vals)


# --- serialization: the field format plus a domain marker -----------------------


def write_spectrum(path, s: Spectrum1D | Spectrum2D) -> None:
    obj: dict = {"domain": "frequency"}
    if isinstance(s, Spectrum1D):
        obj["grid"] = grid_field._grid_to_json(s.grid)
    else:
        obj["xgrid"] = grid_field._grid_to_json(s.xgrid)
        obj["ygrid"] = grid_field._grid_to_json(s.ygrid)
    obj["values"] = grid_field._values_to_json(s.values)
    with open(path, "w", encoding="ascii") as fh:
        json.dump(obj, fh, allow_nan=False)
        fh.write("\n")


def read_spectrum(path) -> Spectrum1D | Spectrum2D:
    """Read a spectrum file; the frequency marker is required."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            obj = json.load(fh, parse_constant=grid_field._reject_nan)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"unreadable spectrum file {path}: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("domain") != "frequency":
        raise FormatError("spectrum file must carry domain: \"frequency\"")
    f = grid_field.field_from_json(obj)
    if isinstance(f, Field1D):
        return Spectrum1D(f.grid, f.values)
    return Spectrum2D(f.xgrid, f.ygrid, f.values)
