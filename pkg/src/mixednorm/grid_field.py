"""Uniform grids, sampled fields, trapezoid quadrature, and the field file format.

Conventions fixed here and relied on everywhere else:

* 2-D sample layout is row-major with x as the fast axis.  A ``Field2D``
  stores its values as an array of shape ``(ny, nx)``; ``value(i, j)``
  addresses x-index ``i`` and y-index ``j``.
* A grid point belongs to the half-open cell ``[x_i, x_i + step)``; in
  particular an interval ``[a, b)`` owns the samples with ``a <= x < b``.
* The single quadrature primitive is the composite trapezoid rule.  Every
  integrand in scope is smooth and rapidly decaying, so truncation windows
  are chosen large enough that tails stay below 1e-12 of the integral.

Fields are immutable after construction (arrays are frozen), so all
operations are pure and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import FormatError, ParameterError, SamplingError

__all__ = [
    "UniformGrid1D",
    "Field1D",
    "Field2D",
    "make_grid",
    "integrate",
    "trapezoid_weights",
    "field_from_fn",
    "write_field",
    "read_field",
]


@dataclass(frozen=True)
class UniformGrid1D:
    """Uniform 1-D grid: points ``start + i*step`` for ``0 <= i < count``."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        if not (self.step > 0):
            raise ParameterError(f"grid step must be positive, got {self.step}")
        if self.count < 2:
            raise ParameterError(f"grid needs at least 2 points, got {self.count}")

    def point(self, i: int) -> float:
        return self.start + i * self.step

    def points(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)

    @property
    def span(self) -> tuple[float, float]:
        """Half-open extent covered by the cells: [start, start + count*step)."""
        return (self.start, self.start + self.count * self.step)


def make_grid(start: float, step: float, count: int) -> UniformGrid1D:
    """Build a uniform grid; rejects non-positive step and count < 2."""
    return UniformGrid1D(float(start), float(step), int(count))


def _freeze(values: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(values, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Field1D:
    """Complex samples on a uniform 1-D grid."""

    grid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self):
        v = _freeze(np.asarray(self.values).reshape(-1))
        if v.size != self.grid.count:
            raise ParameterError(
                f"expected {self.grid.count} values, got {v.size}"
            )
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ParameterError("field values must be finite")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class Field2D:
    """Complex samples on a tensor grid, shape (ny, nx), x fast."""

    xgrid: UniformGrid1D
    ygrid: UniformGrid1D
    values: np.ndarray

    def __post_init__(self):
        nx, ny = self.xgrid.count, self.ygrid.count
        v = np.asarray(self.values)
        if v.ndim == 1:
            if v.size != nx * ny:
                raise ParameterError(
                    f"expected {nx * ny} values, got {v.size}"
                )
            v = v.reshape(ny, nx)
        elif v.shape != (ny, nx):
            raise ParameterError(
                f"expected shape ({ny}, {nx}), got {v.shape}"
            )
        v = _freeze(v)
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ParameterError("field values must be finite")
        object.__setattr__(self, "values", v)

    def value(self, i: int, j: int) -> complex:
        """Sample at x-index ``i``, y-index ``j``."""
        return complex(self.values[j, i])


Field = Union[Field1D, Field2D]


def trapezoid_weights(n: int) -> np.ndarray:
    """Composite trapezoid weights: interior 1, endpoints 1/2."""
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def integrate(f: Field1D) -> complex:
    """Trapezoid quadrature of a 1-D field over its grid."""
    w = trapezoid_weights(f.grid.count)
    return complex(np.sum(w * f.values) * f.grid.step)


def field_from_fn(*args) -> Field:
    """Sample a function on one grid (1-D) or two grids (2-D).

    ``field_from_fn(grid, fn)`` samples ``fn(x)``;
    ``field_from_fn(xgrid, ygrid, fn)`` samples ``fn(x, y)``.
    The function may act on arrays; a scalar-only callable is looped over.
    Non-finite samples raise :class:`SamplingError` naming the point.
    """
    if len(args) == 2:
        grid, fn = args
        x = grid.points()
        vals = _apply(fn, (x,))
        bad = ~np.isfinite(vals.real) | ~np.isfinite(vals.imag)
        if bad.any():
            i = int(np.argmax(bad))
            raise SamplingError(f"non-finite sample at x={x[i]!r}")
        return Field1D(grid, vals)
    if len(args) == 3:
        xgrid, ygrid, fn = args
        x = xgrid.points()
        y = ygrid.points()
        X = np.broadcast_to(x[None, :], (y.size, x.size))
        Y = np.broadcast_to(y[:, None], (y.size, x.size))
        vals = _apply(fn, (X, Y))
        bad = ~np.isfinite(vals.real) | ~np.isfinite(vals.imag)
        if bad.any():
            j, i = np.unravel_index(int(np.argmax(bad)), vals.shape)
            raise SamplingError(f"non-finite sample at (x={x[i]!r}, y={y[j]!r})")
        return Field2D(xgrid, ygrid, vals)
    raise ParameterError("field_from_fn takes (grid, fn) or (xgrid, ygrid, fn)")


def _apply(fn: Callable, coords: tuple[np.ndarray, ...]) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            out = np.asarray(fn(*coords), dtype=complex)
            if out.shape == coords[0].shape:
                return out
        except (TypeError, ValueError):
            pass
        # scalar fallback
        flat = [c.reshape(-1) for c in coords]
        out = np.array([fn(*p) for p in zip(*flat)], dtype=complex)
        return out.reshape(coords[0].shape)


# --- file format -------------------------------------------------------------
#
# A field file is a JSON object.  1-D fields carry a "grid" key, 2-D fields
# carry "xgrid" and "ygrid"; each grid is {"start", "step", "count"}.
# "values" is a flat list of [re, im] pairs, row-major with x fast.  Spectra
# (see the fourier module) add "domain": "frequency".  Serialization uses
# repr-exact decimal floats, so write -> read is the identity on every sample.


def _grid_to_json(g: UniformGrid1D) -> dict:
    return {"start": g.start, "step": g.step, "count": g.count}


def _grid_from_json(obj) -> UniformGrid1D:
    try:
        return make_grid(obj["start"], obj["step"], obj["count"])
    except (TypeError, KeyError, ParameterError) as exc:
        raise FormatError(f"bad grid object: {exc}") from exc


def _values_to_json(values: np.ndarray) -> list:
    flat = values.reshape(-1)
    return [[float(v.real), float(v.imag)] for v in flat]


def _values_from_json(obj) -> np.ndarray:
    try:
        arr = np.array([[float(re), float(im)] for re, im in obj], dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad values array: {exc}") from exc
    if arr.size == 0:
        raise FormatError("empty values array")
    return arr[:, 0] + 1j * arr[:, 1]


def field_to_json(field: Field, domain: str | None = None) -> dict:
    obj: dict = {}
    if domain is not None:
        obj["domain"] = domain
    if isinstance(field, Field1D):
        obj["grid"] = _grid_to_json(field.grid)
    else:
        obj["xgrid"] = _grid_to_json(field.xgrid)
        obj["ygrid"] = _grid_to_json(field.ygrid)
    obj["values"] = _values_to_json(field.values)
    return obj


def field_from_json(obj) -> Field:
    if not isinstance(obj, dict) or "values" not in obj:
        raise FormatError("field file must be an object with a 'values' key")
    values = _values_from_json(obj["values"])
    if "grid" in obj:
        grid = _grid_from_json(obj["grid"])
        if values.size != grid.count:
            raise FormatError(
                f"grid declares {grid.count} samples, file has {values.size}"
            )
        return Field1D(grid, values)
    if "xgrid" in obj and "ygrid" in obj:
        xg = _grid_from_json(obj["xgrid"])
        yg = _grid_from_json(obj["ygrid"])
        if values.size != xg.count * yg.count:
            raise FormatError(
                f"grids declare {xg.count}x{yg.count} samples, file has {values.size}"
            )
        return Field2D(xg, yg, values)
    raise FormatError("field file needs 'grid' or both 'xgrid' and 'ygrid'")


def write_field(path, field: Field, domain: str | None = None) -> None:
    obj = field_to_json(field, domain=domain)
    with open(path, "w", encoding="ascii") as fh:
        json.dump(obj, fh, allow_nan=False)
        fh.write("\n")


def _reject_nan(token: str):
    raise FormatError(f"non-finite literal {token!r} in field file")


def read_field(path) -> Field:
    try:
        with open(path, "r", encoding="ascii") as fh:
            obj = json.load(fh, parse_constant=_reject_nan)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"unreadable field file {path}: {exc}") from exc
    try:
        return field_from_json(obj)
    except ParameterError as exc:
        raise FormatError(str(exc)) from exc
