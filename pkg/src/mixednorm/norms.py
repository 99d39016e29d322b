"""Mixed Lebesgue norms, distribution functions, weak norms, the layer-cake
integral, truncation splitting, and the interpolation constant.

Discrete conventions.  A finite-exponent norm along an axis is trapezoid
quadrature of |f|^p; an infinite exponent is the max over samples (the
discrete essential supremum).  The distribution function uses the counting
measure step * #{|f| > alpha}, which is exact for the sampled objects all
statements here are about.  The weak-norm sup over alpha is realized over
sample magnitudes: for a step-function distribution the sup sits just below
a magnitude, so each candidate level is magnitude * (1 - 1e-12).

Reductions rely on numpy's pairwise summation, so results are independent of
any worker scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EvaluationError, ParameterError
from .grid_field import Field1D, Field2D, trapezoid_weights

__all__ = [
    "MixedNormSpec",
    "mixed_norm",
    "p_norm",
    "p_norm2",
    "distribution",
    "weak_norm",
    "layer_cake",
    "TruncationSplit",
    "truncation_split",
    "interpolation_constant",
]

INF = math.inf


def _check_exponent(p: float, name: str):
    if not (p >= 1.0):
        raise ParameterError(f"{name} exponent must be >= 1, got {p}")


@dataclass(frozen=True)
class MixedNormSpec:
    """Inner axis and exponent, then outer exponent on the remaining axis."""

    inner_axis: str
    inner_exponent: float
    outer_exponent: float

    def __post_init__(self):
        if self.inner_axis not in ("x", "y"):
            raise ParameterError(f"inner_axis must be 'x' or 'y', got {self.inner_axis!r}")
        _check_exponent(self.inner_exponent, "inner")
        _check_exponent(self.outer_exponent, "outer")


def _reduce(values: np.ndarray, step: float, p: float, axis: int) -> np.ndarray:
    if p == INF:
        return np.max(np.abs(values), axis=axis)
    w_shape = [1, 1]
    w_shape[axis] = values.shape[axis]
    w = trapezoid_weights(values.shape[axis]).reshape(w_shape)
    return (np.sum(w * np.abs(values) ** p, axis=axis) * step) ** (1.0 / p)


def mixed_norm(f: Field2D, spec: MixedNormSpec) -> float:
    """Inner norm along spec.inner_axis per slice, then the outer norm."""
    if spec.inner_axis == "x":
        inner_axis, inner_grid, outer_grid = 1, f.xgrid, f.ygrid
    else:
        inner_axis, inner_grid, outer_grid = 0, f.ygrid, f.xgrid
    profile = _reduce(f.values, inner_grid.step, spec.inner_exponent, inner_axis)
    if spec.outer_exponent == INF:
        return float(np.max(profile))
    w = trapezoid_weights(profile.size)
    return float((np.sum(w * profile ** spec.outer_exponent) * outer_grid.step)
                 ** (1.0 / spec.outer_exponent))


FieldLike = Union[Field1D, "object"]


def p_norm(f, p: float) -> float:
    """1-D L^p norm by trapezoid quadrature (max over samples for p = inf).

    Accepts anything with ``grid`` and ``values`` (fields or spectra).
    """
    _check_exponent(p, "p")
    v = np.abs(np.asarray(f.values))
    if p == INF:
        return float(np.max(v))
    w = trapezoid_weights(v.size)
    return float((np.sum(w * v ** p) * f.grid.step) ** (1.0 / p))


def p_norm2(f, p: float) -> float:
    """2-D L^p norm with tensor trapezoid weights."""
    _check_exponent(p, "p")
    v = np.abs(np.asarray(f.values))
    if p == INF:
        return float(np.max(v))
    wy = trapezoid_weights(v.shape[0])[:, None]
    wx = trapezoid_weights(v.shape[1])[None, :]
    cell = f.xgrid.step * f.ygrid.step
    return float((np.sum(wy * wx * v ** p) * cell) ** (1.0 / p))


def distribution(f: Field1D, alpha: float) -> float:
    """Measure (count * step) of sampled points with |f| > alpha."""
    if alpha < 0:
        raise ParameterError(f"distribution level must be >= 0, got {alpha}")
    return float(np.count_nonzero(np.abs(f.values) > alpha) * f.grid.step)


def weak_norm(f: Field1D, p: float) -> float:
    """sup over alpha of alpha * d(alpha)^(1/p), realized over sample magnitudes.

    d is a right-continuous step function jumping at the magnitudes, so the
    sup is attained just below one of them; each candidate level is
    magnitude * (1 - 1e-12).
    """
    _check_exponent(p, "p")
    mags = np.abs(f.values)
    levels = np.unique(mags[mags > 0])
    if levels.size == 0:
        return 0.0
    alphas = levels * (1.0 - 1e-12)
    sorted_mags = np.sort(mags)
    counts = mags.size - np.searchsorted(sorted_mags, alphas, side="right")
    return float(np.max(alphas * (counts * f.grid.step) ** (1.0 / p)))


def layer_cake(f: Field1D, p: float, rel_tol: float = 1e-8,
               max_pieces: int = 2 ** 14) -> float:
    """p * integral of alpha^(p-1) d(alpha) over [0, max|f|].

    Midpoint quadrature on an alpha-grid whose nodes include every jump of
    the distribution function (the sample magnitudes), refined by doubling
    until successive values agree to ``rel_tol`` relative.
    """
    _check_exponent(p, "p")
    mags = np.abs(f.values)
    if not np.any(mags > 0):
        return 0.0
    step = f.grid.step
    sorted_mags = np.sort(mags)
    edges = np.unique(np.concatenate(([0.0], mags)))
    lo, hi = edges[:-1], edges[1:]
    n = mags.size
    prev = None
    pieces = 1
    while pieces <= max_pieces:
        t = (np.arange(pieces) + 0.5) / pieces
        mid = lo[:, None] + (hi - lo)[:, None] * t[None, :]
        width = ((hi - lo) / pieces)[:, None]
        counts = n - np.searchsorted(sorted_mags, mid.reshape(-1), side="right")
        d = counts.reshape(mid.shape) * step
        val = float(np.sum(width * p * mid ** (p - 1.0) * d))
        if prev is not None and abs(val - prev) <= rel_tol * abs(val):
            return val
        prev = val
        pieces *= 2
    raise EvaluationError(
        f"layer-cake quadrature not stable to {rel_tol} within {max_pieces} pieces"
    )


@dataclass(frozen=True)
class TruncationSplit:
    """Samplewise partition at level alpha: f0 holds |f| > alpha, f1 the rest."""

    alpha: float
    f0: Union[Field1D, Field2D]
    f1: Union[Field1D, Field2D]


def truncation_split(f: Union[Field1D, Field2D], alpha: float) -> TruncationSplit:
    """Split f into the part above level alpha and the part at or below it.

    The two parts partition f bit-exactly: each sample lands in exactly one.
    """
    if not (alpha > 0):
        raise ParameterError(f"truncation level must be positive, got {alpha}")
    mask = np.abs(f.values) > alpha
    zero = np.zeros_like(f.values)
    a = np.where(mask, f.values, zero)
    b = np.where(mask, zero, f.values)
    if isinstance(f, Field1D):
        return TruncationSplit(alpha, Field1D(f.grid, a), Field1D(f.grid, b))
    return TruncationSplit(alpha, Field2D(f.xgrid, f.ygrid, a),
                           Field2D(f.xgrid, f.ygrid, b))


def interpolation_constant(p0: float, p1: float, p: float,
                           a0: float, a1: float) -> float:
    """p * ((2*a0)^p0 / (p - p0) + (2*a1)^p1 / (p1 - p)).

    This is the p-th power of the interpolated operator constant obtained
    from weak (p0, p1) bounds with constants a0, a1; it blows up at the
    endpoints, so p must sit strictly inside (p0, p1).
    """
    if a0 <= 0 or a1 <= 0:
        raise ParameterError("endpoint constants must be positive")
    if not (p0 < p < p1) or p - p0 < 1e-9 or p1 - p < 1e-9:
        raise ParameterError(
            f"exponent {p} must lie strictly inside ({p0}, {p1})"
        )
    return float(p * ((2.0 * a0) ** p0 / (p - p0) + (2.0 * a1) ** p1 / (p1 - p)))
