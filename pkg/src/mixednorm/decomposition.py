"""Dyadic stopping-time decomposition of a 1-D majorant at a level alpha,
its 2-D good/bad lifts, and the empirical weak-(1,1) witness.

The decomposition works in integer cell space: sample i owns the half-open
cell [x_i, x_i + step), so every grid point belongs to exactly one leaf and
nothing is double counted.  Interval masses are plain sample sums times the
step (left endpoint in, right endpoint out), which makes parent mass exactly
the sum of the child masses; the selected-interval double inequality
alpha < average <= 2*alpha is then forced by the stopping rule rather than
approximated.  Off the grid the function is extended by zero, so the root
can expand by doubling about the span's center until its average drops to
the level.  Leaves are single cells: a sample left outside every selected
interval satisfies h <= alpha exactly at grid resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DecompositionError, ParameterError
from .grid_field import Field1D, Field2D
from .norms import INF, MixedNormSpec, mixed_norm
from .operators import MultiplierSymbol, apply_multiplier

__all__ = [
    "DyadicInterval",
    "CZDecomposition",
    "GoodBadLift",
    "majorant",
    "cz_decompose",
    "double_interval",
    "lift",
    "Weak11Report",
    "weak11_witness",
]


@dataclass(frozen=True)
class DyadicInterval:
    """Half-open interval [lo, hi); ``cells`` is its grid-index span if any."""

    lo: float
    hi: float
    cells: tuple[int, int] | None = None

    def __post_init__(self):
        if not (self.hi > self.lo):
            raise ParameterError(f"empty interval [{self.lo}, {self.hi})")

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo


def double_interval(q: DyadicInterval) -> DyadicInterval:
    """Interval with the same center and twice the length."""
    return DyadicInterval(q.center - q.length, q.center + q.length)


@dataclass(frozen=True)
class CZDecomposition:
    """Level, selected intervals, and the good/bad split of the majorant."""

    alpha: float
    intervals: tuple[DyadicInterval, ...]
    good: Field1D
    bad: Field1D
    root: DyadicInterval
    mass: float  # step * sum of samples, the zero-extension L1 mass

    @property
    def total_selected_length(self) -> float:
        return float(sum(q.length for q in self.intervals))


def majorant(f: Field2D) -> Field1D:
    """h(x) = max over sampled y of |f(x, y)|."""
    return Field1D(f.xgrid, np.max(np.abs(f.values), axis=0).astype(complex))


def cz_decompose(h: Field1D, alpha: float, max_expansions: int = 200) -> CZDecomposition:
    """Stopping-time decomposition of a nonnegative majorant at level alpha.

    Maximal dyadic cell ranges whose sample average exceeds alpha are
    selected; their parents' averages are <= alpha, which bounds each
    selected average by 2*alpha.  The bad part is h on the selected union,
    the good part the rest.
    """
    if not (alpha > 0):
        raise ParameterError(f"level must be positive, got {alpha}")
    vals = h.values
    if np.max(np.abs(vals.imag), initial=0.0) > 0.0:
        raise ParameterError("majorant must be real-valued")
    re = vals.real
    if np.any(re < 0):
        raise ParameterError("majorant must be nonnegative")

    g = h.grid
    n = g.count
    step = g.step
    prefix = np.concatenate(([0.0], np.cumsum(re)))

    def cell_sum(a: int, b: int) -> float:
        a2, b2 = max(a, 0), min(b, n)
        return float(prefix[b2] - prefix[a2]) if b2 > a2 else 0.0

    # root: smallest centered power-of-two cell count covering the span,
    # doubled about the span center until the average is at or below alpha
    m = 1
    while m < n:
        m *= 2
    lo = (n - m) // 2
    expansions = 0
    while cell_sum(lo, lo + m) / m > alpha:
        lo -= m // 2
        m *= 2
        expansions += 1
        if expansions > max_expansions:
            raise DecompositionError(
                "root average will not drop to the level; the majorant has no "
                "decay on this grid, decompose on a larger domain"
            )

    selected: list[tuple[int, int]] = []
    stack = [(lo, lo + m)]
    while stack:
        a, b = stack.pop()
        size = b - a
        if cell_sum(a, b) / size > alpha:
            selected.append((a, b))
        elif size > 1:
            mid = a + size // 2
            stack.append((mid, b))
            stack.append((a, mid))
    selected.sort()

    mask = np.zeros(n, dtype=bool)
    for a, b in selected:
        mask[max(a, 0):min(b, n)] = True
    bad = np.where(mask, re, 0.0)
    good = np.where(mask, 0.0, re)

    def coords(a: int, b: int) -> DyadicInterval:
        return DyadicInterval(g.start + a * step, g.start + b * step, (a, b))

    return CZDecomposition(
        alpha=float(alpha),
        intervals=tuple(coords(a, b) for a, b in selected),
        good=Field1D(g, good.astype(complex)),
        bad=Field1D(g, bad.astype(complex)),
        root=coords(lo, lo + m),
        mass=float(step * prefix[n]),
    )


@dataclass(frozen=True)
class GoodBadLift:
    """2-D split f = f1 + f2 induced by a 1-D decomposition of the majorant."""

    f1: Field2D
    f2: Field2D
    pieces: tuple[tuple[DyadicInterval, Field2D], ...]


def lift(f: Field2D, dec: CZDecomposition) -> GoodBadLift:
    """Lift the decomposition: replace f by its interval means on each Q.

    f1 equals f off the selected union and the per-y interval mean on each
    Q; f2 = f - f1 is supported on the union and splits into pieces f_Q that
    integrate to zero in x for every sampled y.  The partition f = f1 + f2
    is exact in its subtraction form: f - f1 equals f2 bit for bit, since f2
    is defined as that difference.  Interval means use the zero extension
    off the grid, so means stay bounded by the selected averages.
    """
    if dec.good.grid != f.xgrid:
        raise ParameterError("decomposition grid does not match the field's x-grid")
    n = f.xgrid.count
    f1 = f.values.copy()
    pieces = []
    for q in dec.intervals:
        a, b = q.cells
        sl = slice(max(a, 0), min(b, n))
        seg = f.values[:, sl]
        mean = seg.sum(axis=1) / (b - a)
        f1[:, sl] = mean[:, None]
        piece = np.zeros_like(f.values)
        piece[:, sl] = seg - mean[:, None]
        pieces.append((q, Field2D(f.xgrid, f.ygrid, piece)))
    f2 = f.values - f1
    return GoodBadLift(
        f1=Field2D(f.xgrid, f.ygrid, f1),
        f2=Field2D(f.xgrid, f.ygrid, f2),
        pieces=tuple(pieces),
    )


@dataclass(frozen=True)
class Weak11Report:
    """Per-level weak-(1,1) witnesses for one field under one operator."""

    alphas: tuple[float, ...]
    sup_weak: tuple[float, ...]  # max over sampled y of alpha * d(alpha)
    denominator: float           # inner sup-y, outer L1-x norm of the input
    ratios: tuple[float, ...]

    @property
    def d_emp(self) -> float:
        return max(self.ratios, default=0.0)


def weak11_witness(f: Field2D, sym: MultiplierSymbol,
                   alphas: Sequence[float]) -> Weak11Report:
    """alpha * d_{Tf(.,y)}(alpha) per level, against the mixed input norm."""
    alphas = [float(a) for a in alphas]
    if any(a <= 0 for a in alphas):
        raise ParameterError("levels must be positive")
    tf = apply_multiplier(f, sym)
    mags = np.abs(tf.values)
    step = f.xgrid.step
    denom = mixed_norm(f, MixedNormSpec("y", INF, 1.0))
    sup_weak = []
    for a in alphas:
        d_rows = np.count_nonzero(mags > a, axis=1) * step
        sup_weak.append(float(a * np.max(d_rows)))
    ratios = tuple(s / denom if denom > 0 else 0.0 for s in sup_weak)
    return Weak11Report(tuple(alphas), tuple(sup_weak), float(denom), ratios)
