"""Experiment runners: counterexample growth, path validation, interpolation
machinery checks, and weak-(1,1) sweeps.

The growth runner reproduces the divergence story at desk scale.  For the
stack of components up to n it reports

* s_lower: sum over j <= n of the window quadrature of the squared stacked
  slice magnitude, a certified lower bound for the squared L2 norm of the
  transformed stack on the y = 0 line;
* l2sq_y0: the same quadrature extended over a covering set of frequency
  segments (all slice spectra vanish exactly outside the segments, and they
  are even in the frequency, so twice the positive-side sum covers the line);
* n2: sup over samples of exp(x^2+y^2) |stack|, evaluated exactly through
  the factorization over the pairwise-disjoint y-supports;
* n3: the inner sup-y outer L2-x mixed norm, through the same factorization;
* margin_min: the smallest guaranteed window floor, which certifies the
  window sums from below.

The divergence ratio sqrt(s_lower)/n3 increasing without bound while n2 and
n3 stay bounded is the quantitative failure being exhibited.

Everything here is deterministic: corpora use seeded generators, reductions
use numpy's pairwise summation, and output ordering is fixed by n then j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bumps import CounterexampleFamily, dyadic_bump
from .decomposition import Weak11Report, weak11_witness
from .errors import ConfigurationError, ParameterError
from .fourier import ft1
from .grid_field import Field1D, Field2D, UniformGrid1D, make_grid, trapezoid_weights
from .norms import (
    INF,
    MixedNormSpec,
    interpolation_constant,
    layer_cake,
    mixed_norm,
    p_norm,
    truncation_split,
    weak_norm,
)
from .operators import (
    SliceParams,
    apply_multiplier,
    band_reach,
    slice_magnitude,
    slice_params,
    slice_spectrum,
    symbol,
    window_interval,
    window_margin,
)

__all__ = [
    "CexRow",
    "run_counterexample",
    "growth_csv",
    "growth_svg",
    "PathRow",
    "PathValidationReport",
    "run_path_validation",
    "InterpolationReport",
    "run_interpolation_check",
    "Weak11Table",
    "run_weak11",
    "gaussian_mixture_1d",
    "gaussian_mixture_2d",
    "centered_grid",
]


def centered_grid(half_width: float, count: int) -> UniformGrid1D:
    """Grid on [-half_width, half_width) with the origin as a grid point."""
    return make_grid(-half_width, 2.0 * half_width / count, count)


# --- seeded corpora -----------------------------------------------------------


def gaussian_mixture_1d(rng: np.random.Generator, grid: UniformGrid1D,
                        nonneg: bool = False, max_freq: float = 6.0) -> Field1D:
    """Sum of a few modulated Gaussian bumps: smooth, decaying, band-limited."""
    x = grid.points()
    vals = np.zeros(x.size, dtype=complex)
    for _ in range(int(rng.integers(3, 7))):
        a = rng.uniform(0.3, 1.0) * np.exp(2j * np.pi * rng.uniform())
        mu = rng.uniform(-0.33, 0.33) * (grid.span[1] - grid.span[0]) / 2.0
        sig = rng.uniform(0.5, 1.2)
        om = rng.uniform(0.0, max_freq)
        vals += a * np.exp(-((x - mu) ** 2) / (2.0 * sig * sig)) * np.exp(1j * om * x)
    if nonneg:
        vals = np.abs(vals).astype(complex)
    return Field1D(grid, vals)


def gaussian_mixture_2d(rng: np.random.Generator, xgrid: UniformGrid1D,
                        ygrid: UniformGrid1D, max_freq: float = 6.0) -> Field2D:
    """Sum of separable modulated Gaussian products on the tensor grid."""
    x, y = xgrid.points(), ygrid.points()
    vals = np.zeros((y.size, x.size), dtype=complex)
    for _ in range(int(rng.integers(3, 7))):
        a = rng.uniform(0.3, 1.0) * np.exp(2j * np.pi * rng.uniform())
        mux = rng.uniform(-0.33, 0.33) * (xgrid.span[1] - xgrid.span[0]) / 2.0
        muy = rng.uniform(-0.33, 0.33) * (ygrid.span[1] - ygrid.span[0]) / 2.0
        sx, sy = rng.uniform(0.5, 1.2, size=2)
        ox, oy = rng.uniform(0.0, max_freq, size=2)
        gx = np.exp(-((x - mux) ** 2) / (2.0 * sx * sx) + 1j * ox * x)
        gy = np.exp(-((y - muy) ** 2) / (2.0 * sy * sy) + 1j * oy * y)
        vals += a * np.outer(gy, gx)
    return Field2D(xgrid, ygrid, vals)


# --- counterexample growth -----------------------------------------------------


@dataclass(frozen=True)
class CexRow:
    n: int
    s_lower: float
    l2sq_y0: float
    n2: float
    n3: float
    margin_min: float

    @property
    def ratio(self) -> float:
        return float(np.sqrt(self.s_lower) / self.n3)


def _quad(values_sq: np.ndarray, step: float) -> float:
    return float(np.sum(trapezoid_weights(values_sq.size) * values_sq) * step)


def _overlaps(lo: float, hi: float, reach) -> bool:
    return any(not (hi < a or lo > b) for a, b in reach)


def _merge(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def _stack_table(params: SliceParams, xi: np.ndarray) -> np.ndarray:
    """Cumulative stacked slice spectra on the nodes: row r is the stack up
    to index j0 + r.  Components whose bands cannot reach the nodes are
    skipped; their spectra vanish exactly there."""
    fam = params.family
    lo, hi = float(xi[0]), float(xi[-1])
    rows = np.zeros((fam.nmax - fam.j0 + 1, xi.size), dtype=complex)
    for r, i in enumerate(range(fam.j0, fam.nmax + 1)):
        if _overlaps(lo, hi, band_reach(params, i)):
            rows[r] = slice_spectrum(params, i, xi)
    return np.cumsum(rows, axis=0)


def run_counterexample(
    family: CounterexampleFamily,
    n_range: Iterable[int] | None = None,
    quad_points_per_window: int = 512,
    params: SliceParams | None = None,
    profile_half_width: float = 16.0,
    profile_count: int = 4096,
) -> list[CexRow]:
    """Growth table of the stacked counterexample, one row per stack top n."""
    params = params or slice_params(family)
    j0, nmax, width = family.j0, family.nmax, family.band_width
    for j in range(j0, nmax + 1):
        if window_margin(params, j, nmax) <= 0.0:
            raise ConfigurationError(
                f"window margin at j={j} is not positive; raise j0 or shrink nmax"
            )
    if n_range is None:
        ns = list(range(j0 + 1, nmax + 1))
    else:
        ns = sorted(set(int(n) for n in n_range))
        for n in ns:
            if not (j0 < n <= nmax):
                raise ParameterError(f"stack top {n} outside ({j0}, {nmax}]")

    # window quadratures, cumulative in the stack index
    win = {}
    for j in range(j0, nmax + 1):
        lo, hi = window_interval(j, width)
        xi = np.linspace(lo, hi, quad_points_per_window)
        win[j] = (xi, _stack_table(params, xi))

    # covering segments: outside these every slice spectrum vanishes exactly
    density = quad_points_per_window / (width - 2.0)
    raw = []
    for i in range(j0, nmax + 1):
        for a, b in band_reach(params, i):
            if b > 0:
                raw.append((max(a, 1e-6), b))
    segs = []
    for a, b in _merge(raw):
        npts = max(33, int(np.ceil((b - a) * density)) + 1)
        xi = np.linspace(a, b, npts)
        segs.append((xi, _stack_table(params, xi)))

    # x-profiles of components and the weighted sup of each dyadic bump
    xg = centered_grid(profile_half_width, profile_count)
    x = xg.points()
    profiles = np.array([family.component_x_profile(j, x)
                         for j in range(j0, nmax + 1)])
    env_sup = np.max(np.exp(x * x) * np.abs(profiles), axis=1)
    bump_sup = []
    for j in range(j0, nmax + 1):
        yl = np.linspace(2.0 ** -j, 2.0 ** (-j + 1), 4097)
        bump_sup.append(float(np.max(np.exp(yl * yl) * dyadic_bump(j)(yl))))
    bump_sup = np.array(bump_sup)
    d = family.peak_bound

    rows = []
    for n in ns:
        top = n - j0
        s_lower = 0.0
        for j in range(j0, n + 1):
            xi, table = win[j]
            s_lower += _quad(np.abs(table[top]) ** 2, xi[1] - xi[0])
        l2sq = 0.0
        for xi, table in segs:
            l2sq += _quad(np.abs(table[top]) ** 2, xi[1] - xi[0])
        l2sq *= 2.0  # even symmetry in the frequency
        # disjoint y-supports: the sup-y profile is the pointwise max over j
        hmax = np.max(np.abs(profiles[: top + 1]), axis=0)
        n3 = p_norm(Field1D(xg, hmax.astype(complex)), 2.0)
        n2 = float(np.max(bump_sup[: top + 1] * env_sup[: top + 1]))
        mmin = min(window_margin(params, j, n) for j in range(j0, n + 1))
        row = CexRow(n, s_lower, l2sq, n2, n3, mmin)
        assert row.s_lower <= row.l2sq_y0 * (1 + 1e-6)
        assert row.n2 <= d * np.e * (1 + 1e-9)
        assert row.n3 <= d * (np.pi / 2) ** 0.25 * (1 + 1e-9)
        rows.append(row)
    return rows


def _fmt(v: float) -> str:
    return format(v, ".12g")


def growth_csv(rows: Sequence[CexRow]) -> str:
    lines = ["n,S_lower,L2sq_y0,N2,N3,margin_min,ratio"]
    for r in rows:
        lines.append(",".join([
            str(r.n), _fmt(r.s_lower), _fmt(r.l2sq_y0), _fmt(r.n2),
            _fmt(r.n3), _fmt(r.margin_min), _fmt(r.ratio),
        ]))
    return "\n".join(lines) + "\n"


def growth_svg(rows: Sequence[CexRow], width: int = 640, height: int = 420) -> str:
    """Single polyline of ratio against n, with axis labels."""
    ml, mr, mt, mb = 70, 20, 20, 50
    xs = [r.n for r in rows]
    ys = [r.ratio for r in rows]
    x0, x1 = min(xs), max(xs)
    y0, y1 = 0.0, max(ys) * 1.05
    sx = (width - ml - mr) / max(x1 - x0, 1)
    sy = (height - mt - mb) / max(y1 - y0, 1e-300)
    pts = " ".join(
        f"{ml + (x - x0) * sx:.2f},{height - mb - (y - y0) * sy:.2f}"
        for x, y in zip(xs, ys)
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" stroke="black"/>\n'
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="black"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="crimson" stroke-width="2"/>\n'
        f'<text x="{(ml + width - mr) // 2}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">n</text>\n'
        f'<text x="18" y="{(mt + height - mb) // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 18 {(mt + height - mb) // 2})">sqrt(S_lower)/N3</text>\n'
        f"</svg>\n"
    )


# --- path validation ------------------------------------------------------------


@dataclass(frozen=True)
class PathRow:
    j: int
    rel_l2: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.rel_l2 <= self.tol


@dataclass(frozen=True)
class PathValidationReport:
    rows: tuple[PathRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def run_path_validation(
    j_range: Iterable[int],
    nx: int = 4096,
    ny: int = 1024,
    lx: float = 16.0,
    tol: float = 0.02,
    band_width: float = 4.0,
) -> PathValidationReport:
    """Compare the 2-D spectral route against the slice formula per index j.

    The y-extent scales with each component (half-width 4 * 2^-j) so the
    dyadic bump keeps a fixed number of samples across it at every j; the
    x-grid is shared and must resolve the window frequencies.
    """
    js = sorted(set(int(j) for j in j_range))
    if not js:
        return PathValidationReport(())
    nyquist = np.pi * nx / (2.0 * lx)
    for j in js:
        if 2.0 ** j + band_width + 8.0 > nyquist:
            raise ParameterError(
                f"x-grid Nyquist {nyquist:.1f} too small for j={j}; "
                f"raise nx or lower lx"
            )
    family = CounterexampleFamily(j0=max(min(js), 2), nmax=max(js) + 1,
                                  band_width=band_width)
    params = slice_params(family)
    xgrid = centered_grid(lx, nx)
    r12 = symbol("riesz12")
    rows = []
    for j in js:
        ygrid = centered_grid(4.0 * 2.0 ** -j, ny)
        f = family.sample_component(j, xgrid, ygrid)
        tf = apply_multiplier(f, r12)
        slice0 = Field1D(xgrid, tf.values[ny // 2, :])
        spec = ft1(slice0)
        k = spec.grid.points()
        lo, hi = window_interval(j, band_width)
        sel = (k >= lo) & (k <= hi)
        num = np.abs(spec.values[sel])
        ana = slice_magnitude(params, j, k[sel])
        rel = float(np.linalg.norm(num - ana) / np.linalg.norm(ana))
        rows.append(PathRow(j, rel, tol))
    return PathValidationReport(tuple(rows))


# --- interpolation machinery ------------------------------------------------------


@dataclass(frozen=True)
class InterpolationReport:
    p0: float
    p: float
    p1: float
    corpus_size: int
    seed: int
    partition_exact: bool
    min_chain_slack: float       # distribution-function chain, RHS/LHS
    min_split_slack_low: float   # truncated-part bound at p0
    min_split_slack_high: float  # bounded-part bound at p1
    max_layer_cake_err: float
    a0_emp: float
    a1_emp: float
    constant: float              # interpolation_constant at the empirical a0, a1
    max_ratio: float             # largest observed mixed-norm ratio
    bound_holds: bool


def run_interpolation_check(
    corpus_size: int = 20,
    p0: float = 1.0,
    p: float = 2.0,
    p1: float = 3.0,
    seed: int = 7,
    nx: int = 512,
    ny: int = 64,
    lx: float = 16.0,
    ly: float = 4.0,
    levels: int = 6,
) -> InterpolationReport:
    """Verify the splitting, chain, and constant machinery on a seeded corpus."""
    if not (p0 < p < p1):
        raise ParameterError(f"need p0 < p < p1, got {p0}, {p}, {p1}")
    rng = np.random.default_rng(seed)
    xgrid = centered_grid(lx, nx)
    ygrid = centered_grid(ly, ny)
    r12 = symbol("riesz12")
    step = xgrid.step

    partition_exact = True
    chain_slack = np.inf
    split_low = np.inf
    split_high = np.inf
    lc_err = 0.0
    a0 = 0.0
    a1 = 0.0
    max_ratio = 0.0

    for _ in range(corpus_size):
        f = gaussian_mixture_2d(rng, xgrid, ygrid)
        tf = apply_multiplier(f, r12)
        denom_p = mixed_norm(f, MixedNormSpec("y", INF, p))
        denom_p0 = mixed_norm(f, MixedNormSpec("y", INF, p0))
        denom_p1 = mixed_norm(f, MixedNormSpec("y", INF, p1))
        a0 = max(a0, max(weak_norm(Field1D(xgrid, row), p0)
                         for row in tf.values) / denom_p0)
        a1 = max(a1, max(weak_norm(Field1D(xgrid, row), p1)
                         for row in tf.values) / denom_p1)
        max_ratio = max(max_ratio,
                        mixed_norm(tf, MixedNormSpec("x", p, INF)) / denom_p)

        peak = float(np.max(np.abs(f.values)))
        for alpha in np.geomspace(0.05, 1.0, levels) * peak:
            split = truncation_split(f, float(alpha))
            if not np.array_equal(split.f0.values + split.f1.values, f.values):
                partition_exact = False
            tf0 = apply_multiplier(split.f0, r12)
            tf1 = apply_multiplier(split.f1, r12)
            lhs = np.count_nonzero(np.abs(tf.values) > alpha, axis=1) * step
            rhs = (np.count_nonzero(np.abs(tf0.values) > alpha / 2, axis=1)
                   + np.count_nonzero(np.abs(tf1.values) > alpha / 2, axis=1)) * step
            pos = lhs > 0
            if pos.any():
                chain_slack = min(chain_slack, float(np.min(rhs[pos] / lhs[pos])))
            w = trapezoid_weights(nx) * step
            lhs0 = np.sum(w * np.abs(split.f0.values) ** p0, axis=1)
            lhs1 = np.sum(w * np.abs(split.f1.values) ** p1, axis=1)
            rhs0 = alpha ** (p0 - p) * denom_p ** p
            rhs1 = alpha ** (p1 - p) * denom_p ** p
            pos0, pos1 = lhs0 > 0, lhs1 > 0
            if pos0.any():
                split_low = min(split_low, float(np.min(rhs0 / lhs0[pos0])))
            if pos1.any():
                split_high = min(split_high, float(np.min(rhs1 / lhs1[pos1])))

        for row in (tf.values[ny // 2], tf.values[ny // 4]):
            g = Field1D(xgrid, row)
            direct = p_norm(g, p) ** p
            lc_err = max(lc_err, abs(layer_cake(g, p) - direct) / direct)

    const = interpolation_constant(p0, p1, p, a0, a1)
    return InterpolationReport(
        p0=p0, p=p, p1=p1, corpus_size=corpus_size, seed=seed,
        partition_exact=partition_exact,
        min_chain_slack=float(chain_slack),
        min_split_slack_low=float(split_low),
        min_split_slack_high=float(split_high),
        max_layer_cake_err=float(lc_err),
        a0_emp=float(a0), a1_emp=float(a1),
        constant=float(const),
        max_ratio=float(max_ratio),
        bound_holds=bool(max_ratio <= const ** (1.0 / p)),
    )


# --- weak-(1,1) sweep -----------------------------------------------------------


@dataclass(frozen=True)
class Weak11Table:
    reports: tuple[Weak11Report, ...]

    @property
    def d_emp(self) -> float:
        return max((r.d_emp for r in self.reports), default=0.0)


def run_weak11(
    corpus_size: int = 20,
    alphas: Sequence[float] = (),
    seed: int = 7,
    nx: int = 512,
    ny: int = 64,
    lx: float = 16.0,
    ly: float = 4.0,
    symbol_name: str = "riesz12",
) -> Weak11Table:
    """Empirical weak-(1,1) ratios of a catalog operator on a seeded corpus."""
    if not alphas:
        alphas = tuple(np.geomspace(1e-3, 10.0, 40))
    rng = np.random.default_rng(seed)
    xgrid = centered_grid(lx, nx)
    ygrid = centered_grid(ly, ny)
    sym = symbol(symbol_name)
    reports = []
    for _ in range(corpus_size):
        f = gaussian_mixture_2d(rng, xgrid, ygrid)
        reports.append(weak11_witness(f, sym, alphas))
    return Weak11Table(tuple(reports))
