"""Command line interface.

Subcommands:
  cex run       growth table of the counterexample stack (CSV, optional SVG)
  cex validate  slice formula against the 2-D spectral route
  interp check  splitting / chain / constant machinery on a seeded corpus
  weak11        empirical weak-(1,1) ratios on a seeded corpus
  norms         mixed norm of a field file
  czd           dyadic decomposition of a field file at a level
  selftest      condensed invariant suite

Exit codes: 0 success, 1 check failure, 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import harness
from .bumps import CounterexampleFamily, make_bump
from .decomposition import cz_decompose, lift, majorant
from .errors import MixedNormError
from .fourier import DEFAULT_HALF_WIDTH, DEFAULT_POINTS, ft1, ift1
from .grid_field import Field1D, field_from_fn, read_field, write_field
from .norms import (
    INF,
    MixedNormSpec,
    interpolation_constant,
    layer_cake,
    mixed_norm,
    p_norm,
    p_norm2,
    weak_norm,
)
from .operators import (
    SYMBOL_NAMES,
    apply_multiplier,
    double_riesz_kernel,
    slice_params,
    symbol,
    verify_kernel_conditions,
    window_floor_constant,
    window_margin,
)

__all__ = ["main"]


def _exponent(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return INF
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad exponent {text!r}") from None
    return p


def _alpha_spec(text: str) -> tuple[float, ...]:
    """Parse 'lo:hi:log|lin:count' into a level grid."""
    parts = text.split(":")
    if len(parts) != 4 or parts[2] not in ("log", "lin"):
        raise argparse.ArgumentTypeError(
            f"levels must look like 0.001:10:log:40, got {text!r}"
        )
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[3])
    if not (0 < lo < hi) or n < 1:
        raise argparse.ArgumentTypeError(f"bad level range {text!r}")
    if parts[2] == "log":
        return tuple(np.geomspace(lo, hi, n))
    return tuple(np.linspace(lo, hi, n))


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mixednorm", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    cex = sub.add_parser("cex", help="counterexample runners")
    cex_sub = cex.add_subparsers(dest="cex_command", required=True)

    run = cex_sub.add_parser("run", help="growth table -> CSV")
    run.add_argument("--j0", type=int, default=13)
    run.add_argument("--nmax", type=int, default=26)
    run.add_argument("--a", type=float, default=4.0, help="band width")
    run.add_argument("--points", type=int, default=512,
                     help="quadrature points per window")
    run.add_argument("--config", help="JSON file with {j0, nmax, A}; flags win")
    run.add_argument("--out", required=True)
    run.add_argument("--svg")

    val = cex_sub.add_parser("validate", help="slice formula vs 2-D route")
    val.add_argument("--jmin", type=int, default=3)
    val.add_argument("--jmax", type=int, default=7)
    val.add_argument("--nx", type=int, default=DEFAULT_POINTS)
    val.add_argument("--ny", type=int, default=1024)
    val.add_argument("--lx", type=float, default=DEFAULT_HALF_WIDTH)
    val.add_argument("--a", type=float, default=4.0)
    val.add_argument("--tol", type=float, default=0.02)

    interp = sub.add_parser("interp", help="interpolation machinery")
    interp_sub = interp.add_subparsers(dest="interp_command", required=True)
    chk = interp_sub.add_parser("check")
    chk.add_argument("--p0", type=float, default=1.0)
    chk.add_argument("--p", type=float, default=2.0)
    chk.add_argument("--p1", type=float, default=3.0)
    chk.add_argument("--corpus", type=int, default=20)
    chk.add_argument("--seed", type=int, default=7)

    wk = sub.add_parser("weak11", help="empirical weak-(1,1) ratios")
    wk.add_argument("--corpus", type=int, default=20)
    wk.add_argument("--seed", type=int, default=7)
    wk.add_argument("--alphas", type=_alpha_spec, default="0.001:10:log:40")
    wk.add_argument("--symbol", choices=SYMBOL_NAMES, default="riesz12")

    app = sub.add_parser("apply", help="apply a catalog operator to a field file")
    app.add_argument("--symbol", choices=SYMBOL_NAMES, required=True)
    app.add_argument("--input", required=True)
    app.add_argument("--out", required=True)

    nm = sub.add_parser("norms", help="mixed norm of a 2-D field file")
    nm.add_argument("--inner-axis", choices=("x", "y"), required=True)
    nm.add_argument("--inner", type=_exponent, required=True)
    nm.add_argument("--outer", type=_exponent, required=True)
    nm.add_argument("--input", required=True)

    cz = sub.add_parser("czd", help="dyadic decomposition of sample magnitudes")
    cz.add_argument("--input", required=True)
    cz.add_argument("--alpha", type=float, required=True)
    cz.add_argument("--out", required=True)

    sub.add_parser("selftest", help="condensed invariant suite")
    return ap


def _cmd_cex_run(args) -> int:
    j0, nmax, width = args.j0, args.nmax, args.a
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        j0 = cfg.get("j0", j0)
        nmax = cfg.get("nmax", nmax)
        width = cfg.get("A", cfg.get("a", width))
    family = CounterexampleFamily(j0=j0, nmax=nmax, band_width=width)
    rows = harness.run_counterexample(family,
                                      quad_points_per_window=args.points)
    text = harness.growth_csv(rows)
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    if args.svg:
        with open(args.svg, "w", newline="") as fh:
            fh.write(harness.growth_svg(rows))
    last = rows[-1]
    print(f"wrote {args.out}: {len(rows)} rows, "
          f"final ratio {format(last.ratio, '.12g')}")
    return 0


def _cmd_cex_validate(args) -> int:
    report = harness.run_path_validation(
        range(args.jmin, args.jmax + 1), nx=args.nx, ny=args.ny,
        lx=args.lx, tol=args.tol, band_width=args.a,
    )
    for row in report.rows:
        status = "PASS" if row.passed else "FAIL"
        print(f"j={row.j}  rel L2 = {row.rel_l2:.6f}  tol = {row.tol:g}  {status}")
    if not report.rows:
        print("empty j range, nothing to validate")
    return 0 if report.passed else 1


def _cmd_interp_check(args) -> int:
    rep = harness.run_interpolation_check(
        corpus_size=args.corpus, p0=args.p0, p=args.p, p1=args.p1, seed=args.seed,
    )
    print(f"corpus {rep.corpus_size} (seed {rep.seed}), exponents "
          f"({rep.p0:g}, {rep.p:g}, {rep.p1:g})")
    print(f"partition exact:        {rep.partition_exact}")
    print(f"chain slack (min):      {rep.min_chain_slack:.6g}")
    print(f"split slack low (min):  {rep.min_split_slack_low:.6g}")
    print(f"split slack high (min): {rep.min_split_slack_high:.6g}")
    print(f"layer-cake error (max): {rep.max_layer_cake_err:.3e}")
    print(f"empirical A0, A1:       {rep.a0_emp:.6g}, {rep.a1_emp:.6g}")
    print(f"constant, max ratio:    {rep.constant:.6g}, {rep.max_ratio:.6g} "
          f"(bound holds: {rep.bound_holds})")
    ok = (rep.partition_exact and rep.min_chain_slack >= 1.0
          and rep.min_split_slack_low >= 1.0 and rep.min_split_slack_high >= 1.0
          and rep.max_layer_cake_err <= 1e-6)
    return 0 if ok else 1


def _cmd_apply(args) -> int:
    f = read_field(args.input)
    if isinstance(f, Field1D):
        print("error: catalog operators act on 2-D fields", file=sys.stderr)
        return 2
    out = apply_multiplier(f, symbol(args.symbol))
    write_field(args.out, out)
    print(f"wrote {args.out}")
    return 0


def _cmd_weak11(args) -> int:
    table = harness.run_weak11(corpus_size=args.corpus, seed=args.seed,
                               alphas=args.alphas, symbol_name=args.symbol)
    for i, rep in enumerate(table.reports):
        print(f"field {i:2d}: D_emp = {rep.d_emp:.6g}  "
              f"(input norm {rep.denominator:.6g})")
    print(f"overall D_emp = {table.d_emp:.6g}")
    return 0 if math.isfinite(table.d_emp) else 1


def _cmd_norms(args) -> int:
    f = read_field(args.input)
    if isinstance(f, Field1D):
        print("error: mixed norms need a 2-D field", file=sys.stderr)
        return 2
    spec = MixedNormSpec(args.inner_axis, args.inner, args.outer)
    print(format(mixed_norm(f, spec), ".12g"))
    return 0


def _cmd_czd(args) -> int:
    f = read_field(args.input)
    if isinstance(f, Field1D):
        h = Field1D(f.grid, np.abs(f.values).astype(complex))
    else:
        h = majorant(f)
    dec = cz_decompose(h, args.alpha)
    good_path = args.out + ".good.json"
    bad_path = args.out + ".bad.json"
    write_field(good_path, dec.good)
    write_field(bad_path, dec.bad)
    obj = {
        "alpha": dec.alpha,
        "mass": dec.mass,
        "intervals": [[q.lo, q.hi] for q in dec.intervals],
        "good": good_path,
        "bad": bad_path,
    }
    with open(args.out, "w") as fh:
        json.dump(obj, fh, indent=1, allow_nan=False)
        fh.write("\n")
    print(f"wrote {args.out}: {len(dec.intervals)} intervals, "
          f"total length {format(dec.total_selected_length, '.12g')}")
    return 0


# --- selftest -------------------------------------------------------------------


def _selftest_checks():
    from .harness import centered_grid, gaussian_mixture_1d, gaussian_mixture_2d

    def gaussian_calibration():
        g = centered_grid(16.0, 4096)
        f = field_from_fn(g, lambda x: np.exp(-x * x))
        s = ft1(f)
        exact = np.exp(-s.grid.points() ** 2 / 4.0) / np.sqrt(2.0)
        err = float(np.max(np.abs(s.values - exact)))
        plan = abs(p_norm(s, 2) - p_norm(f, 2)) / p_norm(f, 2)
        return err <= 1e-8 and plan <= 1e-10, f"max err {err:.2e}, plancherel {plan:.2e}"

    def roundtrip():
        rng = np.random.default_rng(3)
        g = centered_grid(8.0, 512)
        f = gaussian_mixture_1d(rng, g)
        back = ift1(ft1(f))
        rel = float(np.max(np.abs(back.values - f.values)) / np.max(np.abs(f.values)))
        return rel <= 1e-10, f"roundtrip rel {rel:.2e}"

    def derivative_identity():
        g = centered_grid(8.0, 512)
        u = field_from_fn(g, g, lambda x, y: np.exp(-x * x - y * y))
        from .fourier import ft2, ift2, Spectrum2D
        s = ft2(u)
        k1 = s.xgrid.points()[None, :]
        k2 = s.ygrid.points()[:, None]
        lap = ift2(Spectrum2D(s.xgrid, s.ygrid, -(k1**2 + k2**2) * s.values,
                              source_xgrid=s.source_xgrid, source_ygrid=s.source_ygrid))
        mixed = ift2(Spectrum2D(s.xgrid, s.ygrid, -(k1 * k2) * s.values,
                                source_xgrid=s.source_xgrid, source_ygrid=s.source_ygrid))
        t = apply_multiplier(lap, symbol("riesz12"))
        num = p_norm2(type(u)(u.xgrid, u.ygrid, t.values - mixed.values), 2)
        rel = num / p_norm2(mixed, 2)
        return rel <= 1e-6, f"identity rel {rel:.2e}"

    def kernel_conditions():
        rep = verify_kernel_conditions(double_riesz_kernel(), [0.5, 1, 2, 4, 8, 16])
        canc = max(abs(v) for v in rep.annulus_integrals)
        sup_err = abs(rep.unit_circle_sup - 1.0 / (4 * np.pi))
        stab = max(h.stability for h in rep.hormander)
        ok = canc <= 1e-10 and sup_err <= 1e-6 and stab < 0.01
        return ok, f"cancel {canc:.1e}, sup err {sup_err:.1e}, stability {stab:.2%}"

    def bump_shape():
        b = make_bump((0.0, 4.0), (0.25, 3.75))
        vals = (b(2.0), b(-0.1), b(4.2), b(0.125))
        ok = vals[0] == 1.0 and vals[1] == 0.0 and vals[2] == 0.0 and abs(vals[3] - 0.5) < 1e-12
        return ok, f"plateau/outside/midpoint {vals}"

    def floor_and_margin():
        e = window_floor_constant(4.0)
        fam = CounterexampleFamily(j0=13, nmax=26, band_width=4.0)
        params = slice_params(fam)
        m = min(window_margin(params, j, 26) for j in range(13, 27))
        return abs(e - 0.0515) / 0.0515 <= 0.01 and m > 0, f"floor {e:.5f}, margin {m:.5f}"

    def path_j3():
        rep = harness.run_path_validation([3])
        return rep.passed, f"rel {rep.rows[0].rel_l2:.4f}"

    def layer_cake_direct():
        rng = np.random.default_rng(11)
        g = centered_grid(8.0, 512)
        worst = 0.0
        for _ in range(5):
            f = gaussian_mixture_1d(rng, g)
            for p in (1.5, 2.0, 3.0):
                direct = p_norm(f, p) ** p
                worst = max(worst, abs(layer_cake(f, p) - direct) / direct)
        return worst <= 1e-6, f"max rel err {worst:.2e}"

    def chebyshev():
        rng = np.random.default_rng(12)
        g = centered_grid(8.0, 512)
        ok = True
        for _ in range(5):
            f = gaussian_mixture_1d(rng, g)
            for p in (1.0, 2.0, 3.0):
                ok = ok and weak_norm(f, p) <= p_norm(f, p) * (1 + 1e-12)
        return ok, "weak <= strong"

    def decomposition_suite():
        rng = np.random.default_rng(13)
        g = centered_grid(16.0, 512)
        ok = True
        detail = ""
        for _ in range(10):
            h = gaussian_mixture_1d(rng, g, nonneg=True)
            hv = h.values.real
            for frac in (0.2, 0.5, 0.9):
                alpha = frac * float(hv.max())
                dec = cz_decompose(h, alpha)
                for q in dec.intervals:
                    a, b = q.cells
                    avg = hv[max(a, 0):min(b, 512)].sum() / (b - a)
                    ok = ok and (alpha < avg <= 2 * alpha * (1 + 1e-12))
                ok = ok and dec.total_selected_length <= dec.mass / alpha * (1 + 1e-9)
                off = hv[np.abs(dec.bad.values) == 0]
                ok = ok and (off.size == 0 or off.max() <= alpha * (1 + 1e-9))
        return ok, detail or "stopping-time invariants"

    def lift_suite():
        rng = np.random.default_rng(14)
        xg = centered_grid(16.0, 256)
        yg = centered_grid(4.0, 32)
        ok = True
        for _ in range(3):
            f = gaussian_mixture_2d(rng, xg, yg)
            h = majorant(f)
            alpha = 0.4 * float(np.abs(h.values).max())
            dec = cz_decompose(h, alpha)
            lf = lift(f, dec)
            ok = ok and np.array_equal(f.values - lf.f1.values, lf.f2.values)
            for _, piece in lf.pieces:
                tot = np.abs(piece.values).sum(axis=1) * xg.step
                res = np.abs(piece.values.sum(axis=1)) * xg.step
                pos = tot > 0
                ok = ok and (not pos.any() or float((res[pos] / tot[pos]).max()) <= 1e-10)
        return ok, "partition and mean-zero pieces"

    def constant_value():
        v = interpolation_constant(1.0, 3.0, 2.0, 1.0, 1.0)
        return v == 20.0, f"value {v}"

    def determinism():
        fam = CounterexampleFamily(j0=13, nmax=16, band_width=4.0)
        a = harness.growth_csv(harness.run_counterexample(fam, quad_points_per_window=128))
        b = harness.growth_csv(harness.run_counterexample(fam, quad_points_per_window=128))
        return a == b, "identical CSV"

    return [
        ("gaussian-calibration", gaussian_calibration),
        ("transform-roundtrip", roundtrip),
        ("mixed-derivative-identity", derivative_identity),
        ("kernel-conditions", kernel_conditions),
        ("bump-shape", bump_shape),
        ("window-floor-and-margin", floor_and_margin),
        ("path-equivalence-j3", path_j3),
        ("layer-cake", layer_cake_direct),
        ("chebyshev", chebyshev),
        ("cz-decomposition", decomposition_suite),
        ("good-bad-lift", lift_suite),
        ("interpolation-constant", constant_value),
        ("determinism", determinism),
    ]


def _cmd_selftest(_args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            ok, detail = check()
        except MixedNormError as exc:
            ok, detail = False, f"error: {exc}"
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "cex" and args.cex_command == "run":
            return _cmd_cex_run(args)
        if args.command == "cex" and args.cex_command == "validate":
            return _cmd_cex_validate(args)
        if args.command == "interp":
            return _cmd_interp_check(args)
        if args.command == "apply":
            return _cmd_apply(args)
        if args.command == "weak11":
            return _cmd_weak11(args)
        if args.command == "norms":
            return _cmd_norms(args)
        if args.command == "czd":
            return _cmd_czd(args)
        if args.command == "selftest":
            return _cmd_selftest(args)
    except MixedNormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unhandled command")


if __name__ == "__main__":
    sys.exit(main())
