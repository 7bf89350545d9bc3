"""Command-line entry point ``modflow``.

Subcommands
  verify  run verification suites, write JSON reports and CSV check tables
  flow    trace points along the wedge, cone or double-cone flow
  expand  tabulate the asymptotic expansion of the relativistic energy
  kms     boost-orbit correlator, its spectrum and the fitted inverse temperature
  kernel  exact mass shift versus the kernel route on radial Gaussians
  temp    temperature profiles along observer worldlines

Exit codes: 0 success, 1 failed check or numerical error, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import conformal, flows, freefield, geometry, grid, nonlocal_groups, psdo, thermal
from .config import RunConfig, load_config
from .errors import ConfigError, ModflowError
from .report import VerificationReport

SUITES = ("geometry", "conformal", "modflow", "psdo", "nonlocal", "freefield", "thermal")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _suite_rng(cfg: RunConfig, name: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, SUITES.index(name)])


def run_named_suite(name: str, cfg: RunConfig) -> VerificationReport:
    rng = _suite_rng(cfg, name)
    t0 = time.perf_counter()
    if name == "geometry":
        rep = geometry.run_suite(rng, cfg.geometry_samples)
    elif name == "conformal":
        rep = conformal.run_suite(rng)
    elif name == "modflow":
        rep = flows.run_suite(rng, cfg.flow_samples)
    elif name == "psdo":
        rep = psdo.run_suite(cfg.psdo_L, cfg.psdo_N)
    elif name == "nonlocal":
        rep = nonlocal_groups.run_suite(rng, tuple(cfg.by_betas), cfg.by_n_max)
    elif name == "freefield":
        rep = freefield.run_suite(rng, cfg.freefield_quick, cfg.kms_eps, cfg.kms_window)
    elif name == "thermal":
        rep = thermal.run_suite()
    else:
        raise ConfigError(f"unknown suite {name!r}")
    rep.suite = name
    rep.wall_time = time.perf_counter() - t0
    if cfg.tolerance is not None:
        rep.override_tolerance(cfg.tolerance)
    return rep


# ------------------------------------------------------------------ output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(stream, header: list[str], rows, meta: dict) -> None:
    """'#'-prefixed metadata lines, a header row, then the rows."""
    for k, v in meta.items():
        stream.write(f"# {k}={_fmt(v)}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])


def _emit(args, cfg: RunConfig, header, rows, meta: dict) -> None:
    meta = {"command": args.command, "config_digest": cfg.digest(), **meta}
    out = args.out or cfg.out
    if out:
        with open(out, "w", newline="") as fh:
            write_csv(fh, header, rows, meta)
    else:
        write_csv(sys.stdout, header, rows, meta)


def _resolved_meta(rep: VerificationReport) -> dict:
    return {f"resolved.{k}": v for k, v in sorted(rep.resolved.items()) if not isinstance(v, (list, dict, tuple))}


CHECK_HEADER = ["suite", "id", "pass", "measured", "expected", "tol", "mode", "note"]


def _check_rows(rep: VerificationReport):
    return [[rep.suite, c.id, c.passed, c.measured, c.expected, c.tol, c.mode, c.note] for c in rep.checks]


# ---------------------------------------------------------------- commands


def cmd_verify(args, cfg: RunConfig) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    grid.set_workers(cfg.workers)
    n_pool = max(1, min(cfg.workers, len(names)))
    if n_pool > 1:
        with ThreadPoolExecutor(max_workers=n_pool) as ex:
            reports = list(ex.map(lambda n: run_named_suite(n, cfg), names))
    else:
        reports = [run_named_suite(n, cfg) for n in names]
    out = args.out or cfg.out
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for rep in reports:
            (d / f"report_{rep.suite}.json").write_text(rep.to_json() + "\n")
            with open(d / f"checks_{rep.suite}.csv", "w", newline="") as fh:
                write_csv(fh, CHECK_HEADER, _check_rows(rep), {"suite": rep.suite, "seed": cfg.seed, "config_digest": cfg.digest(), **_resolved_meta(rep)})
        for rep in reports:
            print(f"{rep.summary()}  [{rep.wall_time:.1f} s]")
    else:
        rows = [r for rep in reports for r in _check_rows(rep)]
        meta = {"command": "verify", "suite": args.suite, "seed": cfg.seed, "config_digest": cfg.digest()}
        for rep in reports:
            meta.update(_resolved_meta(rep))
        write_csv(sys.stdout, CHECK_HEADER, rows, meta)
        for rep in reports:
            print(f"{rep.summary()}  [{rep.wall_time:.1f} s]", file=sys.stderr)
    for rep in reports:
        for c in rep.failures():
            print(f"FAILED {rep.suite}:{c.id} measured={_fmt(c.measured)} tol={_fmt(c.tol)}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"could not parse number list {text!r}") from e


def cmd_flow(args, cfg: RunConfig) -> int:
    kind = flows.FlowKind.parse(args.kind)
    svals = _floats(args.s)
    if args.x is not None:
        pts = np.array([_floats(p) for p in args.x.split(";")])
        if pts.shape[1] != 4:
            raise ConfigError("--x needs four comma-separated coordinates per point")
    else:
        rng = np.random.default_rng(cfg.seed)
        pts = geometry.sample_region(kind.region, args.samples, rng)
    rows = []
    for s in svals:
        img = flows.flow_point(kind, s, pts)
        for p, q in zip(pts, np.atleast_2d(img)):
            rows.append([kind.value, s, *p, *q])
    header = ["kind", "s", "x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"]
    _emit(args, cfg, header, rows, {"seed": cfg.seed})
    return EXIT_OK


def cmd_expand(args, cfg: RunConfig) -> int:
    if args.N < 1:
        raise ConfigError("--N must be at least 1")
    ex = psdo.energy_expansion(args.m, max(args.N - 1, 1), regime=args.regime, inverse=args.inverse)
    rows = [[k, t.power, t.coefficient] for k, t in enumerate(ex.terms[: args.N])]
    meta = {"m": args.m, "regime": args.regime, "inverse": args.inverse}
    if args.remainder and args.m > 0 and args.regime == "ur":
        meta["remainder_order"] = psdo.expansion_remainder_order(args.m, args.N, inverse=args.inverse)
    _emit(args, cfg, ["k", "order", "coefficient"], rows, meta)
    return EXIT_OK


def cmd_kms(args, cfg: RunConfig) -> int:
    x, y = _floats(args.x), _floats(args.y)
    eps = args.eps if args.eps is not None else cfg.kms_eps
    window = args.window if args.window is not None else cfg.kms_window
    rep = freefield.kms_boost_check(x, y, T_window=window, eps=eps)
    beta = rep.resolved["kms_beta"]
    meta = {"x": args.x, "y": args.y, "eps": eps, "window": window, "fitted_beta": beta, "beta_over_2pi": beta / (2 * np.pi), "unruh_T_a=1": 1.0 / beta}
    if args.table == "samples":
        s, g = rep.data["samples"]
        idx = range(0, len(s), args.stride)
        rows = [[s[i], g[i].real, g[i].imag] for i in idx]
        header = ["s", "re_G", "im_G"]
    else:
        E, gp, gm = rep.data["spectrum"]
        rows = [[e, abs(a), abs(b), np.log(abs(a) / abs(b))] for e, a, b in zip(E, gp, gm)]
        header = ["E", "abs_G_plus", "abs_G_minus", "log_ratio"]
    _emit(args, cfg, header, rows, meta)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_kernel(args, cfg: RunConfig) -> int:
    widths = _floats(args.widths)
    masses = _floats(args.m)
    r_max = args.r_max if args.r_max is not None else cfg.radial_r_max
    N = args.N if args.N is not None else cfg.radial_N
    ref = freefield.radial_gaussian(1.0, r_max, N)
    c = freefield.calibrate_f_rest(ref, 1.0)
    rows = []
    for w in widths:
        f = freefield.radial_gaussian(w, r_max, N)
        for m in masses:
            exact = freefield.mass_shift_exact(f, m)
            kern = freefield.f_rest_kernel(f, m, c)
            err = freefield.rel_l2_radial(f.with_values(f.values + kern.values), exact)
            rows.append([w, m, err])
    meta = {"r_max": r_max, "N": N, "calibrated_c": c, "c_times_2pi^2": c * 2 * np.pi**2, "c_over_minus_4pi": c / freefield.F_REST_C_ALT}
    _emit(args, cfg, ["width", "m", "rel_l2_error"], rows, meta)
    return EXIT_OK


def _tau_range(text: str) -> np.ndarray:
    parts = _floats(text.replace(":", ","))
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise ConfigError("--tau-range must be start:stop:step with step > 0 and stop >= start")
    start, stop, step = parts
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def cmd_temp(args, cfg: RunConfig) -> int:
    taus = _tau_range(args.tau_range)
    spec = thermal.ObserverSpec(args.a, thermal.ObserverRegion(args.observer), args.L)
    T = np.atleast_1d(spec.temperature(taus))
    rows = [[t, v] for t, v in zip(taus, T)]
    _emit(args, cfg, ["tau", "T"], rows, {"observer": args.observer, "a": args.a, "L": args.L})
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", help="JSON config file (fallback: $MODFLOW_CONFIG)")
    g.add_argument("--out", metavar="PATH", help="output file (directory for verify); default stdout")
    g.add_argument("--seed", type=int, help="random seed (default 0)")
    g.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    g.add_argument("--tolerance", type=float, help="override every discrepancy tolerance")

    p = argparse.ArgumentParser(prog="modflow", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification suites",
                       description="Run a suite; CSV columns: " + ",".join(CHECK_HEADER))
    v.add_argument("suite", choices=SUITES + ("all",))
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("flow", parents=[common], help="trace points along a modular flow",
                       description="CSV columns: kind,s,x0..x3 (input),y0..y3 (image)")
    f.add_argument("--kind", required=True, choices=[k.value for k in flows.FlowKind])
    f.add_argument("--s", required=True, help="flow parameter(s), comma separated")
    f.add_argument("--x", help="point(s) x0,x1,x2,x3; several separated by ';'")
    f.add_argument("--samples", type=int, default=5, help="random points from the flow's region when --x is absent")
    f.set_defaults(func=cmd_flow)

    e = sub.add_parser("expand", parents=[common], help="energy expansion term table",
                       description="CSV columns: k,order,coefficient (term coefficient*|xi|^order)")
    e.add_argument("--m", type=float, required=True)
    e.add_argument("--N", type=int, required=True, help="number of terms")
    e.add_argument("--regime", choices=("ur", "nr"), default="ur")
    e.add_argument("--inverse", action="store_true", help="expand (xi^2 + m^2)^{-1/2}")
    e.add_argument("--remainder", action="store_true", help="add the fitted remainder order to the metadata")
    e.set_defaults(func=cmd_expand)

    k = sub.add_parser("kms", parents=[common], help="detailed-balance fit along a boost orbit",
                       description="CSV columns: spectrum table E,abs_G_plus,abs_G_minus,log_ratio or samples table s,re_G,im_G")
    k.add_argument("--x", default="0,1,0,0")
    k.add_argument("--y", default="0,1,0.5,0")
    k.add_argument("--eps", type=float)
    k.add_argument("--window", type=float, help="half-width of the s window")
    k.add_argument("--table", choices=("spectrum", "samples"), default="spectrum")
    k.add_argument("--stride", type=int, default=256, help="decimation of the samples table")
    k.set_defaults(func=cmd_kms)

    r = sub.add_parser("kernel", parents=[common], help="mass-shift kernel versus exact multiplier",
                       description="CSV columns: width,m,rel_l2_error")
    r.add_argument("--m", default="0.5,1,2")
    r.add_argument("--widths", default="0.7,1.0,1.5")
    r.add_argument("--r-max", dest="r_max", type=float)
    r.add_argument("--N", type=int)
    r.set_defaults(func=cmd_kernel)

    t = sub.add_parser("temp", parents=[common], help="observer temperature profile",
                       description="CSV columns: tau,T")
    t.add_argument("--observer", required=True, choices=[o.value for o in thermal.ObserverRegion])
    t.add_argument("--a", type=float, required=True)
    t.add_argument("--L", type=float, default=1.0)
    t.add_argument("--tau-range", dest="tau_range", default="0:1:0.1", help="start:stop:step, end inclusive")
    t.set_defaults(func=cmd_temp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, {"seed": args.seed, "threads": args.threads, "tolerance": args.tolerance})
        if args.threads:
            grid.set_workers(args.threads)
        return args.func(args, cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ModflowError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
