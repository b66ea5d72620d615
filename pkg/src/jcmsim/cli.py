"""Command-line front end.

One subcommand per experiment family:

* ``run``             -- one ensemble, time series CSV plus a stdout summary
* ``fit``             -- log-log power-law fit of a fidelity CSV
* ``noise-stats``     -- random-walk moment table and endpoint histogram
* ``sweep``           -- gate-end fidelity over a (p, delta_e) grid
* ``perturb-compare`` -- ensemble decay against the closed-form cubic law
* ``convergence``     -- final observables versus sample count

Exit codes: 0 success, 2 configuration error, 3 runtime error.  The thread
count comes from --threads, then the JCMSIM_THREADS environment variable,
then the machine default.  CSV outputs embed the effective configuration
and are byte-identical across reruns and thread counts for a fixed seed.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time

from .config import ConfigError, RunConfig, load_config_file, read_csv_columns, write_csv
from .fitting import loglog_fit

ENSEMBLE_HEADER = ("n", "t_over_T", "F", "stderr_F", "Sx", "Sy", "Sz", "norm_sq")
FIT_HEADER = ("label", "window_lo", "window_hi", "a", "b",
              "stderr_a", "stderr_b", "rms", "n_points", "n_excluded")
MOMENTS_HEADER = ("n", "sigma2_emp", "sigma2_theory", "m4_emp", "m4_theory",
                  "stderr2", "stderr4")
HIST_HEADER = ("bin_center", "count", "expected")
SWEEP_HEADER = ("p", "deltaE", "F_at_T", "stderr")
PERTURB_HEADER = ("t_over_T", "one_minus_F_mc", "one_minus_F_pred", "ratio", "in_window")
CONV_HEADER = ("M", "F_T", "stderr_F_T", "Sx_T", "Sy_T", "Sz_T", "norm_sq_T")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_config_flags(p: argparse.ArgumentParser, with_noise: bool = True) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--g", type=float, help="coupling constant (rad/s)")
    p.add_argument("--trunc", type=int, dest="K", help="photon-number cutoff K")
    p.add_argument("--gate-m", type=int, dest="m", help="gate timing integer m")
    p.add_argument("--steps", type=int, dest="N", help="time steps N per gate time")
    p.add_argument("--n-steps", type=int, help="evolve only the first n steps")
    if with_noise:
        p.add_argument("--p", type=float, help="jump probability per step")
        p.add_argument("--delta-e", type=float, help="field step amplitude (rad/s)")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--samples", type=int, help="Monte Carlo sample count M")
    p.add_argument("--initial", choices=("g012", "0plus", "g1"), help="initial state preset")
    p.add_argument("--record-stride", type=int, help="record every this many steps")
    p.add_argument("--threads", type=int, help="worker threads (default: JCMSIM_THREADS or all cores)")
    p.add_argument("--bitrepro", action="store_true",
                   help="force fixed-order reduction (already the default behaviour)")


def _merge_config(args) -> RunConfig:
    cfg = load_config_file(args.config) if getattr(args, "config", None) else RunConfig()
    keys = ("g", "K", "m", "N", "n_steps", "p", "delta_e", "seed", "samples",
            "initial", "record_stride")
    overrides = {k: getattr(args, k, None) for k in keys}
    return cfg.merged(overrides)


def _resolve_threads(args) -> int | None:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get("JCMSIM_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"JCMSIM_THREADS must be an integer (got {env!r})")
    return None


def _prepare_threads(n: int | None) -> None:
    # raise numba's process-wide cap before it is first imported, so thread
    # counts above the core count are honoured in fresh processes
    if n is not None and "numba" not in sys.modules:
        os.environ["NUMBA_NUM_THREADS"] = str(max(1, int(n)))


def _ensemble_rows(stats):
    for i in range(stats.steps.size):
        yield (int(stats.steps[i]), float(stats.t_over_T[i]), float(stats.F[i]),
               float(stats.stderr_F[i]), float(stats.Sx[i]), float(stats.Sy[i]),
               float(stats.Sz[i]), float(stats.norm_sq[i]))


def cmd_run(args) -> int:
    cfg = _merge_config(args)
    threads = _resolve_threads(args)
    _prepare_threads(threads)
    from . import engine

    t0 = time.perf_counter()
    stats = engine.run_ensemble(
        cfg.initial, cfg.jcm_params(), cfg.noise_params(),
        record_stride=cfg.record_stride, n_steps=cfg.n_steps, threads=threads,
        bitrepro=args.bitrepro,
    )
    wall = time.perf_counter() - t0
    write_csv(args.out, ENSEMBLE_HEADER, _ensemble_rows(stats), "run", cfg)
    b = stats.bloch_final()
    print(f"F(T) = {stats.F[-1]:.9g} +- {stats.stderr_F[-1]:.3g}")
    print(f"S(T) = ({b.Sx:.9g}, {b.Sy:.9g}, {b.Sz:.9g})")
    print(f"norm deficit = {stats.norm_deficit_final():.9g}")
    print(f"wall time = {wall:.2f} s   ({stats.M} samples, {stats.n_steps} steps)")
    print(f"wrote {args.out}")
    return 0


def cmd_fit(args) -> int:
    cols = read_csv_columns(args.input)
    for need in ("t_over_T", "F"):
        if need not in cols:
            raise ConfigError(f"{args.input}: missing required column {need!r}")
    lo, hi = args.window
    if not 0.0 < lo < hi:
        raise ConfigError(f"fit window must satisfy 0 < lo < hi (got {lo}, {hi})")
    stderr = cols.get("stderr_F") if args.weighted else None
    try:
        res = loglog_fit(cols["t_over_T"], cols["F"], (lo, hi),
                         stderr_F=stderr, weighted=args.weighted)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    row = (args.label, res.window_lo, res.window_hi, res.a, res.b,
           res.stderr_a, res.stderr_b, res.rms_residual, res.n_points, res.n_excluded)
    write_csv(args.out, FIT_HEADER, [row], "fit",
              extra_provenance={"input": str(args.input), "weighted": args.weighted})
    print(f"a = {res.a:.6g} +- {res.stderr_a:.3g}, b = {res.b:.6g} +- {res.stderr_b:.3g} "
          f"({res.n_points} points, {res.n_excluded} excluded)")
    print(f"wrote {args.out}")
    return 0


def cmd_noise_stats(args) -> int:
    cfg = _merge_config(args)
    noise = cfg.noise_params()
    from . import noise as noise_mod

    checkpoints = sorted(set(args.checkpoints))
    if not checkpoints or checkpoints[0] < 1:
        raise ConfigError("checkpoints must be positive step counts")
    hist_at = args.histogram_at if args.histogram_at is not None else checkpoints[-1]
    if hist_at not in checkpoints:
        checkpoints = sorted(checkpoints + [hist_at])
    levels = noise_mod.endpoint_levels(noise, checkpoints)
    rows = []
    for n in checkpoints:
        ms = noise_mod.moments_of_values(levels[n] * noise.delta_e)
        rows.append((n, ms.m2, noise_mod.variance_theory(noise, n),
                     ms.m4, noise_mod.fourth_moment_theory(noise, n),
                     ms.stderr2, ms.stderr4))
    write_csv(args.out_moments, MOMENTS_HEADER, rows, "noise-stats", cfg)
    hist = noise_mod.histogram_from_levels(levels[hist_at], noise.delta_e,
                                           hist_at, params=noise)
    write_csv(
        args.out_histogram, HIST_HEADER,
        zip(hist.centers, hist.counts, hist.expected),
        "noise-stats", cfg,
        extra_provenance={"histogram_at": hist_at, "degenerate": hist.degenerate},
    )
    print(f"wrote {args.out_moments} and {args.out_histogram}"
          + (" (degenerate: p = 0)" if hist.degenerate else ""))
    return 0


def cmd_sweep(args) -> int:
    cfg = _merge_config(args)
    threads = _resolve_threads(args)
    _prepare_threads(threads)
    from . import engine

    p_values = args.p_list if args.p_list is not None else [0.025 * i for i in range(13)]
    de_values = (args.delta_e_list if args.delta_e_list is not None
                 else [10.0 * i for i in range(11)])
    for p in p_values:
        if not 0.0 <= p <= 0.5:
            raise ConfigError(f"sweep p value {p} outside [0, 1/2]")
    res = engine.sweep_fidelity_surface(
        p_values, de_values, cfg.jcm_params(), cfg.samples,
        master_seed=cfg.seed, initial=cfg.initial, threads=threads,
    )
    rows = []
    for i, p in enumerate(res.p_values):
        for j, de in enumerate(res.delta_e_values):
            rows.append((float(p), float(de), float(res.F[i, j]), float(res.stderr[i, j])))
    write_csv(args.out, SWEEP_HEADER, rows, "sweep", cfg)
    print(f"wrote {args.out} ({len(rows)} vertices)")
    return 0


def cmd_perturb_compare(args) -> int:
    cfg = _merge_config(args)
    if cfg.initial not in ("0plus", "g1"):
        raise ConfigError(
            "perturb-compare requires initial 0plus or g1; the cubic decay law "
            "is not derived for the g012 superposition"
        )
    threads = _resolve_threads(args)
    _prepare_threads(threads)
    from . import engine, perturbation

    jcm, noise = cfg.jcm_params(), cfg.noise_params()
    stats = engine.run_ensemble(cfg.initial, jcm, noise,
                                record_stride=cfg.record_stride,
                                n_steps=cfg.n_steps, threads=threads)
    rows = []
    for i in range(stats.steps.size):
        tt = float(stats.t_over_T[i])
        mc = 1.0 - float(stats.F[i])
        pred_f, in_win = perturbation.predicted_fidelity(tt, jcm, noise)
        pred = 1.0 - pred_f
        ratio = mc / pred if pred > 0.0 else math.nan
        rows.append((tt, mc, pred, ratio, int(in_win)))
    write_csv(args.out, PERTURB_HEADER, rows, "perturb-compare", cfg)
    n_win = sum(r[4] for r in rows)
    print(f"wrote {args.out} ({n_win} of {len(rows)} recorded steps in the validity window)")
    return 0


def cmd_convergence(args) -> int:
    cfg = _merge_config(args)
    threads = _resolve_threads(args)
    _prepare_threads(threads)
    from . import engine

    if not args.m_list:
        raise ConfigError("convergence requires a non-empty --m-list")
    runs = engine.convergence_study(cfg.initial, cfg.jcm_params(), cfg.noise_params(),
                                    args.m_list, record_stride=cfg.N,
                                    n_steps=cfg.n_steps, threads=threads)
    rows = []
    for stats in runs:
        b = stats.bloch_final()
        rows.append((stats.M, float(stats.F[-1]), float(stats.stderr_F[-1]),
                     b.Sx, b.Sy, b.Sz, float(stats.norm_sq[-1])))
    write_csv(args.out, CONV_HEADER, rows, "convergence", cfg)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcmsim",
        description="Monte Carlo simulation of a Jaynes-Cummings sign-shift gate "
                    "under a stochastic dipole-coupled field",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one ensemble and write its time series")
    _add_config_flags(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("fit", help="fit ln(1-F) vs ln(t/T) on a window")
    p.add_argument("--input", required=True, help="ensemble CSV (needs t_over_T and F)")
    p.add_argument("--window", nargs=2, type=float, required=True,
                   metavar=("LO", "HI"), help="t/T window")
    p.add_argument("--label", default="fit", help="label column value")
    p.add_argument("--weighted", action="store_true",
                   help="weight points by stderr_F (default: plain least squares)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("noise-stats", help="field moment table and endpoint histogram")
    _add_config_flags(p)
    p.add_argument("--checkpoints", type=_int_list, required=True,
                   help="comma-separated step counts, e.g. 1000,10000")
    p.add_argument("--histogram-at", type=int,
                   help="step count for the histogram (default: last checkpoint)")
    p.add_argument("--out-moments", required=True)
    p.add_argument("--out-histogram", required=True)
    p.set_defaults(func=cmd_noise_stats)

    p = sub.add_parser("sweep", help="gate-end fidelity over a (p, delta_e) grid")
    _add_config_flags(p, with_noise=False)
    p.add_argument("--p-list", type=_float_list,
                   help="comma-separated p values (default: 0..0.3 in 12 segments)")
    p.add_argument("--delta-e-list", type=_float_list,
                   help="comma-separated delta_e values (default: 0..100 in 10 segments)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("perturb-compare",
                       help="ensemble fidelity decay against the cubic law")
    _add_config_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_perturb_compare)

    p = sub.add_parser("convergence", help="final observables versus sample count")
    _add_config_flags(p)
    p.add_argument("--m-list", type=_int_list, required=True,
                   help="comma-separated sample counts")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convergence)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime/numeric/IO
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
