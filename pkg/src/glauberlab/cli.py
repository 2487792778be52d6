"""Command-line front end.

Rule specs: "const:c", "dmfl:gamma", "dmfl-field:gamma:mu",
"chafee-infante:a0:a1:a2", or "file:path" (rule table file).
Initial-profile specs for `hydro`: "const:c", "cos:amplitude", "file:path".
CSV schemas are documented in each subcommand's --help epilog.
"""

from __future__ import annotations

import argparse
import json
import sys
import time as _time

import numpy as np

from glauberlab.core import SpinConfig
from glauberlab.experiments import (
    ExperimentConfig,
    lower_witness,
    mix_scan,
    tv_bracket,
    variance_probe,
    witness_scaling,
    write_csv,
    write_manifest,
)
from glauberlab.oracle import build_generator, exact_tmix, tv_curve as oracle_tv_curve
from glauberlab.pde import hydro_compare, parse_profile_spec
from glauberlab.rates import check_reversible_form, parse_rule_spec
from glauberlab.sim import couple, simulate, stream_seed
from glauberlab.walks import (
    occupation_time_sample,
    replacement_defect,
    srw_heat_kernel,
    ssep_vs_independent,
)


def _parse_initial(text: str, n: int) -> SpinConfig:
    if text == "plus":
        return SpinConfig.all_plus(n)
    if text == "minus":
        return SpinConfig.all_minus(n)
    return SpinConfig.from_string(text)


def _add_common(p, replicas_default=1):
    p.add_argument("--rule", required=True, help="jump-rate spec")
    p.add_argument("--n", type=int, required=True, help="lattice size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p.add_argument("--replicas", type=int, default=replicas_default)


def _emit(path, header, rows):
    if path is None:
        sys.stdout.write(",".join(header) + "\n")
        for row in rows:
            sys.stdout.write(",".join(str(v) for v in row) + "\n")
    else:
        write_csv(path, header, rows)


def cmd_simulate(args) -> int:
    rule = parse_rule_spec(args.rule)
    initial = _parse_initial(args.initial, args.n)
    times = np.linspace(0.0, args.t_end, args.points) if args.points else np.array([args.t_end])
    rows = []
    for r in range(args.replicas):
        res = simulate(rule, initial, args.t_end, stream_seed(args.seed, r), times)
        for t, s in zip(res.times, res.magnetization):
            rows.append((r, float(t), float(s)))
        if args.replicas == 1 and args.out is None:
            print(res.final.to_string(), file=sys.stderr)
    _emit(args.out, ["replica", "t", "magnetization"], rows)
    return 0


def cmd_couple(args) -> int:
    rule = parse_rule_spec(args.rule)
    upper = _parse_initial(args.upper, args.n)
    lower = _parse_initial(args.lower, args.n)
    if args.trace:
        times = np.linspace(0.0, args.t_max, args.points or 64)
        rows = []
        for r in range(args.replicas):
            res = couple(rule, upper, lower, args.t_max, stream_seed(args.seed, r),
                         sample_times=times, run_to_end=True)
            for t, x in zip(res.times, res.xi):
                rows.append((r, float(t), float(x)))
        _emit(args.out, ["replica", "t", "xi"], rows)
    else:
        rows = []
        for r in range(args.replicas):
            res = couple(rule, upper, lower, args.t_max, stream_seed(args.seed, r))
            rows.append((r, "" if res.tau is None else float(res.tau),
                         "true" if res.timed_out else "false"))
        _emit(args.out, ["replica", "tau", "timed_out"], rows)
    return 0


def cmd_oracle(args) -> int:
    rule = parse_rule_spec(args.rule)
    gen = build_generator(rule, args.n)
    times = [float(t) for t in args.times]
    curve = oracle_tv_curve(gen, times) if times else np.array([])
    doc = {
        "pi": [float(p) for p in gen.pi],
        "tv_curve": [[t, float(d)] for t, d in zip(times, curve)],
        "tmix": exact_tmix(gen, args.delta),
        "reversible": check_reversible_form(rule) is not None,
    }
    text = json.dumps(doc, indent=2)
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0


def cmd_hydro(args) -> int:
    rule = parse_rule_spec(args.rule)
    rho0 = parse_profile_spec(args.profile, args.m)
    res = hydro_compare(rule, rho0, args.n, args.m, args.t, args.replicas, args.seed)
    rows = [
        (j, float(res.u[j]), float(res.empirical_mean[j]), float(res.empirical_se[j]), float(res.pde[j]))
        for j in range(args.m)
    ]
    _emit(args.out, ["block", "u", "empirical_mean", "empirical_se", "pde_value"], rows)
    print(f"linf_error={res.linf_error:.6g} l2_error={res.l2_error:.6g}", file=sys.stderr)
    return 0


def cmd_walks(args) -> int:
    if args.mode == "kernel":
        rows = [(y, srw_heat_kernel(args.n, args.lam, args.t, 0, y)) for y in range(args.n)]
        _emit(args.out, ["y", "p"], rows)
    elif args.mode == "occupation":
        rows = [
            (r, occupation_time_sample(args.n, args.t, stream_seed(args.seed, r)))
            for r in range(args.replicas)
        ]
        _emit(args.out, ["replica", "theta"], rows)
    elif args.mode == "coupling":
        starts = [int(s) for s in args.starts.split(",")]
        rows = []
        for r in range(args.replicas):
            res = ssep_vs_independent(args.n, starts, args.t, stream_seed(args.seed, r))
            rows.append((r, res.max_displacement))
        _emit(args.out, ["replica", "max_displacement"], rows)
    else:  # defect
        cfg = _parse_initial(args.initial, args.n)
        sites = [int(s) for s in args.sites.split(",")]
        est = replacement_defect(cfg, sites, args.t, args.replicas, args.seed)
        _emit(args.out, ["defect", "se", "replicas"], [(est.value, est.se, est.replicas)])
    return 0


def _experiment_config(args, kind) -> ExperimentConfig:
    if args.config:
        return ExperimentConfig.from_toml(args.config)
    return ExperimentConfig(
        kind=kind,
        rule=args.rule,
        n=tuple(args.n),
        delta=args.delta,
        replicas=args.replicas,
        seed=args.seed,
        times=tuple(args.times or ()),
        epsilon=getattr(args, "epsilon", 0.2),
        out_dir=args.out_dir,
    )


def cmd_mix_scan(args) -> int:
    cfg = _experiment_config(args, "mix-scan")
    rule = parse_rule_spec(cfg.rule)
    t0 = _time.perf_counter()
    res = mix_scan(rule, cfg.n, cfg.delta, cfg.replicas, cfg.seed)
    rows = [
        (r.n, r.quantile, r.ci_lo, r.ci_hi, r.timeouts, r.violations) for r in res.rows
    ]
    out = f"{cfg.out_dir}/mix_scan.csv"
    write_csv(out, ["n", "quantile", "ci_lo", "ci_hi", "timeouts", "violations"], rows)
    write_manifest(
        f"{cfg.out_dir}/mix_scan_manifest.json",
        cfg,
        _time.perf_counter() - t0,
        extra={"slope": res.slope, "intercept": res.intercept,
               "slope_se": res.slope_se, "kappa_ref": res.kappa_ref},
    )
    print(f"slope={res.slope} intercept={res.intercept} ref={res.kappa_ref}")
    return 0


def cmd_lower_witness(args) -> int:
    cfg = _experiment_config(args, "lower-witness")
    rule = parse_rule_spec(cfg.rule)
    t0 = _time.perf_counter()
    curves = []
    rows = []
    for i, n in enumerate(cfg.n):
        times = np.asarray(cfg.times) if cfg.times else np.linspace(
            0.05, 2.0, 40
        ) * np.log(n)
        c = lower_witness(rule, n, times, cfg.replicas, stream_seed(cfg.seed, i))
        curves.append(c)
        for t, w, s in zip(c.times, c.witness, c.se):
            rows.append((n, float(t), float(w), float(s)))
    out = f"{cfg.out_dir}/lower_witness.csv"
    write_csv(out, ["n", "t", "witness", "se"], rows)
    extra = {}
    if len(curves) >= 3:
        sc = witness_scaling(curves, level=cfg.delta)
        extra = {"slope": sc.slope, "slope_se": sc.slope_se,
                 "drop_times": [d.t_star for d in sc.drops]}
        print(f"drop-time slope={sc.slope} se={sc.slope_se}")
    write_manifest(f"{cfg.out_dir}/lower_witness_manifest.json", cfg,
                   _time.perf_counter() - t0, extra=extra)
    return 0


def cmd_variance_probe(args) -> int:
    cfg = _experiment_config(args, "variance-probe")
    rule = parse_rule_spec(cfg.rule)
    t0 = _time.perf_counter()
    res = variance_probe(rule, cfg.n, cfg.epsilon, cfg.replicas, cfg.seed)
    rows = [(r.n, r.t_star, r.variance, r.se) for r in res.rows]
    write_csv(f"{cfg.out_dir}/variance_probe.csv", ["n", "t_star", "variance", "se"], rows)
    write_manifest(f"{cfg.out_dir}/variance_probe_manifest.json", cfg,
                   _time.perf_counter() - t0,
                   extra={"exponent": res.exponent, "exponent_se": res.exponent_se})
    print(f"exponent={res.exponent}")
    return 0


def cmd_tv_bracket(args) -> int:
    cfg = _experiment_config(args, "tv-bracket")
    rule = parse_rule_spec(cfg.rule)
    n = cfg.n[0]
    t0 = _time.perf_counter()
    times = np.asarray(cfg.times) if cfg.times else np.linspace(0.05, 2.0, 24)
    res = tv_bracket(rule, n, times, cfg.replicas, cfg.seed,
                     exact_lower=getattr(args, "exact_lower", False))
    rows = [
        (float(t), float(lo), float(ex), float(up))
        for t, lo, ex, up in zip(res.times, res.lower, res.oracle, res.upper)
    ]
    write_csv(f"{cfg.out_dir}/tv_bracket.csv", ["t", "lower", "oracle", "upper"], rows)
    write_manifest(f"{cfg.out_dir}/tv_bracket_manifest.json", cfg, _time.perf_counter() - t0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="glauber-lab",
        description="Spin-flip plus fast-stirring dynamics on the discrete torus.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample one chain",
                       epilog="CSV: replica,t,magnetization")
    _add_common(p)
    p.add_argument("--initial", default="plus", help="'plus', 'minus', or a +/- string")
    p.add_argument("--t-end", type=float, required=True, dest="t_end")
    p.add_argument("--points", type=int, default=0, help="magnetization samples on [0,t_end]")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("couple", help="run the monotone two-chain coupling",
                       epilog="CSV: replica,tau,timed_out (or replica,t,xi with --trace)")
    _add_common(p)
    p.add_argument("--upper", default="plus")
    p.add_argument("--lower", default="minus")
    p.add_argument("--t-max", type=float, required=True, dest="t_max")
    p.add_argument("--trace", action="store_true", help="emit the discordance trace instead of tau")
    p.add_argument("--points", type=int, default=0)
    p.set_defaults(func=cmd_couple)

    p = sub.add_parser("oracle", help="exact small-n analysis",
                       epilog="JSON: {pi, tv_curve, tmix, reversible}")
    p.add_argument("--rule", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.25)
    p.add_argument("--times", type=float, nargs="*", default=[])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("hydro", help="empirical density vs the limit equation",
                       epilog="CSV: block,u,empirical_mean,empirical_se,pde_value")
    _add_common(p, replicas_default=100)
    p.add_argument("--profile", required=True, help="initial profile spec")
    p.add_argument("--m", type=int, required=True, help="grid blocks (divides n)")
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(func=cmd_hydro)

    p = sub.add_parser("walks", help="walk kernels, couplings, and the defect")
    p.add_argument("mode", choices=["kernel", "occupation", "coupling", "defect"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--starts", default="0,1", help="comma-separated start sites (coupling)")
    p.add_argument("--sites", default="0,3", help="comma-separated product sites (defect)")
    p.add_argument("--initial", default="plus", help="configuration for the defect")
    p.add_argument("--replicas", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_walks)

    for name, fn, extra_eps in (
        ("mix-scan", cmd_mix_scan, False),
        ("lower-witness", cmd_lower_witness, False),
        ("variance-probe", cmd_variance_probe, True),
        ("tv-bracket", cmd_tv_bracket, False),
    ):
        p = sub.add_parser(name, help=f"{name} experiment")
        p.add_argument("--config", default=None, help="TOML config file")
        p.add_argument("--rule", default="dmfl:0.25")
        p.add_argument("--n", type=int, nargs="*", default=[32, 64, 128])
        p.add_argument("--delta", type=float, default=0.25)
        p.add_argument("--replicas", type=int, default=500)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--times", type=float, nargs="*", default=None)
        if extra_eps:
            p.add_argument("--epsilon", type=float, default=0.2)
        if name == "tv-bracket":
            p.add_argument("--exact-lower", action="store_true", dest="exact_lower",
                           help="compute the witness tail from the exact distribution")
        p.add_argument("--out-dir", default=".", dest="out_dir")
        p.set_defaults(func=fn)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
