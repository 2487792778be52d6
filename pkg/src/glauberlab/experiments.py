"""Scaling studies and result persistence.

Each study returns a plain dataclass; the CSV and manifest writers are
separate so the same study can back tests and the command line.  Re-running
an identical config with the same seed writes byte-identical CSVs.
"""

from __future__ import annotations

import hashlib
import json
import math
import subprocess
import time as _time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from glauberlab.core import SpinConfig
from glauberlab.oracle import build_generator, tv_curve
from glauberlab.rates import LocalRule, parse_rule_spec, reaction_profile
from glauberlab.sim import (
    coalescence_quantile,
    couple,
    simulate,
    stream_seed,
)
from glauberlab import _kernels

MIN_STATIONARY_SAMPLES = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str  # mix-scan | lower-witness | variance-probe | hydro-sweep | appendix-diag | tv-bracket
    rule: str
    n: tuple
    delta: float = 0.25
    replicas: int = 500
    seed: int = 0
    times: tuple = ()
    epsilon: float = 0.2
    out_dir: str = "."

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in np.atleast_1d(self.n)))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))

    @classmethod
    def from_toml(cls, path) -> "ExperimentConfig":
        import tomli

        with open(path, "rb") as fh:
            data = tomli.load(fh)
        return cls(**data)

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def write_csv(path, header, rows) -> None:
    """Deterministic CSV: fixed header, rows written in the given order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _git_revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"], capture_output=True, text=True, timeout=10
        )
        return out.stdout.strip() if out.returncode == 0 else "unknown"
    except OSError:
        return "unknown"


def write_manifest(path, config: ExperimentConfig, wall_seconds: float, extra=None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "config": asdict(config),
        "config_hash": config.digest(),
        "seed": config.seed,
        "git_revision": _git_revision(),
        "wall_seconds": round(wall_seconds, 3),
    }
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _wls_fit(x, y, se):
    """Weighted least-squares affine fit; returns (slope, intercept, slope_se)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = 1.0 / np.maximum(np.asarray(se, dtype=float), 1e-12) ** 2
    W = w.sum()
    xbar = (w * x).sum() / W
    ybar = (w * y).sum() / W
    sxx = (w * (x - xbar) ** 2).sum()
    slope = (w * (x - xbar) * (y - ybar)).sum() / sxx
    intercept = ybar - slope * xbar
    slope_se = 1.0 / math.sqrt(sxx)
    return float(slope), float(intercept), float(slope_se)


@dataclass(frozen=True)
class MixScanRow:
    n: int
    quantile: float
    ci_lo: float
    ci_hi: float
    timeouts: int
    violations: int


@dataclass(frozen=True)
class MixScanResult:
    rows: list
    delta: float
    slope: Optional[float]
    intercept: Optional[float]
    slope_se: Optional[float]
    kappa_ref: Optional[float]  # 1/kappa reference slope when kappa exists
    residuals: Optional[np.ndarray]
    taus: dict = field(default_factory=dict)  # n -> per-replica coalescence times


def mix_scan(
    rule: LocalRule,
    n_values,
    delta: float,
    replicas: int,
    seed: int,
    workers: int = 1,
) -> MixScanResult:
    """Coalescence quantile per n with an affine fit against log n.

    The fit is refused (None slope) with fewer than 3 distinct sizes; the
    per-n quantiles are reported either way.
    """
    n_values = sorted(set(int(v) for v in np.atleast_1d(n_values)))
    rows = []
    taus = {}
    ses = []
    for i, n in enumerate(n_values):
        q = coalescence_quantile(rule, n, delta, replicas, stream_seed(seed, i), workers=workers)
        rows.append(
            MixScanRow(
                n=n,
                quantile=q.quantile,
                ci_lo=q.quantile_ci[0],
                ci_hi=q.quantile_ci[1],
                timeouts=q.timeouts,
                violations=q.violations,
            )
        )
        taus[n] = q.taus
        ses.append(max((q.quantile_ci[1] - q.quantile_ci[0]) / (2 * 1.96), 1e-6))
    kappa = reaction_profile(rule).kappa
    if len(n_values) < 3:
        return MixScanResult(rows, delta, None, None, None,
                             None if kappa is None else 1.0 / kappa, None, taus)
    x = np.log([r.n for r in rows])
    y = np.array([r.quantile for r in rows])
    slope, intercept, slope_se = _wls_fit(x, y, ses)
    residuals = y - (slope * x + intercept)
    return MixScanResult(
        rows=rows,
        delta=delta,
        slope=slope,
        intercept=intercept,
        slope_se=slope_se,
        kappa_ref=None if kappa is None else 1.0 / kappa,
        residuals=residuals,
        taus=taus,
    )


def stationary_magnetization_samples(
    rule: LocalRule,
    n: int,
    count: int,
    seed: int,
    burn_in: Optional[float] = None,
    gap: Optional[float] = None,
) -> np.ndarray:
    """Magnetization samples from one long burned-in, thinned trajectory.

    Defaults: gap is the median coalescence time from the extreme pair and
    burn-in is ten times its delta=1/4 analogue, both estimated on the fly.
    """
    if count < MIN_STATIONARY_SAMPLES:
        raise ValueError(f"need at least {MIN_STATIONARY_SAMPLES} stationary samples")
    if burn_in is None or gap is None:
        q = coalescence_quantile(rule, n, 0.5, 40, stream_seed(seed, 1))
        med = q.quantile if np.isfinite(q.quantile) else 2.0 * math.log(n)
        if gap is None:
            gap = med
        if burn_in is None:
            q4 = float(np.sort(q.taus)[min(len(q.taus) - 1, math.ceil(0.75 * len(q.taus)) - 1)])
            burn_in = 10.0 * (q4 if np.isfinite(q4) else 2.0 * med)
    sample_times = burn_in + gap * np.arange(1, count + 1)
    spins = np.ones(n, dtype=np.int8)
    mags = _kernels.run_chain(
        spins,
        rule.radius,
        rule.table,
        rule.lambda_max,
        float(sample_times[-1]),
        sample_times.astype(float),
        stream_seed(seed, 2),
    )
    return mags


@dataclass(frozen=True)
class WitnessCurve:
    n: int
    times: np.ndarray
    witness: np.ndarray  # max over thresholds of P_start(S >= a) - pi(S >= a)
    se: np.ndarray  # two-sample binomial error at the maximizing threshold
    replicas: int
    stationary_samples: int


def lower_witness(
    rule: LocalRule,
    n: int,
    times,
    replicas: int,
    seed: int,
    stationary: Optional[np.ndarray] = None,
    stationary_count: int = 2000,
) -> WitnessCurve:
    """TV lower bound at each time from the magnetization tail witness.

    Starts at all-plus; the threshold ranges over every achievable
    magnetization level and the maximal gap is reported.
    """
    times = np.asarray(times, dtype=float)
    if stationary is None:
        stationary = stationary_magnetization_samples(
            rule, n, stationary_count, stream_seed(seed, 1)
        )
    stationary = np.asarray(stationary, dtype=float)
    M = stationary.size
    if M < MIN_STATIONARY_SAMPLES:
        raise ValueError(f"need at least {MIN_STATIONARY_SAMPLES} stationary samples")
    start = SpinConfig.all_plus(n)
    mags = np.empty((replicas, times.size))
    for r in range(replicas):
        mags[r] = simulate(rule, start, float(times[-1]), stream_seed(seed, 2, r), times).magnetization
    levels = -1.0 + 2.0 * np.arange(n + 1) / n
    pi_tail = np.array([(stationary >= a - 1e-12).mean() for a in levels])
    witness = np.empty(times.size)
    se = np.empty(times.size)
    for i in range(times.size):
        p_tail = np.array([(mags[:, i] >= a - 1e-12).mean() for a in levels])
        gaps = p_tail - pi_tail
        j = int(np.argmax(gaps))
        witness[i] = gaps[j]
        se[i] = math.sqrt(
            p_tail[j] * (1 - p_tail[j]) / replicas + pi_tail[j] * (1 - pi_tail[j]) / M
        )
    return WitnessCurve(
        n=n, times=times, witness=witness, se=se, replicas=replicas, stationary_samples=M
    )


def _crossing(times, values, level):
    """First time a decreasing-ish curve falls to level, by linear interpolation."""
    below = np.nonzero(values <= level)[0]
    if below.size == 0:
        return float(times[-1])
    i = below[0]
    if i == 0:
        return float(times[0])
    t0, t1 = times[i - 1], times[i]
    v0, v1 = values[i - 1], values[i]
    if v0 == v1:
        return float(t1)
    return float(t0 + (t1 - t0) * (v0 - level) / (v0 - v1))


@dataclass(frozen=True)
class DropTime:
    n: int
    t_star: float
    t_lo: float
    t_hi: float

    @property
    def se(self) -> float:
        return max((self.t_hi - self.t_lo) / (2 * 1.96), 1e-9)


def witness_drop_time(curve: WitnessCurve, level: float = 0.25) -> DropTime:
    """Smallest time the witness falls to the level, with a 95% bracket."""
    t_star = _crossing(curve.times, curve.witness, level)
    t_lo = _crossing(curve.times, curve.witness - 1.96 * curve.se, level)
    t_hi = _crossing(curve.times, curve.witness + 1.96 * curve.se, level)
    return DropTime(n=curve.n, t_star=t_star, t_lo=min(t_lo, t_hi), t_hi=max(t_lo, t_hi))


@dataclass(frozen=True)
class WitnessScaling:
    drops: list
    slope: float
    intercept: float
    slope_se: float

    @property
    def increasing(self) -> bool:
        ts = [d.t_star for d in self.drops]
        return all(b > a for a, b in zip(ts, ts[1:]))

    @property
    def slope_positive_95(self) -> bool:
        return self.slope - 1.96 * self.slope_se > 0


def witness_scaling(curves, level: float = 0.25) -> WitnessScaling:
    """Affine fit of the witness drop time against log n across sizes."""
    curves = sorted(curves, key=lambda c: c.n)
    if len(curves) < 3:
        raise ValueError("need at least 3 sizes for the scaling fit")
    drops = [witness_drop_time(c, level) for c in curves]
    slope, intercept, slope_se = _wls_fit(
        np.log([d.n for d in drops]),
        [d.t_star for d in drops],
        [d.se for d in drops],
    )
    return WitnessScaling(drops=drops, slope=slope, intercept=intercept, slope_se=slope_se)


@dataclass(frozen=True)
class VarianceRow:
    n: int
    t_star: float
    variance: float
    se: float


@dataclass(frozen=True)
class VarianceProbeResult:
    rows: list
    epsilon: float
    exponent: Optional[float]
    exponent_se: Optional[float]


def variance_probe(rule: LocalRule, n_values, epsilon: float, replicas: int, seed: int) -> VarianceProbeResult:
    """Variance of the magnetization at t = epsilon*log n from all-plus, per n.

    Reports the fitted power-law exponent of variance against n when at
    least 3 sizes are given.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if replicas < 1000:
        raise ValueError("need at least 1000 replicas")
    n_values = sorted(set(int(v) for v in np.atleast_1d(n_values)))
    rows = []
    for i, n in enumerate(n_values):
        t_star = epsilon * math.log(n)
        start = SpinConfig.all_plus(n)
        s = np.array([
            simulate(rule, start, t_star, stream_seed(seed, i, r)).final.spins.mean()
            for r in range(replicas)
        ])
        var = float(s.var(ddof=1))
        centered = (s - s.mean()) ** 2
        se = float(centered.std(ddof=1) / math.sqrt(replicas))
        rows.append(VarianceRow(n=n, t_star=t_star, variance=var, se=se))
    if len(rows) < 3:
        return VarianceProbeResult(rows, epsilon, None, None)
    log_v = np.log([max(r.variance, 1e-300) for r in rows])
    rel_se = [r.se / max(r.variance, 1e-300) for r in rows]
    slope, _, slope_se = _wls_fit(np.log([r.n for r in rows]), log_v, rel_se)
    return VarianceProbeResult(rows=rows, epsilon=epsilon, exponent=slope, exponent_se=slope_se)


@dataclass(frozen=True)
class TvBracket:
    n: int
    times: np.ndarray
    lower: np.ndarray  # witness TV lower bound
    oracle: np.ndarray  # exact worst-case TV
    upper: np.ndarray  # coupling tail P(tau > t)


def tv_bracket(
    rule: LocalRule,
    n: int,
    times,
    replicas: int,
    seed: int,
    exact_lower: bool = False,
) -> TvBracket:
    """Witness lower bound, exact TV, and coupling upper bound on one grid.

    Small n only: the exact curve and the stationary magnetization law both
    come from the full generator.  With exact_lower the witness tail
    probabilities come from the transition distribution instead of Monte
    Carlo, so the bracket holds deterministically.
    """
    times = np.asarray(times, dtype=float)
    gen = build_generator(rule, n)
    exact = tv_curve(gen, times)

    # exact stationary tail of S, used in place of sampled stationary draws
    weights = np.array([bin(s).count("1") for s in range(gen.dim)])
    s_levels = (2 * weights - n) / n
    start = SpinConfig.all_plus(n)
    levels = -1.0 + 2.0 * np.arange(n + 1) / n
    pi_tail = np.array([gen.pi[s_levels >= a - 1e-12].sum() for a in levels])
    lower = np.empty(times.size)
    if exact_lower:
        from glauberlab.oracle import config_to_index, distribution_at

        start_idx = config_to_index(start)
        for i, t in enumerate(times):
            dist = distribution_at(gen, start_idx, float(t))
            p_tail = np.array([dist[s_levels >= a - 1e-12].sum() for a in levels])
            lower[i] = max(0.0, float(np.max(p_tail - pi_tail)))
    else:
        mags = np.empty((replicas, times.size))
        for r in range(replicas):
            mags[r] = simulate(
                rule, start, float(times[-1]), stream_seed(seed, 1, r), times
            ).magnetization
        for i in range(times.size):
            p_tail = np.array([(mags[:, i] >= a - 1e-12).mean() for a in levels])
            lower[i] = max(0.0, float(np.max(p_tail - pi_tail)))

    taus = np.empty(replicas)
    for r in range(replicas):
        res = couple(
            rule,
            SpinConfig.all_plus(n),
            SpinConfig.all_minus(n),
            float(times[-1]) + 1.0,
            stream_seed(seed, 2, r),
        )
        taus[r] = np.inf if res.tau is None else res.tau
    upper = np.array([(taus > t).mean() for t in times])
    return TvBracket(n=n, times=times, lower=lower, oracle=exact, upper=upper)


def load_rule(spec: str) -> LocalRule:
    return parse_rule_spec(spec)
