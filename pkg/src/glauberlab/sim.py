"""Event-driven simulation of the chain and of the monotone two-chain coupling."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from glauberlab import _kernels
from glauberlab.core import SpinConfig, dominates
from glauberlab.rates import LocalRule, check_attractive, reaction_profile


def stream_seed(seed: int, *stream) -> int:
    """Derive an independent 32-bit kernel seed from (seed, stream ids)."""
    ss = np.random.SeedSequence([int(seed)] + [int(s) for s in stream])
    return int(ss.generate_state(1)[0])


def _check_rule_fits(rule: LocalRule, n: int) -> None:
    if rule.width > n:
        raise ValueError(f"rule window {rule.width} wider than lattice {n}")


def default_t_max(rule: LocalRule, n: int) -> float:
    """Coupling timeout: (8/kappa)*log n when the potential is strictly convex."""
    kappa = reaction_profile(rule).kappa
    if kappa is not None:
        return 8.0 / kappa * math.log(n)
    return 50.0 * math.log(n)


def geometric_times(t_max: float, points: int = 64, t_min_frac: float = 1e-3):
    """Geometrically spaced sampling grid on (0, t_max], densest near t_max's tail."""
    return np.geomspace(t_max * t_min_frac, t_max, points)


@dataclass(frozen=True)
class SimulateResult:
    final: SpinConfig
    times: np.ndarray
    magnetization: np.ndarray


def simulate(
    rule: LocalRule,
    initial: SpinConfig,
    t_end: float,
    seed: int,
    sample_times=None,
) -> SimulateResult:
    """Sample the chain at time t_end, exactly in law.

    Glauber candidates fire at per-site rate lambda_max and are accepted by
    uniform thinning; exchanges run at rate n^2/2 per bond with N = n.
    Optionally records the magnetization on a sampling grid.
    """
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    _check_rule_fits(rule, initial.n)
    times = np.asarray([] if sample_times is None else sample_times, dtype=float)
    spins = initial.spins.copy()
    mags = _kernels.run_chain(
        spins, rule.radius, rule.table, rule.lambda_max, float(t_end), times, stream_seed(seed)
    )
    return SimulateResult(final=SpinConfig(spins), times=times, magnetization=mags)


@dataclass(frozen=True)
class CoupleResult:
    tau: Optional[float]  # None on timeout
    timed_out: bool
    times: np.ndarray
    xi: np.ndarray
    upper_final: SpinConfig
    lower_final: SpinConfig
    violations: int

    @property
    def coalesced(self) -> bool:
        return self.tau is not None


def couple(
    rule: LocalRule,
    upper0: SpinConfig,
    lower0: SpinConfig,
    t_max: float,
    seed: int,
    sample_times=None,
    run_to_end: bool = False,
) -> CoupleResult:
    """Run the monotone coupling until coalescence or t_max.

    Exchange events hit both chains at once; flips are paired so the order
    upper >= lower is preserved, which requires an attractive rule.
    """
    if not check_attractive(rule):
        raise ValueError("coupling requires an attractive rule")
    if not dominates(upper0, lower0):
        raise ValueError("initial pair must satisfy upper >= lower")
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    _check_rule_fits(rule, upper0.n)
    times = np.asarray([] if sample_times is None else sample_times, dtype=float)
    upper = upper0.spins.copy()
    lower = lower0.spins.copy()
    tau, xi, violations = _kernels.run_couple(
        upper,
        lower,
        rule.radius,
        rule.table,
        rule.lambda_max,
        float(t_max),
        times,
        stream_seed(seed),
        run_to_end,
    )
    return CoupleResult(
        tau=None if tau < 0 else float(tau),
        timed_out=tau < 0,
        times=times,
        xi=xi,
        upper_final=SpinConfig(upper),
        lower_final=SpinConfig(lower),
        violations=int(violations),
    )


def _couple_tau_batch(args):
    rule_radius, table, lam_max, n, t_max, seeds = args
    taus = np.empty(len(seeds))
    violations = 0
    upper0 = np.ones(n, dtype=np.int8)
    lower0 = -np.ones(n, dtype=np.int8)
    empty = np.empty(0)
    for i, s in enumerate(seeds):
        upper = upper0.copy()
        lower = lower0.copy()
        tau, _, v = _kernels.run_couple(
            upper, lower, rule_radius, table, lam_max, t_max, empty, s, False
        )
        taus[i] = np.inf if tau < 0 else tau
        violations += v
    return taus, violations


@dataclass(frozen=True)
class QuantileResult:
    quantile: float
    rank: int
    delta: float
    replicas: int
    taus: np.ndarray  # np.inf marks a timeout
    timeouts: int
    exceed_ci: tuple  # 95% Wilson interval for P(tau > quantile)
    quantile_ci: tuple  # 95% order-statistic interval in time units
    violations: int


def _wilson(successes: int, total: int, z: float = 1.959963984540054) -> tuple:
    if total == 0:
        return (0.0, 1.0)
    p = successes / total
    denom = 1 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def coalescence_quantile(
    rule: LocalRule,
    n: int,
    delta: float,
    replicas: int,
    seed: int,
    t_max: Optional[float] = None,
    workers: int = 1,
) -> QuantileResult:
    """Empirical (1-delta)-quantile of the coalescence time from the extreme pair.

    Runs independent couplings from (all-plus, all-minus); timeouts enter the
    order statistics as +inf and are reported, never dropped.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if replicas < 20:
        raise ValueError("need at least 20 replicas")
    if reaction_profile(rule).kappa is None:
        warnings.warn("rule has no strictly convex potential; quantile may be unstable")
    if t_max is None:
        t_max = default_t_max(rule, n)
    seeds = [stream_seed(seed, r) for r in range(replicas)]
    if workers > 1:
        chunks = np.array_split(np.asarray(seeds), workers)
        jobs = [(rule.radius, rule.table, rule.lambda_max, n, float(t_max), list(c)) for c in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_couple_tau_batch, jobs))
        taus = np.concatenate([p[0] for p in parts])
        violations = sum(p[1] for p in parts)
    else:
        taus, violations = _couple_tau_batch(
            (rule.radius, rule.table, rule.lambda_max, n, float(t_max), seeds)
        )
    order = np.sort(taus)
    rank = math.ceil((1 - delta) * replicas)
    quantile = float(order[rank - 1])
    exceed = int(np.sum(taus > quantile))
    # order-statistic CI for the (1-delta)-quantile via the binomial normal range
    spread = 1.959963984540054 * math.sqrt(replicas * delta * (1 - delta))
    lo_idx = max(0, rank - 1 - int(math.ceil(spread)))
    hi_idx = min(replicas - 1, rank - 1 + int(math.ceil(spread)))
    return QuantileResult(
        quantile=quantile,
        rank=rank,
        delta=delta,
        replicas=replicas,
        taus=taus,
        timeouts=int(np.sum(np.isinf(taus))),
        exceed_ci=_wilson(exceed, replicas),
        quantile_ci=(float(order[lo_idx]), float(order[hi_idx])),
        violations=int(violations),
    )
