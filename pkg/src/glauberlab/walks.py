"""Random-walk kernels, marked-exclusion couplings, and chaos diagnostics.

Everything here runs on its own microscopic clock (per-bond and per-particle
rates as stated for each estimate); callers relate it to the simulator's
macroscopic time through T = n^2 t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from glauberlab import _kernels
from glauberlab.core import SpinConfig
from glauberlab.sim import stream_seed


def torus_distance(x: int, y: int, n: int) -> int:
    """Shortest-arc distance on Z_n."""
    d = abs((x - y) % n)
    return min(d, n - d)


def srw_heat_kernel(n: int, lam: float, t: float, x: int = 0, y: int = 0) -> float:
    """Transition probability p_t(x, y) of the rate-lam walk, via the circulant spectrum."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if lam <= 0:
        raise ValueError("lam must be positive")
    k = np.arange(n)
    eig = np.exp(-lam * t * (1.0 - np.cos(2 * np.pi * k / n)))
    return float(np.mean(eig * np.cos(2 * np.pi * k * ((x - y) % n) / n)))


def heat_kernel_row(n: int, lam: float, t: float) -> np.ndarray:
    """p_t(0, y) for all y, as one circulant row."""
    k = np.arange(n)
    eig = np.exp(-lam * t * (1.0 - np.cos(2 * np.pi * k / n)))
    disp = np.arange(n)
    return np.cos(2 * np.pi * np.outer(disp, k) / n) @ eig / n


def local_average(cfg: SpinConfig, x: int, t: float) -> float:
    """Heat-kernel smoothing of the configuration around x at rate 1."""
    row = heat_kernel_row(cfg.n, 1.0, t)
    disp = (np.arange(cfg.n) - x) % cfg.n
    return float(row[disp] @ cfg.spins)


def occupation_time_sample(n: int, t_total: float, seed: int) -> float:
    """One sample of the origin occupation time of the rate-2 walk started at 0."""
    if t_total < 0:
        raise ValueError("t_total must be nonnegative")
    return float(_kernels.occupation_time(n, float(t_total), stream_seed(seed)))


def max_displacement_sample(n: int, lam: float, t_total: float, seed: int) -> int:
    """One sample of max_{t <= T} shortest-arc distance from the start, rate lam."""
    return int(_kernels.walk_max_abs(n, float(lam), float(t_total), stream_seed(seed)))


def walk_position_sample(n: int, lam: float, t: float, seed: int) -> int:
    return int(_kernels.walk_position(n, float(lam), float(t), stream_seed(seed)))


@dataclass(frozen=True)
class SsepCouplingResult:
    max_displacement: int
    times: np.ndarray
    z: np.ndarray  # shape (len(times), k): marked exclusion positions
    z_shadow: np.ndarray  # independent-walk partners
    z_final: np.ndarray
    z_shadow_final: np.ndarray


def ssep_vs_independent(
    n: int,
    starts,
    t_total: float,
    seed: int,
    sample_times=None,
) -> SsepCouplingResult:
    """Couple marked exclusion walkers with independent rate-1 walks.

    Bond arrows carry fair-coin marks; particle 1's two positions agree for
    all time by construction.  Displacements are shortest-arc.
    """
    starts = np.asarray(starts, dtype=np.int64) % n
    if len(set(starts.tolist())) != starts.size:
        raise ValueError("start sites must be distinct")
    if starts.size > n:
        raise ValueError("more particles than sites")
    times = np.asarray([] if sample_times is None else sample_times, dtype=float)
    D, z_traj, z0_traj, z, z0 = _kernels.run_ssep_coupling(
        n, starts, float(t_total), times, stream_seed(seed)
    )
    return SsepCouplingResult(
        max_displacement=int(D),
        times=times,
        z=z_traj,
        z_shadow=z0_traj,
        z_final=z,
        z_shadow_final=z0,
    )


@dataclass(frozen=True)
class DefectEstimate:
    value: float
    se: float
    replicas: int


def replacement_defect(
    cfg: SpinConfig,
    sites,
    t_total: float,
    replicas: int,
    seed: int,
) -> DefectEstimate:
    """Monte Carlo gap between the stirred product and the product of stirred means.

    Both terms are estimated from the same marked-exclusion runs; the standard
    error uses the influence function of the plug-in product, which accounts
    for the covariance between the two terms.
    """
    sites = np.asarray(sites, dtype=np.int64) % cfg.n
    if len(set(sites.tolist())) != sites.size:
        raise ValueError("sites must be distinct")
    k = sites.size
    if k < 1:
        raise ValueError("need at least one site")
    spins = cfg.spins
    prods = np.empty(replicas)
    singles = np.empty((replicas, k))
    for r in range(replicas):
        res = ssep_vs_independent(cfg.n, sites, t_total, stream_seed(seed, r))
        vals = spins[res.z_final]
        singles[r] = vals
        prods[r] = np.prod(vals)
    mean_singles = singles.mean(axis=0)
    delta = float(prods.mean() - np.prod(mean_singles))
    if replicas > 1:
        leave_one = np.array([np.prod(np.delete(mean_singles, i)) for i in range(k)])
        psi = prods - singles @ leave_one
        se = float(psi.std(ddof=1) / np.sqrt(replicas))
    else:
        se = float("inf")
    return DefectEstimate(value=delta, se=se, replicas=replicas)


def two_particle_defect_exact(cfg: SpinConfig, sites, t_total: float) -> float:
    """Exact two-particle reference via the matrix exponential of the pair generator.

    The labeled pair (z1, z2) lives on ordered distinct site pairs; each
    particle crosses an adjacent bond at rate 1/2, and a shared bond swaps
    the labels at rate 1/2.
    """
    n = cfg.n
    x1, x2 = (int(sites[0]) % n, int(sites[1]) % n)
    if x1 == x2:
        raise ValueError("sites must be distinct")
    states = [(a, b) for a in range(n) for b in range(n) if a != b]
    index = {s: i for i, s in enumerate(states)}
    dim = len(states)
    Q = np.zeros((dim, dim))
    for (a, b), i in index.items():
        for da in (-1, 1):
            na = (a + da) % n
            j = index[(b, a)] if na == b else index[(na, b)]
            Q[i, j] += 0.5
        for db in (-1, 1):
            nb = (b + db) % n
            if nb != a:  # the shared bond was already counted once
                Q[i, index[(a, nb)]] += 0.5
        Q[i, i] -= Q[i].sum()
    dist = scipy.linalg.expm(Q.T * t_total) @ np.eye(dim)[:, index[(x1, x2)]]
    spins = cfg.spins.astype(float)
    e_prod = sum(p * spins[a] * spins[b] for (a, b), p in zip(states, dist[[index[s] for s in states]]))
    e1 = sum(p * spins[a] for (a, b), p in zip(states, dist[[index[s] for s in states]]))
    e2 = sum(p * spins[b] for (a, b), p in zip(states, dist[[index[s] for s in states]]))
    return float(e_prod - e1 * e2)


@dataclass(frozen=True)
class TailCheck:
    name: str
    threshold: float
    empirical: float
    bound: float
    replicas: int

    @property
    def slack(self) -> float:
        """Binomial 3-sigma allowance added to the bound in conformance tests."""
        p = min(max(self.bound, 1.0 / self.replicas), 1.0)
        return 3.0 * float(np.sqrt(p * (1 - p) / self.replicas))

    @property
    def conforms(self) -> bool:
        return self.empirical <= self.bound + self.slack


def maximal_inequality_tail(n: int, lam: float, T: float, eps: float, replicas: int, seed: int) -> TailCheck:
    """One-sided check of P(max |w| >= T^(1/2+eps)) <= 3 exp(-(lam/6) T^(2 eps))."""
    threshold = T ** (0.5 + eps)
    hits = sum(
        max_displacement_sample(n, lam, T, stream_seed(seed, r)) >= threshold
        for r in range(replicas)
    )
    return TailCheck(
        name="maximal-inequality",
        threshold=threshold,
        empirical=hits / replicas,
        bound=min(1.0, 3.0 * float(np.exp(-(lam / 6.0) * T ** (2 * eps)))),
        replicas=replicas,
    )


def occupation_time_tail(n: int, T: float, eps: float, replicas: int, seed: int) -> TailCheck:
    """One-sided check of P(theta(T) >= 2 T^(1/2+2 eps)) <= exp(-T^(eps/4))."""
    threshold = 2.0 * T ** (0.5 + 2 * eps)
    hits = sum(
        occupation_time_sample(n, T, stream_seed(seed, r)) >= threshold for r in range(replicas)
    )
    return TailCheck(
        name="occupation-time",
        threshold=threshold,
        empirical=hits / replicas,
        bound=min(1.0, float(np.exp(-(T ** (eps / 4.0))))),
        replicas=replicas,
    )


def displacement_tail(n: int, k: int, T: float, eps: float, replicas: int, seed: int) -> TailCheck:
    """One-sided check of P(D >= k T^(1/4+3 eps)) <= 4 k^2 exp(-T^(eps/4))."""
    rng = np.random.default_rng(stream_seed(seed, 12345))
    threshold = k * T ** (0.25 + 3 * eps)
    hits = 0
    for r in range(replicas):
        starts = rng.choice(n, size=k, replace=False)
        res = ssep_vs_independent(n, starts, T, stream_seed(seed, r))
        if res.max_displacement >= threshold:
            hits += 1
    return TailCheck(
        name="coupling-displacement",
        threshold=threshold,
        empirical=hits / replicas,
        bound=min(1.0, 4.0 * k * k * float(np.exp(-(T ** (eps / 4.0))))),
        replicas=replicas,
    )


def smoothing_constant(n_values, t_values, pairs_per_case: int, seed: int) -> float:
    """Fitted C in |Phi_x - Phi_y| <= C |x-y| / sqrt(t) over a random grid."""
    rng = np.random.default_rng(stream_seed(seed, 999))
    c_max = 0.0
    for n in n_values:
        for t in t_values:
            row = heat_kernel_row(n, 1.0, t)
            for _ in range(pairs_per_case):
                spins = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
                x, y = rng.choice(n, size=2, replace=False)
                dist = torus_distance(int(x), int(y), n)
                phi_x = float(row[(np.arange(n) - x) % n] @ spins)
                phi_y = float(row[(np.arange(n) - y) % n] @ spins)
                c_max = max(c_max, abs(phi_x - phi_y) * np.sqrt(t) / dist)
    return c_max


def avoidance_tail(n: int, T: float, eps: float, replicas: int, seed: int, targets=None) -> float:
    """Fitted C in P(|w(s_T) - y| <= T^(1/2-2 eps)) <= C / T^(eps/2), max over targets."""
    s_T = T - T ** (0.5 + 3 * eps)
    radius = T ** (0.5 - 2 * eps)
    if targets is None:
        targets = [0, n // 4, n // 2]
    positions = np.array(
        [walk_position_sample(n, 1.0, s_T, stream_seed(seed, r)) for r in range(replicas)]
    )
    worst = 0.0
    for y in targets:
        d = np.abs((positions - y) % n)
        d = np.minimum(d, n - d)
        freq = float(np.mean(d <= radius))
        worst = max(worst, freq)
    return worst * T ** (eps / 2.0)
