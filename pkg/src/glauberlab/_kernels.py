"""Compiled event loops for the simulator and the random-walk samplers.

All kernels seed numba's per-thread RNG explicitly, so identical (arguments,
seed) reproduce identical trajectories.  Spin-flip candidates are generated
at the per-site ceiling rate and accepted by uniform thinning; bond exchanges
between consecutive candidates are applied as a Poisson-sized batch of
uniformly chosen bonds, which has the exact law of the superposed clocks.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _window_code(spins, x, K, n):
    code = 0
    for j in range(2 * K + 1):
        idx = x - K + j
        if idx < 0:
            idx += n
        elif idx >= n:
            idx -= n
        if spins[idx] > 0:
            code |= 1 << j
    return code


@njit(cache=True)
def run_chain(spins, K, table, lam_max, t_end, sample_times, seed):
    """Evolve one chain in place to time t_end; return S at sample_times.

    Sample times past t_end receive the final magnetization.
    """
    np.random.seed(seed)
    n = spins.shape[0]
    g_rate = n * lam_max
    ex_rate = 0.5 * n * n * n
    ns = sample_times.shape[0]
    out = np.empty(ns)
    si = 0
    mag = 0
    for i in range(n):
        mag += spins[i]
    t = 0.0
    while True:
        t_next = t + np.random.exponential(1.0 / g_rate)
        t_stop = t_next if t_next < t_end else t_end
        while si < ns and sample_times[si] <= t_stop:
            out[si] = mag / n
            si += 1
        if t_stop > t:
            m = np.random.poisson(ex_rate * (t_stop - t))
            for _ in range(m):
                b = np.random.randint(0, n)
                b2 = b + 1
                if b2 == n:
                    b2 = 0
                s1 = spins[b]
                s2 = spins[b2]
                if s1 != s2:
                    spins[b] = s2
                    spins[b2] = s1
        if t_next >= t_end:
            break
        t = t_next
        x = np.random.randint(0, n)
        if table[_window_code(spins, x, K, n)] >= lam_max * np.random.random():
            spins[x] = -spins[x]
            mag += 2 * spins[x]
    while si < ns:
        out[si] = mag / n
        si += 1
    return out


@njit(cache=True)
def run_couple(upper, lower, K, table, lam_max, t_max, sample_times, seed, run_to_end):
    """Monotone two-chain coupling; shared exchange clocks, paired flips.

    Returns (tau, xi_samples, violations): tau is the coalescence time, or -1.0
    on timeout.  xi at sample times past coalescence is 0.  The ordering
    invariant is checked after every applied flip; violations counts failures
    (always 0 for an attractive rule).
    """
    np.random.seed(seed)
    n = upper.shape[0]
    g_rate = n * 2.0 * lam_max
    ex_rate = 0.5 * n * n * n
    ns = sample_times.shape[0]
    xi_out = np.empty(ns)
    si = 0
    disc = 0
    for i in range(n):
        if upper[i] > lower[i]:
            disc += 1
    tau = 0.0 if disc == 0 else -1.0
    violations = 0
    t = 0.0
    while True:
        t_next = t + np.random.exponential(1.0 / g_rate)
        t_stop = t_next if t_next < t_max else t_max
        while si < ns and sample_times[si] <= t_stop:
            xi_out[si] = 2.0 * disc / n
            si += 1
        if t_stop > t:
            m = np.random.poisson(ex_rate * (t_stop - t))
            for _ in range(m):
                b = np.random.randint(0, n)
                b2 = b + 1
                if b2 == n:
                    b2 = 0
                s1 = upper[b]
                s2 = upper[b2]
                if s1 != s2:
                    upper[b] = s2
                    upper[b2] = s1
                s1 = lower[b]
                s2 = lower[b2]
                if s1 != s2:
                    lower[b] = s2
                    lower[b2] = s1
        if t_next >= t_max:
            break
        t = t_next
        x = np.random.randint(0, n)
        cu = table[_window_code(upper, x, K, n)]
        cl = table[_window_code(lower, x, K, n)]
        u = 2.0 * lam_max * np.random.random()
        su = upper[x]
        sl = lower[x]
        if su == 1 and sl == 1:
            if u < cu:
                upper[x] = -1
                lower[x] = -1
            elif u < cl:
                lower[x] = -1
                disc += 1
        elif su == 1 and sl == -1:
            if u < cu:
                upper[x] = -1
                disc -= 1
            elif u < cu + cl:
                lower[x] = 1
                disc -= 1
        else:
            if u < cl:
                upper[x] = 1
                lower[x] = 1
            elif u < cu:
                upper[x] = 1
                disc += 1
        if upper[x] < lower[x]:
            violations += 1
        if disc == 0 and tau < 0.0:
            tau = t
            if not run_to_end:
                break
    while si < ns:
        xi_out[si] = 2.0 * disc / n
        si += 1
    return tau, xi_out, violations


@njit(cache=True)
def run_ssep_coupling(n, starts, t_total, sample_times, seed):
    """Marked exclusion walkers coupled to independent shadow walks.

    Bond clocks carry fair-coin marks; mark-1 arrows exchange the exclusion
    particles.  The lowest-indexed particle on an occupied bond drives its
    shadow on mark 1; on mark 0 the other shadow takes the move the exchange
    would have given it.  Only bonds adjacent to a particle are sampled
    (candidate rate 2k with double proposals on doubly occupied bonds thinned
    by 1/2), which is exact because arrows elsewhere act as the identity.

    Returns (max_disp, z_traj, z0_traj, z, z0); distances are shortest-arc.
    """
    np.random.seed(seed)
    k = starts.shape[0]
    z = starts.copy()
    z0 = starts.copy()
    occ = np.full(n, -1, np.int64)
    for i in range(k):
        occ[z[i]] = i
    rate = 2.0 * k
    ns = sample_times.shape[0]
    z_traj = np.empty((ns, k), np.int64)
    z0_traj = np.empty((ns, k), np.int64)
    si = 0
    t = 0.0
    max_disp = 0
    while True:
        t_next = t + np.random.exponential(1.0 / rate)
        t_stop = t_next if t_next < t_total else t_total
        while si < ns and sample_times[si] <= t_stop:
            for i in range(k):
                z_traj[si, i] = z[i]
                z0_traj[si, i] = z0[i]
            si += 1
        if t_next >= t_total:
            break
        t = t_next
        r = np.random.randint(0, 2 * k)
        i = r >> 1
        # side 0: bond (z_i - 1, z_i); side 1: bond (z_i, z_i + 1)
        x = z[i] - 1 + (r & 1)
        if x < 0:
            x += n
        x2 = x + 1
        if x2 == n:
            x2 = 0
        a = occ[x]
        b = occ[x2]
        if a >= 0 and b >= 0:
            if np.random.random() < 0.5:
                continue
        mark = np.random.random() < 0.5
        if a >= 0 and b >= 0:
            lo = a if a < b else b
            hi = a + b - lo
            if mark:
                z[a] = x2
                z[b] = x
                occ[x] = b
                occ[x2] = a
                d = 1 if lo == a else -1
                z0[lo] = (z0[lo] + d) % n
            else:
                d = 1 if hi == a else -1
                z0[hi] = (z0[hi] + d) % n
        elif a >= 0:
            if mark:
                z[a] = x2
                occ[x] = -1
                occ[x2] = a
                z0[a] = (z0[a] + 1) % n
        elif b >= 0:
            if mark:
                z[b] = x
                occ[x2] = -1
                occ[x] = b
                z0[b] = (z0[b] - 1) % n
        for j in range(k):
            d = z[j] - z0[j]
            if d < 0:
                d = -d
            if n - d < d:
                d = n - d
            if d > max_disp:
                max_disp = d
    while si < ns:
        for i in range(k):
            z_traj[si, i] = z[i]
            z0_traj[si, i] = z0[i]
        si += 1
    return max_disp, z_traj, z0_traj, z, z0


@njit(cache=True)
def occupation_time(n, t_total, seed):
    """Holding time at the origin for the rate-2 walk started there."""
    np.random.seed(seed)
    pos = 0
    t = 0.0
    theta = 0.0
    while True:
        wait = np.random.exponential(0.5)
        if t + wait >= t_total:
            if pos == 0:
                theta += t_total - t
            return theta
        if pos == 0:
            theta += wait
        t += wait
        if np.random.random() < 0.5:
            pos += 1
            if pos == n:
                pos = 0
        else:
            pos -= 1
            if pos < 0:
                pos += n
    return theta


@njit(cache=True)
def walk_max_abs(n, lam, t_total, seed):
    """Running maximum of the shortest-arc distance from the start, rate lam."""
    np.random.seed(seed)
    pos = 0
    t = 0.0
    mx = 0
    while True:
        t += np.random.exponential(1.0 / lam)
        if t >= t_total:
            return mx
        if np.random.random() < 0.5:
            pos += 1
            if pos == n:
                pos = 0
        else:
            pos -= 1
            if pos < 0:
                pos += n
        d = pos if pos <= n - pos else n - pos
        if d > mx:
            mx = d
    return mx


@njit(cache=True)
def walk_position(n, lam, t, seed):
    """Position at time t of the rate-lam walk started at 0."""
    np.random.seed(seed)
    steps = np.random.poisson(lam * t)
    pos = 0
    for _ in range(steps):
        if np.random.random() < 0.5:
            pos += 1
        else:
            pos -= 1
    return pos % n
