"""Exact finite-state analysis at small lattice sizes.

Enumerates all 2^n configurations, builds the sparse generator, solves for
the stationary distribution, and computes transition distributions by
uniformization with a certified truncation error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.stats import poisson

from glauberlab.core import SpinConfig
from glauberlab.rates import LocalRule

DEFAULT_N_MAX = 12
UNIFORMIZATION_TOL = 1e-10
MAX_UNIFORMIZATION_TERMS = 100_000


def config_to_index(cfg: SpinConfig) -> int:
    """Bit-pack a configuration: bit x set iff spin(x) = +1."""
    idx = 0
    for x in range(cfg.n):
        if cfg.spins[x] > 0:
            idx |= 1 << x
    return idx


def index_to_config(idx: int, n: int) -> SpinConfig:
    spins = np.array([1 if idx & (1 << x) else -1 for x in range(n)], dtype=np.int8)
    return SpinConfig(spins)


@dataclass(frozen=True)
class GeneratorMatrix:
    """Exact generator on the 2^n state space with its stationary distribution."""

    n: int
    rule: LocalRule
    Q: sp.csr_matrix
    pi: np.ndarray
    uniformization_rate: float
    P: sp.csr_matrix  # uniformized kernel I + Q / rate

    @property
    def dim(self) -> int:
        return 1 << self.n


def build_generator(rule: LocalRule, n: int, n_max: int = DEFAULT_N_MAX) -> GeneratorMatrix:
    """Assemble the sparse generator and solve the stationary system exactly."""
    if not 3 <= n <= n_max:
        raise ValueError(f"n must satisfy 3 <= n <= {n_max}")
    if rule.width > n:
        raise ValueError("rule window wider than lattice")
    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    bits = [(states >> x) & 1 for x in range(n)]
    K = rule.radius

    rows, cols, vals = [], [], []
    for x in range(n):
        codes = np.zeros(dim, dtype=np.int64)
        for j in range(2 * K + 1):
            codes |= bits[(x - K + j) % n] << j
        rates = rule.table[codes]
        rows.append(states)
        cols.append(states ^ (1 << x))
        vals.append(rates)
    ex_rate = 0.5 * n * n
    for x in range(n):
        y = (x + 1) % n
        differ = bits[x] != bits[y]
        src = states[differ]
        rows.append(src)
        cols.append(src ^ ((1 << x) | (1 << y)))
        vals.append(np.full(src.size, ex_rate))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    Q = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    Q = Q - sp.diags(np.asarray(Q.sum(axis=1)).ravel())

    # stationary solve: Q^T pi = 0 with one row replaced by normalization
    A = Q.T.tolil()
    A[dim - 1, :] = 1.0
    b = np.zeros(dim)
    b[dim - 1] = 1.0
    pi = spla.spsolve(A.tocsc(), b)
    if pi.min() <= 0:
        raise RuntimeError("stationary distribution not strictly positive")
    pi /= pi.sum()

    rate = float(-Q.diagonal().min()) * 1.0001 + 1e-12
    P = (sp.eye(dim, format="csr") + Q / rate).tocsr()
    return GeneratorMatrix(n=n, rule=rule, Q=Q, pi=pi, uniformization_rate=rate, P=P)


def _poisson_weights(mu: float, tol: float = UNIFORMIZATION_TOL):
    """Poisson(mu) pmf over a window carrying all but tol of the mass."""
    if mu == 0.0:
        return 0, np.array([1.0])
    k_lo = int(poisson.ppf(tol / 4, mu))
    k_hi = int(poisson.isf(tol / 4, mu)) + 1
    if k_hi - k_lo + 1 > MAX_UNIFORMIZATION_TERMS:
        raise RuntimeError(
            f"uniformization needs {k_hi - k_lo + 1} terms, above the "
            f"{MAX_UNIFORMIZATION_TERMS} budget"
        )
    ks = np.arange(k_lo, k_hi + 1)
    w = poisson.pmf(ks, mu)
    if w.sum() < 1 - tol:
        raise RuntimeError("uniformization truncation budget exceeded")
    return k_lo, w


def distribution_at(gen: GeneratorMatrix, initial, t: float, tol: float = UNIFORMIZATION_TOL):
    """Distribution at time t from an initial state index or distribution vector."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if np.isscalar(initial):
        v = np.zeros(gen.dim)
        v[int(initial)] = 1.0
    else:
        v = np.asarray(initial, dtype=float).copy()
    k_lo, w = _poisson_weights(gen.uniformization_rate * t, tol)
    for _ in range(k_lo):
        v = v @ gen.P
    out = w[0] * v
    for wk in w[1:]:
        v = v @ gen.P
        out += wk * v
    return out / out.sum()


def transition_matrix(gen: GeneratorMatrix, t: float, tol: float = UNIFORMIZATION_TOL):
    """Dense transition matrix P(t) by uniformization."""
    k_lo, w = _poisson_weights(gen.uniformization_rate * t, tol)
    A = np.eye(gen.dim)
    for _ in range(k_lo):
        A = A @ gen.P
    out = w[0] * A
    for wk in w[1:]:
        A = A @ gen.P
        out += wk * A
    return out / out.sum(axis=1, keepdims=True)


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def tv_curve(gen: GeneratorMatrix, times) -> np.ndarray:
    """Worst-case total-variation distance to stationarity at each time."""
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and sorted")
    out = np.empty(times.size)
    for i, t in enumerate(times):
        M = transition_matrix(gen, float(t))
        out[i] = 0.5 * np.abs(M - gen.pi[None, :]).sum(axis=1).max()
    return out


def exact_tmix(gen: GeneratorMatrix, delta: float, time_tol: float = 1e-4) -> float:
    """First time the worst-case TV distance drops to delta, by bisection."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")

    def d(t):
        return float(tv_curve(gen, [t])[0])

    if d(0.0) <= delta:
        return 0.0
    hi = 1.0
    while d(hi) > delta:
        hi *= 2.0
        if hi > 1e4:
            raise RuntimeError("failed to bracket the mixing time")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    while hi - lo > time_tol:
        mid = 0.5 * (lo + hi)
        if d(mid) <= delta:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def detailed_balance_residual(gen: GeneratorMatrix) -> float:
    """Max |pi_i q_ij - pi_j q_ji| over all transitions; 0 iff reversible."""
    F = sp.diags(gen.pi) @ gen.Q
    R = F - F.T
    return float(np.abs(R.tocoo().data).max()) if R.nnz else 0.0


def empirical_distribution(indices, dim: int) -> np.ndarray:
    """Normalized histogram of sampled state indices."""
    counts = np.bincount(np.asarray(indices, dtype=np.int64), minlength=dim).astype(float)
    return counts / counts.sum()
