"""The reaction-diffusion scaling limit on the unit circle, and block densities.

Solves d(rho)/dt = (1/2) d^2(rho)/dx^2 + R(rho) with periodic wraparound by
forward Euler / central differences, and compares the solution with
replica-averaged empirical block densities from the simulator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from glauberlab.core import SpinConfig
from glauberlab.rates import LocalRule, ReactionProfile, check_attractive, reaction_profile
from glauberlab.sim import simulate, stream_seed

VALUE_TOL = 1e-9


@dataclass(frozen=True)
class DensityField:
    """Real-valued density on the uniform m-point grid of R/Z at one time."""

    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("values must be a 1-d grid with at least 2 points")
        if vals.min() < -1 - VALUE_TOL or vals.max() > 1 + VALUE_TOL:
            raise ValueError("density values must lie in [-1, 1]")

    @property
    def m(self) -> int:
        return self.values.size

    @property
    def grid(self) -> np.ndarray:
        """Cell positions u_j = j/m on R/Z."""
        return np.arange(self.m) / self.m


def solve_rd(
    profile: ReactionProfile,
    rho0: DensityField,
    t_end: float,
    dt: Optional[float] = None,
) -> DensityField:
    """Forward-Euler / central-difference solution at time rho0.time + t_end.

    Stability for diffusivity 1/2 requires dt <= dx^2; the default takes half
    that bound and rounds so the horizon is hit exactly.
    """
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    m = rho0.m
    dx2 = 1.0 / (m * m)
    if dt is None:
        dt = 0.5 * dx2
    if dt > dx2 * (1 + 1e-12):
        raise ValueError(f"unstable step: dt={dt} exceeds dx^2={dx2}")
    rho = rho0.values.copy()
    if t_end == 0:
        return DensityField(rho, time=rho0.time)
    steps = max(1, int(np.ceil(t_end / dt)))
    dt = t_end / steps
    R = profile.R
    for _ in range(steps):
        lap = np.roll(rho, 1) + np.roll(rho, -1) - 2 * rho
        rho = rho + dt * (0.5 * lap / dx2 + R(rho))
        if rho.min() < -1 - VALUE_TOL or rho.max() > 1 + VALUE_TOL:
            raise RuntimeError("solution left the invariant region [-1, 1]")
    return DensityField(rho, time=rho0.time + t_end)


def empirical_density(cfg: SpinConfig, m: int) -> DensityField:
    """Block-averaged spin density: value j = mean spin over block j of n/m sites."""
    if m < 1 or cfg.n % m != 0:
        raise ValueError(f"m={m} must divide n={cfg.n}")
    block = cfg.n // m
    vals = cfg.spins.astype(float).reshape(m, block).mean(axis=1)
    return DensityField(vals)


@dataclass(frozen=True)
class HydroResult:
    u: np.ndarray  # block positions on R/Z
    empirical_mean: np.ndarray
    empirical_se: np.ndarray
    pde: np.ndarray
    linf_error: float
    l2_error: float
    replicas: int


def hydro_compare(
    rule: LocalRule,
    rho0: Callable[[np.ndarray], np.ndarray],
    n: int,
    m: int,
    t: float,
    replicas: int,
    seed: int,
    dt: Optional[float] = None,
) -> HydroResult:
    """Replica-averaged empirical block density at time t against the limit equation.

    Initial spins are independent with P(spin(x)=+1) = (1 + rho0(x/n))/2; the
    equation is solved from the block averages of the same profile.
    """
    if not check_attractive(rule):
        raise ValueError("hydrodynamic comparison requires an attractive rule")
    if n % m != 0:
        raise ValueError(f"m={m} must divide n={n}")
    profile = reaction_profile(rule)
    x = np.arange(n) / n
    prof = np.clip(np.asarray(rho0(x), dtype=float), -1.0, 1.0)
    p_plus = 0.5 * (1.0 + prof)

    fields = np.empty((replicas, m))
    for r in range(replicas):
        rng = np.random.default_rng(stream_seed(seed, r, 1))
        init = SpinConfig(np.where(rng.random(n) < p_plus, 1, -1).astype(np.int8))
        final = simulate(rule, init, t, stream_seed(seed, r, 2)).final
        fields[r] = empirical_density(final, m).values
    mean = fields.mean(axis=0)
    se = fields.std(axis=0, ddof=1) / np.sqrt(replicas) if replicas > 1 else np.zeros(m)

    rho0_blocks = prof.reshape(m, n // m).mean(axis=1)
    pde = solve_rd(profile, DensityField(rho0_blocks), t, dt=dt).values
    diff = mean - pde
    return HydroResult(
        u=(np.arange(m) + 0.5) / m - 0.5 / n,
        empirical_mean=mean,
        empirical_se=se,
        pde=pde,
        linf_error=float(np.abs(diff).max()),
        l2_error=float(np.sqrt(np.mean(diff**2))),
        replicas=replicas,
    )


def parse_profile_spec(spec: str, m: int) -> Callable[[np.ndarray], np.ndarray]:
    """Initial-profile specs: 'const:c', 'cos:amplitude', or 'file:path' (m reals)."""
    kind, _, rest = spec.partition(":")
    if kind == "const":
        c = float(rest)
        return lambda u: np.full_like(np.asarray(u, dtype=float), c)
    if kind == "cos":
        amp = float(rest)
        return lambda u: amp * np.cos(2 * np.pi * np.asarray(u, dtype=float))
    if kind == "file":
        vals = np.loadtxt(rest, dtype=float).ravel()
        if vals.size != m:
            raise ValueError(f"profile file holds {vals.size} values, expected {m}")
        return lambda u: vals[(np.asarray(u, dtype=float) * m).astype(int) % m]
    raise ValueError(f"unknown profile spec {spec!r}")
