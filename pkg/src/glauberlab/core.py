"""Spin configurations on the discrete torus Z_n and elementary updates."""

from __future__ import annotations

import numpy as np

MIN_SIZE = 3  # on a 2-site torus the two bonds coincide, doubling the exchange rate


class SpinConfig:
    """A {-1,+1}-valued configuration on the torus Z_n.

    Immutable after construction; index arithmetic is modulo n.
    """

    __slots__ = ("n", "spins")

    def __init__(self, spins):
        arr = np.asarray(spins, dtype=np.int8).copy()
        if arr.ndim != 1:
            raise ValueError("spins must be one-dimensional")
        if arr.size < MIN_SIZE:
            raise ValueError(f"lattice size must be at least {MIN_SIZE}, got {arr.size}")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("every spin must be -1 or +1")
        arr.flags.writeable = False
        object.__setattr__(self, "n", int(arr.size))
        object.__setattr__(self, "spins", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SpinConfig is immutable")

    @classmethod
    def all_plus(cls, n: int) -> "SpinConfig":
        return cls(np.ones(n, dtype=np.int8))

    @classmethod
    def all_minus(cls, n: int) -> "SpinConfig":
        return cls(-np.ones(n, dtype=np.int8))

    @classmethod
    def from_string(cls, s: str) -> "SpinConfig":
        """Parse a '+'/'-' string, one character per site."""
        bad = set(s) - {"+", "-"}
        if bad:
            raise ValueError(f"configuration string may contain only '+'/'-', got {sorted(bad)}")
        return cls(np.array([1 if ch == "+" else -1 for ch in s], dtype=np.int8))

    def to_string(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.spins)

    @classmethod
    def random(cls, n: int, p_plus, rng) -> "SpinConfig":
        """Independent spins with site-dependent P(+1); p_plus is scalar or length-n array."""
        p = np.broadcast_to(np.asarray(p_plus, dtype=float), (n,))
        spins = np.where(rng.random(n) < p, 1, -1).astype(np.int8)
        return cls(spins)

    def __getitem__(self, x: int) -> int:
        return int(self.spins[x % self.n])

    def __eq__(self, other) -> bool:
        return isinstance(other, SpinConfig) and self.n == other.n and bool(
            np.array_equal(self.spins, other.spins)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.spins.tobytes()))

    def __repr__(self) -> str:
        return f"SpinConfig({self.to_string()!r})"


def magnetization(cfg: SpinConfig) -> float:
    """Normalized magnetization (1/n) sum of spins, in [-1, 1]."""
    return float(cfg.spins.sum()) / cfg.n


def dominates(a: SpinConfig, b: SpinConfig) -> bool:
    """Coordinatewise partial order: a(x) >= b(x) for every site x."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    return bool(np.all(a.spins >= b.spins))


def apply_flip(cfg: SpinConfig, x: int) -> SpinConfig:
    """Negate the spin at site x (mod n)."""
    spins = cfg.spins.copy()
    x %= cfg.n
    spins[x] = -spins[x]
    return SpinConfig(spins)


def apply_exchange(cfg: SpinConfig, x: int) -> SpinConfig:
    """Swap the spins at the bond (x, x+1), indices mod n."""
    spins = cfg.spins.copy()
    x %= cfg.n
    y = (x + 1) % cfg.n
    spins[x], spins[y] = spins[y], spins[x]
    return SpinConfig(spins)
