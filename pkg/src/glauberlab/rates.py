"""Jump-rate tables and their analysis.

A rule assigns a strictly positive flip rate to every local spin window of
half-width K around the flipping site.  From the rule we derive the product
expansion of -2*eta(0)*c(0,eta), the reaction polynomial R, the potential V,
the convexity constant kappa, attractiveness, and the reversible special form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np
from numpy.polynomial import Polynomial

REVERSIBLE_RTOL = 1e-9


def _window_code(window) -> int:
    """Bit-pack a window (tuple of +-1, leftmost = offset -K) into a table index."""
    code = 0
    for j, s in enumerate(window):
        if s > 0:
            code |= 1 << j
    return code


class LocalRule:
    """Translation-invariant finite-window jump-rate table.

    The table is indexed by the packed window code: bit j is 1 iff the spin
    at offset j-K from the flipping site is +1.  The center bit is bit K.
    """

    __slots__ = ("radius", "table", "lambda_max", "c0", "name")

    def __init__(self, radius: int, table, name: str = "custom"):
        if radius < 0:
            raise ValueError("radius must be >= 0")
        width = 2 * radius + 1
        tab = np.asarray(table, dtype=np.float64).copy()
        if tab.shape != (1 << width,):
            raise ValueError(f"table must have exactly {1 << width} entries, got {tab.shape}")
        if not np.all(tab > 0):
            raise ValueError("every window rate must be strictly positive")
        tab.flags.writeable = False
        self.radius = int(radius)
        self.table = tab
        self.lambda_max = float(tab.max())
        self.c0 = float(tab.min())
        self.name = name

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    def windows(self) -> Iterator[tuple]:
        """All windows as tuples of +-1, leftmost entry = offset -K."""
        return itertools.product((-1, 1), repeat=self.width)

    def rate(self, window) -> float:
        """Rate for a window given as a sequence of +-1 of length 2K+1."""
        if len(window) != self.width:
            raise ValueError(f"window must have length {self.width}")
        return float(self.table[_window_code(window)])

    def rate_at(self, spins: np.ndarray, x: int) -> float:
        """Rate for a flip at site x of a full configuration array."""
        n = len(spins)
        window = [spins[(x + d) % n] for d in range(-self.radius, self.radius + 1)]
        return self.rate(window)

    @classmethod
    def from_function(cls, radius: int, fn: Callable[[tuple], float], name: str = "custom") -> "LocalRule":
        """Fill the table from fn(window) over all windows."""
        width = 2 * radius + 1
        table = np.empty(1 << width)
        for window in itertools.product((-1, 1), repeat=width):
            table[_window_code(window)] = fn(window)
        return cls(radius, table, name=name)

    @classmethod
    def from_table(cls, radius: int, entries: dict, name: str = "custom") -> "LocalRule":
        """Build from a {window tuple: rate} mapping; every window must be present."""
        width = 2 * radius + 1
        table = np.full(1 << width, np.nan)
        for window, rate in entries.items():
            if len(window) != width:
                raise ValueError(f"window {window} does not have length {width}")
            table[_window_code(tuple(window))] = rate
        if np.isnan(table).any():
            missing = (1 << width) - len(entries)
            raise ValueError(f"rule table incomplete: {missing} window(s) missing")
        return cls(radius, table, name=name)

    @classmethod
    def from_file(cls, path) -> "LocalRule":
        """Read the text rule format: 'radius K' then one '+-...+ rate' line per window."""
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or not lines[0].startswith("radius"):
            raise ValueError("rule file must start with a 'radius K' line")
        radius = int(lines[0].split()[1])
        entries = {}
        for ln in lines[1:]:
            wstr, rate = ln.split()
            window = tuple(1 if ch == "+" else -1 for ch in wstr)
            entries[window] = float(rate)
        return cls.from_table(radius, entries, name=f"file:{path}")

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"radius {self.radius}\n")
            for window in self.windows():
                wstr = "".join("+" if s > 0 else "-" for s in window)
                fh.write(f"{wstr} {self.rate(window)!r}\n")

    def __repr__(self) -> str:
        return f"LocalRule(radius={self.radius}, name={self.name!r})"


def make_constant(rate: float = 1.0) -> LocalRule:
    """Radius-0 rule flipping every site at the same rate."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    return LocalRule(0, [rate, rate], name=f"const:{rate:g}")


def make_dmfl(gamma: float) -> LocalRule:
    """The quadratic nearest-neighbor rate 1 - g*w0*(wl+wr) + g^2*wl*wr."""
    if not 0 <= gamma < 1:
        raise ValueError("gamma must satisfy 0 <= gamma < 1")

    def fn(window):
        wl, w0, wr = window
        return 1.0 - gamma * w0 * (wl + wr) + gamma**2 * wl * wr

    return LocalRule.from_function(1, fn, name=f"dmfl:{gamma:g}")


def make_dmfl_field(gamma: float, mu: float) -> LocalRule:
    """DMFL rate with an external field shift -(mu/2)*w0; needs 0 <= mu < 2(1-g)^2."""
    if not 0 <= gamma < 1:
        raise ValueError("gamma must satisfy 0 <= gamma < 1")
    if not 0 <= mu < 2 * (1 - gamma) ** 2:
        raise ValueError("mu must satisfy 0 <= mu < 2*(1-gamma)^2")

    def fn(window):
        wl, w0, wr = window
        return 1.0 - gamma * w0 * (wl + wr) + gamma**2 * wl * wr - 0.5 * mu * w0

    return LocalRule.from_function(1, fn, name=f"dmfl-field:{gamma:g}:{mu:g}")


def make_chafee_infante(a0: float, a1: float, a2: float) -> LocalRule:
    """Indicator rule on neighbor agreement: a0 if wl=wr!=w0, a1 if all equal, a2 if wl!=wr."""
    if min(a0, a1, a2) <= 0:
        raise ValueError("a0, a1, a2 must all be positive")

    def fn(window):
        wl, w0, wr = window
        if wl != wr:
            return a2
        return a1 if wl == w0 else a0

    return LocalRule.from_function(1, fn, name=f"chafee-infante:{a0:g}:{a1:g}:{a2:g}")


def parse_rule_spec(spec: str) -> LocalRule:
    """Parse a rule spec string: builtin name with ':'-separated parameters, or file:path."""
    kind, _, rest = spec.partition(":")
    if kind == "dmfl":
        return make_dmfl(float(rest))
    if kind == "dmfl-field":
        g, m = rest.split(":")
        return make_dmfl_field(float(g), float(m))
    if kind == "chafee-infante":
        a0, a1, a2 = rest.split(":")
        return make_chafee_infante(float(a0), float(a1), float(a2))
    if kind == "const":
        return make_constant(float(rest) if rest else 1.0)
    if kind == "file":
        return LocalRule.from_file(rest)
    raise ValueError(f"unknown rule spec {spec!r}")


def check_attractive(rule: LocalRule) -> bool:
    """Exhaustive monotonicity check over all comparable neighbor-pattern pairs.

    For windows agreeing at the center and ordered coordinatewise off-center,
    the rate must be antitone when both centers are +1 and monotone when both
    are -1.
    """
    m = 2 * rule.radius  # number of off-center sites
    patterns = list(itertools.product((-1, 1), repeat=m))
    for up in patterns:
        for lo in patterns:
            if any(u < l for u, l in zip(up, lo)):
                continue
            for center in (-1, 1):
                w_up = up[: rule.radius] + (center,) + up[rule.radius :]
                w_lo = lo[: rule.radius] + (center,) + lo[rule.radius :]
                r_up, r_lo = rule.rate(w_up), rule.rate(w_lo)
                if center == 1 and r_up > r_lo + 1e-12:
                    return False
                if center == -1 and r_up < r_lo - 1e-12:
                    return False
    return True


@dataclass(frozen=True)
class ElementaryExpansion:
    """Coefficients a_I of -2*w(0)*rate(w) over spin products prod_{x in I} w(x).

    Keys are frozensets of window offsets in {-K, ..., K}.
    """

    radius: int
    coefficients: dict

    def evaluate(self, window) -> float:
        """Reconstruct the expanded function at one window."""
        offsets = range(-self.radius, self.radius + 1)
        vals = dict(zip(offsets, window))
        total = 0.0
        for subset, a in self.coefficients.items():
            prod = 1.0
            for x in subset:
                prod *= vals[x]
            total += a * prod
        return total

    def nonzero(self, tol: float = 1e-12) -> dict:
        return {I: a for I, a in self.coefficients.items() if abs(a) > tol}


def elementary_expansion(rule: LocalRule) -> ElementaryExpansion:
    """Product-basis (Fourier) expansion of -2*w(0)*rate(w) on {-1,+1}^(2K+1)."""
    K = rule.radius
    offsets = list(range(-K, K + 1))
    width = rule.width
    coeffs = {}
    windows = list(rule.windows())
    values = [-2.0 * w[K] * rule.rate(w) for w in windows]
    for bits in range(1 << width):
        subset = frozenset(offsets[j] for j in range(width) if bits & (1 << j))
        acc = 0.0
        for w, v in zip(windows, values):
            chi = 1
            for x in subset:
                chi *= w[x + K]
            acc += chi * v
        coeffs[subset] = acc / (1 << width)
    return ElementaryExpansion(radius=K, coefficients=coeffs)


@dataclass(frozen=True)
class ReactionProfile:
    """Reaction polynomial R, potential V with V'=-R and V(0)=0, and the
    decomposition R(rho) = -alpha*rho - G(rho); kappa = min V'' on [-1,1]
    when that minimum is strictly positive, else None."""

    R: Polynomial
    V: Polynomial
    G: Polynomial
    alpha: float
    kappa: Optional[float]


def _poly_min_on_interval(p: Polynomial, lo: float = -1.0, hi: float = 1.0) -> float:
    """Exact minimum of a polynomial on [lo, hi]: endpoints plus interior critical points."""
    candidates = [lo, hi]
    dp = p.deriv()
    if dp.degree() >= 1 or abs(dp.coef).max() > 0:
        for r in dp.roots():
            if abs(r.imag) < 1e-10 and lo <= r.real <= hi:
                candidates.append(float(r.real))
    return min(float(p(c)) for c in candidates)


def reaction_profile(rule: LocalRule) -> ReactionProfile:
    """Exact reaction term from the product expansion.

    Under the product measure with per-site mean rho, independent spins give
    E prod_{x in I} w(x) = rho^|I|, so R(rho) = sum_I a_I rho^|I|.
    """
    expansion = elementary_expansion(rule)
    deg = rule.width
    r_coef = np.zeros(deg + 1)
    alpha = 0.0
    g_coef = np.zeros(deg + 1)
    for subset, a in expansion.coefficients.items():
        k = len(subset)
        r_coef[k] += a
        if k == 1:
            alpha -= a
        else:
            g_coef[k] -= a
    R = Polynomial(np.trim_zeros(r_coef, "b") if np.any(r_coef) else [0.0])
    G = Polynomial(np.trim_zeros(g_coef, "b") if np.any(g_coef) else [0.0])
    V = (-R).integ(lbnd=0.0)
    Vpp = V.deriv(2) if V.degree() >= 2 else Polynomial([0.0])
    kmin = _poly_min_on_interval(Vpp)
    kappa = kmin if kmin > 0 else None
    return ReactionProfile(R=R, V=V, G=G, alpha=alpha, kappa=kappa)


@dataclass(frozen=True)
class ReversibilityCertificate:
    """Witness of the reversible special form rate(w) = (a1 + a2*w0)*h(neighbors)."""

    a1: float
    a2: float
    bernoulli_p: float  # stationary product-measure probability of spin +1


def check_reversible_form(rule: LocalRule) -> Optional[ReversibilityCertificate]:
    """Search for the factorized form with h independent of the center spin.

    a1, a2 are recovered from one neighbor pattern; the form holds iff the
    ratio rate(w)/(a1 + a2*w0) is independent of the center for every neighbor
    pattern.  Returns None when the form is absent.
    """
    K = rule.radius
    m = 2 * K
    patterns = list(itertools.product((-1, 1), repeat=m))

    def rates_for(pattern):
        w_plus = pattern[:K] + (1,) + pattern[K:]
        w_minus = pattern[:K] + (-1,) + pattern[K:]
        return rule.rate(w_plus), rule.rate(w_minus)

    rp0, rm0 = rates_for(patterns[0])
    # normalize h(patterns[0]) = 1: a1 + a2 = rate(center +1), a1 - a2 = rate(center -1)
    a1 = 0.5 * (rp0 + rm0)
    a2 = 0.5 * (rp0 - rm0)
    s_plus, s_minus = a1 + a2, a1 - a2
    if s_plus <= 0 or s_minus <= 0:
        return None
    for pattern in patterns:
        rp, rm = rates_for(pattern)
        if not np.isclose(rp / s_plus, rm / s_minus, rtol=REVERSIBLE_RTOL, atol=0.0):
            return None
    # single-site detailed balance: p * rate(+ -> -) = (1-p) * rate(- -> +)
    p = s_minus / (2.0 * a1)
    return ReversibilityCertificate(a1=a1, a2=a2, bernoulli_p=p)
