"""Entry laws with regularly varying tails.

The modulus ``A = |a_ij|`` of an entry has tail ``G(x) = P(A >= x) = L(x) x^-alpha``
where ``L`` is either a constant or a power of a logarithm.  Sign is an
independent fair coin when the law is symmetrized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy import integrate

from ._rng import generator
from .errors import ConfigurationError, DomainError

SLOWLY_VARYING_KINDS = ("constant", "log_power")


@dataclass(frozen=True)
class TailLaw:
    """Distribution of a single non-trivial matrix entry.

    ``slowly_varying="constant"`` with ``sv_param=C`` gives
    ``G(x) = min(1, C (x/scale)^-alpha)``, a Pareto law with minimum modulus
    ``scale * C**(1/alpha)``.  ``slowly_varying="log_power"`` with
    ``sv_param=beta`` gives ``G(x) = (1 + log(x/scale))^beta (x/scale)^-alpha``
    above ``scale``; ``beta < alpha`` keeps it monotone.

    With ``variance_normalized`` the modulus is divided by the root second
    moment of the un-normalized law, so ``E[a^2] = 1``.
    """

    alpha: float
    scale: float = 1.0
    slowly_varying: str = "constant"
    sv_param: float = 1.0
    symmetrized: bool = True
    variance_normalized: bool = False

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha}")
        if not self.scale > 0:
            raise ConfigurationError(f"scale must be positive, got {self.scale}")
        if self.slowly_varying not in SLOWLY_VARYING_KINDS:
            raise ConfigurationError(f"unknown slowly varying kind {self.slowly_varying!r}")
        if self.slowly_varying == "constant" and not self.sv_param > 0:
            raise ConfigurationError("constant slowly varying factor must be positive")
        if self.slowly_varying == "log_power" and not self.sv_param < self.alpha:
            raise ConfigurationError("log_power exponent beta must be below alpha")
        if self.variance_normalized and self.alpha <= 2:
            raise ConfigurationError(
                f"variance normalization needs alpha > 2 (alpha={self.alpha}): the variance is infinite"
            )

    # -- base (un-normalized) law ---------------------------------------------------

    @cached_property
    def _base_min(self) -> float:
        if self.slowly_varying == "constant":
            return self.scale * self.sv_param ** (1.0 / self.alpha)
        return self.scale

    def _base_tail(self, t):
        t = np.asarray(t, dtype=float)
        if self.slowly_varying == "constant":
            with np.errstate(divide="ignore"):
                g = np.where(t <= self._base_min, 1.0, (t / self._base_min) ** -self.alpha)
            return g
        u = np.maximum(t / self.scale, 1.0)
        g = (1.0 + np.log(u)) ** self.sv_param * u ** -self.alpha
        return np.where(t <= self.scale, 1.0, np.minimum(g, 1.0))

    def _base_quantile(self, p):
        """Modulus ``q`` with ``G(q) = p`` for the un-normalized law."""
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0) | (p > 1)):
            raise DomainError("tail probability must lie in (0, 1]")
        if self.slowly_varying == "constant":
            return self._base_min * p ** (-1.0 / self.alpha)
        # solve beta*log(1+y) - alpha*y = log p for y = log(q/scale) >= 0
        a, b = self.alpha, self.sv_param
        target = np.log(p)
        if b > 0:
            hi = target / (b - a)
        else:
            hi = -target / a
        hi = np.asarray(hi, dtype=float) + 1.0
        lo = np.zeros_like(hi)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            above = b * np.log1p(mid) - a * mid > target
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
            if np.all(hi - lo <= 2.0**-52 * np.maximum(hi, 1.0)):
                break
        return self.scale * np.exp(hi)

    @cached_property
    def _base_second_moment(self) -> float:
        if self.slowly_varying == "constant":
            return self.alpha * self._base_min**2 / (self.alpha - 2.0)
        return _moment_by_quadrature(self._base_tail, self.scale, 2)

    # -- the law as used ------------------------------------------------------------

    @cached_property
    def multiplier(self) -> float:
        """Factor applied to base moduli (``1/sqrt(E[B^2])`` when normalized)."""
        if self.variance_normalized:
            return 1.0 / math.sqrt(self._base_second_moment)
        return 1.0

    @property
    def min_modulus(self) -> float:
        """Smallest modulus the law can produce (the effective scale)."""
        return self._base_min * self.multiplier

    @property
    def constant_factor(self) -> float | None:
        """``C`` in ``G(x) = C x^-alpha`` above the minimum, for constant laws."""
        if self.slowly_varying != "constant":
            return None
        return self.min_modulus**self.alpha

    def tail(self, x):
        """Vectorized ``G(x) = P(|a| >= x)``."""
        return self._base_tail(np.asarray(x, dtype=float) / self.multiplier)

    def slowly_varying_value(self, x):
        """``L(x) = G(x) x^alpha``."""
        x = np.asarray(x, dtype=float)
        return self.tail(x) * x**self.alpha

    def quantile(self, p):
        """Modulus ``q`` with ``G(q) = p``."""
        return self.multiplier * self._base_quantile(p)

    def moment(self, k: float) -> float:
        """``E[A^k]`` for the modulus; ``inf`` when ``k >= alpha``."""
        if k >= self.alpha:
            return math.inf
        if self.slowly_varying == "constant":
            return self.alpha * self.min_modulus**k / (self.alpha - k)
        return _moment_by_quadrature(self.tail, self.min_modulus, k)

    def truncated_moment(self, k: float, x: float) -> float:
        """``E[A^k 1{A <= x}]``."""
        m0 = self.min_modulus
        if x <= m0:
            return 0.0
        if self.slowly_varying == "constant":
            a = self.alpha
            c = a * m0**a
            if math.isclose(k, a):
                return c * math.log(x / m0)
            return c * (x ** (k - a) - m0 ** (k - a)) / (k - a)
        return _truncated_moment_by_quadrature(self.tail, m0, k, x)

    def sample(self, rng, size=None):
        """Draw entries (signed when symmetrized) by inverse transform."""
        rng = generator(rng) if not isinstance(rng, np.random.Generator) else rng
        u = rng.random(size)
        # 1 - u lies in (0, 1], so the quantile is finite
        mod = self.quantile(1.0 - u)
        if self.symmetrized:
            sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
            mod = mod * sign
        if size is None:
            return float(mod)
        return mod

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "scale": self.scale,
            "slowly_varying": self.slowly_varying,
            "sv_param": self.sv_param,
            "symmetrized": self.symmetrized,
            "variance_normalized": self.variance_normalized,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TailLaw":
        return cls(**d)


def _moment_by_quadrature(tail, m0, k):
    # E[A^k] = int_0^inf k t^(k-1) G(t) dt, with G = 1 on [0, m0]
    head = m0**k

    def f(u):
        # k e^{ku} G(e^u), evaluated in log space; the tail underflows first
        if u > 709.0:
            return 0.0
        g = float(tail(math.exp(u)))
        return k * math.exp(k * u + math.log(g)) if g > 0 else 0.0

    body, _ = integrate.quad(f, math.log(m0), np.inf, limit=400, epsabs=0, epsrel=1e-11)
    return head + body


def _truncated_moment_by_quadrature(tail, m0, k, x):
    gx = float(tail(x))
    head = m0**k * (1.0 - gx)
    f = lambda u: k * math.exp(k * u) * (float(tail(math.exp(u))) - gx)
    body, _ = integrate.quad(f, math.log(m0), math.log(x), limit=400, epsabs=0, epsrel=1e-11)
    return head + body


# -- module-level operations ---------------------------------------------------------


def sample_entry(law: TailLaw, rng) -> float:
    """One draw from ``law``."""
    return law.sample(rng)


def sample_entries(law: TailLaw, rng, size):
    return law.sample(rng, size)


def tail_probability(law: TailLaw, x: float) -> float:
    if x < 0:
        raise DomainError("x must be non-negative")
    return float(law.tail(x))


def b_n(law: TailLaw, independent_entry_count: int) -> float:
    """Normalization making the largest of ``M`` independent moduli of order one.

    Returns the ``1/M`` upper quantile of the modulus.  For ``M = 1`` that is the
    minimum modulus rather than 0.
    """
    m = int(independent_entry_count)
    if m < 1:
        raise DomainError("independent entry count must be at least 1")
    return float(law.quantile(1.0 / m))


class TruncatedMomentBound(NamedTuple):
    bound: float
    empirical: float


def fitted_l0(law: TailLaw, x: float, k: float | None = None) -> float:
    """Dominating constant for truncated moments at cut-off ``x``.

    Built from ``s = sup_{t<=x} G(t) t^alpha`` and the finite moments of order
    below ``alpha``: ``2 s + 1 + max_j E[A^j]``.  For ``k = alpha`` a term
    ``s alpha log(x / m0)`` is added, since that moment diverges
    logarithmically.
    """
    m0 = law.min_modulus
    sup_l = max(m0**law.alpha, float(law.slowly_varying_value(max(x, m0))))
    finite = [law.moment(j) for j in range(1, math.ceil(law.alpha)) if j < law.alpha]
    l0 = 2.0 * sup_l + 1.0 + max(finite, default=0.0)
    if k is not None and math.isclose(k, law.alpha):
        l0 += sup_l * law.alpha * max(math.log(x / m0), 0.0)
    return l0


def truncated_moment_bound(law: TailLaw, k: int, x: float) -> TruncatedMomentBound:
    """Uniform bound on ``E[A^k 1{A<=x}]`` and the exact value it dominates.

    ``L0`` for ``k <= alpha`` and ``L0 k/(k-alpha) x^(k-alpha)`` above.
    """
    if x < law.min_modulus:
        raise DomainError(f"cut-off {x} is below the minimum modulus {law.min_modulus}")
    if k < 1:
        raise DomainError("k must be a positive integer")
    l0 = fitted_l0(law, x, k)
    if k <= law.alpha:
        bound = l0
    else:
        bound = l0 * k / (k - law.alpha) * x ** (k - law.alpha)
    return TruncatedMomentBound(bound, law.truncated_moment(k, x))


# -- regimes ------------------------------------------------------------------------


def critical_alpha(mu: float) -> float:
    """Tail exponent at the phase transition, ``2(1 + 1/mu)``."""
    return 2.0 * (1.0 + 1.0 / mu)


@dataclass(frozen=True)
class RegimeParams:
    mu: float
    alpha: float
    regime: str = field(init=False)

    def __post_init__(self):
        if not 0 < self.mu <= 1:
            raise ConfigurationError(f"mu must lie in (0, 1], got {self.mu}")
        if not self.alpha > 0:
            raise ConfigurationError("alpha must be positive")
        thr = critical_alpha(self.mu)
        if math.isclose(self.alpha, thr, rel_tol=1e-12, abs_tol=0.0):
            raise ConfigurationError(f"alpha = {self.alpha} is exactly critical for mu = {self.mu}")
        object.__setattr__(self, "regime", "subcritical" if self.alpha < thr else "supercritical")

    @property
    def threshold(self) -> float:
        return critical_alpha(self.mu)

    @property
    def needs_symmetry(self) -> bool:
        return self.alpha >= 1.0 + 1.0 / self.mu


class TailSumWindow(NamedTuple):
    part: str
    predicted_exponent: float


def classify_window(alpha: float, mu: float, low, high: float, epsilon: float) -> TailSumWindow:
    """Match a truncation window ``(n^low, n^high]`` to the applicable concentration bound.

    ``low=None`` (or ``-inf``) means no lower cut.  A window endpoint equal to
    ``mu/alpha`` is treated as the straddling case.
    """
    if epsilon <= 0:
        raise ConfigurationError("epsilon must be positive")
    r = mu / alpha
    at_r = lambda e: math.isclose(e, r, rel_tol=1e-12, abs_tol=1e-15)
    if low is None or low == -math.inf:
        if 0 <= high <= r or at_r(high):
            return TailSumWindow("a", mu + high * max(1.0 - alpha, 0.0) + epsilon)
        raise ConfigurationError(f"un-truncated window must have 0 <= high <= mu/alpha = {r}")
    if not high > low:
        raise ConfigurationError("window must satisfy low < high")
    straddles = (low <= r <= high) or at_r(low) or at_r(high)
    if straddles:
        eta, eta_p = max(r - low, 0.0), max(high - r, 0.0)
        if not epsilon > alpha * eta + eta_p:
            raise ConfigurationError(
                f"straddling window needs epsilon > alpha*eta + eta' = {alpha * eta + eta_p}"
            )
        return TailSumWindow("c", r + epsilon)
    if high < r:
        if alpha >= 1 and low >= 0:
            return TailSumWindow("b", mu - low * (alpha - 1.0) + epsilon)
        raise ConfigurationError("window below mu/alpha needs alpha >= 1 and low >= 0")
    if low > r and high > 0:
        return TailSumWindow("d", high + epsilon)
    raise ConfigurationError(f"window ({low}, {high}] matches no concentration regime")


class TailSumResult(NamedTuple):
    part: str
    predicted_exponent: float
    exceedance_frequency: float
    sums: np.ndarray


def truncated_sum_regime(
    law: TailLaw,
    mu: float,
    n: int,
    window,
    epsilon: float,
    replicas: int,
    seed,
) -> TailSumResult:
    """Frequency with which a truncated sum of ``floor(n^mu)`` moduli exceeds its bound."""
    low, high = window
    part, pred = classify_window(law.alpha, mu, low, high, epsilon)
    sums = np.array([truncated_sum(law, mu, n, window, seed, r) for r in range(replicas)])
    freq = float(np.mean(sums > float(n) ** pred))
    return TailSumResult(part, pred, freq, sums)


def truncated_sum(law: TailLaw, mu: float, n: int, window, seed, replica: int) -> float:
    """One replica of ``sum_j Y_j 1{n^low < Y_j <= n^high}`` over ``floor(n^mu)`` draws."""
    low, high = window
    d = int(math.floor(float(n) ** mu + 1e-9))
    rng = generator(seed, replica) if not isinstance(seed, np.random.Generator) else seed
    y = np.abs(law.sample(rng, d))
    keep = y <= float(n) ** high
    if low is not None and low != -math.inf:
        keep &= y > float(n) ** low
    return float(np.sum(y[keep]))
