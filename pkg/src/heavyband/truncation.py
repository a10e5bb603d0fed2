"""Entry cut-offs, trace-power moments and the bounds built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ensemble import BandPattern, SampledMatrix, sample_matrix
from .errors import ConfigurationError, DomainError
from .heavy_tail import TailLaw

TRACE_DENSE_LIMIT = 512


@dataclass(frozen=True)
class TruncationSpec:
    """Cut-off exponent ``gamma``, norm exponent ``gamma_prime``, power-range exponent ``gamma_double_prime``, power ``s``."""

    gamma: float
    gamma_prime: float
    gamma_double_prime: float
    s: int = 1
    mu: float = 1.0

    def __post_init__(self):
        if min(self.gamma, self.gamma_prime, self.gamma_double_prime) <= 0:
            raise ConfigurationError("truncation exponents must be positive")
        if self.s < 1:
            raise ConfigurationError("s must be a positive integer")

    def window_violations(self) -> list[str]:
        """Names of the violated hypothesis inequalities (empty when all hold)."""
        bad = []
        if not self.mu / 2 <= self.gamma_prime:
            bad.append(f"mu/2 <= gamma' fails ({self.mu / 2} > {self.gamma_prime})")
        lhs = self.mu / 4 + self.gamma + self.gamma_double_prime
        if not lhs < self.gamma_prime:
            bad.append(f"mu/4 + gamma + gamma'' < gamma' fails ({lhs} >= {self.gamma_prime})")
        return bad

    def s_in_range(self, n: int) -> bool:
        """Whether ``s <= N^gamma''``."""
        return self.s <= n**self.gamma_double_prime * (1 + 1e-12)

    def with_s(self, s: int) -> "TruncationSpec":
        return TruncationSpec(self.gamma, self.gamma_prime, self.gamma_double_prime, s, self.mu)


def truncate_matrix(m: SampledMatrix, gamma: float) -> tuple[SampledMatrix, SampledMatrix]:
    """Split ``m`` into entries with ``|a_ij| <= N^gamma`` and the rest."""
    if gamma <= 0:
        raise ConfigurationError("gamma must be positive")
    cut = math.exp(min(gamma * math.log(m.n), 709.0))  # saturates instead of overflowing
    keep = np.abs(m.values) <= cut
    hat = np.where(keep, m.values, 0.0)
    removed = np.where(keep, 0.0, m.values)
    return m.with_values(hat), m.with_values(removed)


def remainder_norm_bound(removed: SampledMatrix) -> float:
    """Maximum absolute row sum, an upper bound on the spectral norm."""
    r, c, v = removed.rows, removed.cols, np.abs(removed.values)
    off = r != c
    rows = np.bincount(r, weights=v, minlength=removed.n) + np.bincount(c[off], weights=v[off], minlength=removed.n)
    return float(rows.max()) if removed.n else 0.0


def trace_powers(a: np.ndarray, s_values) -> dict[int, float]:
    """``Tr(A^{2s})`` for each requested ``s`` by repeated multiplication."""
    out = {}
    p = np.eye(a.shape[0])
    cur = 0
    for s in sorted(set(int(x) for x in s_values)):
        while cur < s:
            p = p @ a
            cur += 1
        # A symmetric: Tr(A^{2s}) = ||A^s||_F^2
        out[s] = float(np.sum(p * p))
    return out


def overflow_risk(m: SampledMatrix, s: int) -> bool:
    """True when ``Tr(A^{2s})`` might leave the double range (row-sum norm bound)."""
    bound = remainder_norm_bound(m)
    if bound == 0:
        return False
    return 2 * s * math.log(bound) + math.log(m.n) > 0.9 * math.log(np.finfo(float).max)


class MomentEstimate(NamedTuple):
    estimate: float
    std_error: float
    overflow_risk: bool
    samples: np.ndarray


def trace_power_moment(
    pattern: BandPattern, law: TailLaw, gamma: float, s: int, replicas: int, seed: int
) -> MomentEstimate:
    """Monte Carlo estimate of ``E[Tr(A_hat^{2s})]`` for the cut-off ``N^gamma``."""
    if pattern.n > TRACE_DENSE_LIMIT:
        raise ConfigurationError(f"trace powers are computed densely up to N = {TRACE_DENSE_LIMIT}")
    vals = np.empty(replicas)
    risky = False
    for r in range(replicas):
        hat, _ = truncate_matrix(sample_matrix(pattern, law, seed, r), gamma)
        risky = risky or overflow_risk(hat, s)
        vals[r] = trace_powers(hat.dense(), [s])[s]
    se = float(vals.std(ddof=1) / math.sqrt(replicas)) if replicas > 1 else math.inf
    return MomentEstimate(float(vals.mean()), se, risky, vals)


class LogBound(NamedTuple):
    log_value: float
    value: float


def _from_log(x: float) -> LogBound:
    return LogBound(x, math.exp(x) if x < 709.0 else math.inf)


def moment_bound_rhs(n: int, spec: TruncationSpec, fitted_constant: float) -> LogBound:
    """``C N^{1+2 gamma} s^{-3/2} (2 N^{gamma'})^{2s}``, evaluated in log space."""
    bad = spec.window_violations()
    if bad:
        raise ConfigurationError("; ".join(bad))
    if fitted_constant <= 0:
        raise DomainError("fitted constant must be positive")
    ln = math.log(n)
    s = spec.s
    log_v = (
        math.log(fitted_constant)
        + (1 + 2 * spec.gamma) * ln
        - 1.5 * math.log(s)
        + 2 * s * (math.log(2.0) + spec.gamma_prime * ln)
    )
    return _from_log(log_v)


def chebyshev_tail(n: int, spec: TruncationSpec, kappa: float, fitted_constant: float) -> LogBound:
    """Bound on ``P(||A_hat|| >= kappa * 2 N^{gamma'})`` from the moment bound."""
    if not 0 < kappa < 1:
        raise DomainError("kappa must lie in (0, 1)")
    rhs = moment_bound_rhs(n, spec, fitted_constant)
    log_v = rhs.log_value - 2 * spec.s * (math.log(kappa) + math.log(2.0) + spec.gamma_prime * math.log(n))
    return _from_log(log_v)


def catalan(s: int) -> int:
    """``binom(2s, s) / (s + 1)``."""
    if s < 0:
        raise DomainError("s must be non-negative")
    return math.comb(2 * s, s) // (s + 1)


def bennett_h(u):
    return (1.0 + u) * np.log1p(u) - u


def bennett_bound(m: int, p: float, eta: float) -> float:
    """``2 exp(-m p h(eta))`` bounding ``P(|mean - p| > eta p)`` for ``m`` Bernoulli(``p``) draws."""
    if m < 1 or not 0 < p <= 1 or eta <= 0:
        raise DomainError("need m >= 1, 0 < p <= 1 and eta > 0")
    return float(2.0 * math.exp(-m * p * bennett_h(eta)))


def subcritical_cutoff_window(mu: float, alpha: float) -> tuple[float, float]:
    """Open interval of cut-off exponents that separate the largest entries from the bulk (subcritical case)."""
    return mu / alpha - 1.0 / (alpha * (alpha - 1.0)), (1.0 + mu) / alpha - mu / 4.0


def supercritical_cutoff_window(mu: float, alpha: float) -> tuple[float, float]:
    """Open interval of cut-off exponents for the edge argument (supercritical case)."""
    return mu / (2.0 * (alpha - 1.0)), mu / 4.0
