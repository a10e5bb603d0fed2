"""Point-process statistics for rescaled extreme values."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats

from .errors import DomainError, PreconditionError

MIN_REPLICAS = 30
DEFAULT_K = 5


@dataclass(frozen=True)
class PointProcessSample:
    """Positive points sorted in descending order, with tail exponent ``alpha``."""

    points: np.ndarray
    alpha: float
    replica: int | None = None
    seed: int | None = None

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim != 1:
            raise DomainError("points must be one-dimensional")
        if p.size and (np.any(p <= 0) or np.any(np.diff(p) > 0)):
            raise DomainError("points must be positive and sorted descending")
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        object.__setattr__(self, "points", p)

    @classmethod
    def from_values(cls, values, scale: float, alpha: float, replica=None, seed=None) -> "PointProcessSample":
        """Keep the positive values, divide by ``scale`` and sort descending."""
        v = np.asarray(values, dtype=float) / scale
        v = np.sort(v[v > 0])[::-1]
        return cls(v, alpha, replica, seed)


def expected_count_above(alpha: float, t: float) -> float:
    """Mass of ``alpha x^{-alpha-1} dx`` on ``(t, inf)``."""
    if not t > 0:
        raise DomainError("t must be positive")
    if math.isinf(t):
        return 0.0
    return float(t ** (-alpha))


class PoissonCountResult(NamedTuple):
    mean_count: float
    var_count: float
    poisson_dispersion: float
    pvalue_proxy: float
    degenerate: bool
    observed: np.ndarray
    expected: np.ndarray


def _poisson_bins(lam: float, replicas: int) -> np.ndarray:
    p = stats.poisson.pmf([0, 1, 2], lam)
    return replicas * np.append(p, max(0.0, 1.0 - p.sum()))


def poisson_count_test(samples, t: float) -> PoissonCountResult:
    """Compare per-replica counts of points above ``t`` with Poisson(``t^-alpha``).

    ``pvalue_proxy`` is the chi-square statistic over the bins 0, 1, 2, >=3.
    """
    samples = list(samples)
    if len(samples) < MIN_REPLICAS:
        raise PreconditionError(f"need at least {MIN_REPLICAS} replicas, got {len(samples)}")
    alpha = samples[0].alpha
    counts = np.array([int(np.count_nonzero(s.points > t)) for s in samples])
    mean = float(counts.mean())
    var = float(counts.var(ddof=1))
    degenerate = bool(np.all(counts == counts[0]))
    disp = var / mean if mean > 0 else math.nan
    obs = np.bincount(np.minimum(counts, 3), minlength=4).astype(float)
    exp = _poisson_bins(expected_count_above(alpha, t), len(samples))
    nz = exp > 0
    chi2 = float(np.sum((obs[nz] - exp[nz]) ** 2 / exp[nz]))
    return PoissonCountResult(mean, var, disp, chi2, degenerate, obs, exp)


def transformed_gaps(sample: PointProcessSample, K: int = DEFAULT_K) -> np.ndarray:
    """Gaps ``u_{k+1} - u_k`` of ``u_k = x_k^{-alpha}`` over the top ``K`` points."""
    if K < 2:
        raise DomainError("K must be at least 2 to produce a gap")
    if sample.points.size < K:
        raise PreconditionError(f"sample has {sample.points.size} points, need {K}")
    u = sample.points[:K] ** (-sample.alpha)
    # the map reverses order, so u must come out ascending
    assert np.all(np.diff(u) >= 0), "transform did not reverse the order"
    return np.diff(u)


def transformed_spacings_test(samples, K: int = DEFAULT_K) -> float:
    """KS distance of pooled transformed gaps from Exponential(1)."""
    if isinstance(samples, PointProcessSample):
        samples = [samples]
    gaps = np.concatenate([transformed_gaps(s, K) for s in samples])
    return float(stats.kstest(gaps, "expon").statistic)


def frechet_cdf(x, alpha: float):
    """``exp(-x^-alpha)`` for ``x > 0``, else 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-(x[pos] ** (-alpha)))
    return out


def frechet_ks(maxima, alpha: float) -> float:
    """KS distance of rescaled maxima from the Frechet law with shape ``alpha``."""
    x = np.asarray(maxima, dtype=float)
    if x.size == 0:
        raise PreconditionError("no maxima supplied")
    return float(stats.kstest(x, lambda y: frechet_cdf(y, alpha)).statistic)
