"""Localization diagnostics for unit eigenvectors."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .ensemble import SampledMatrix
from .errors import ConfigurationError, DomainError
from .spectral import SpectralSummary

UNIT_TOL = 1e-10


def _unit(v):
    v = np.asarray(v)
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > UNIT_TOL:
        raise DomainError(f"vector is not a unit vector (norm {nrm!r})")
    return v


class Tail(NamedTuple):
    tail_mass: float
    support: np.ndarray


def best_tail(v, L: int) -> Tail:
    """Smallest mass outside ``L`` coordinates; the optimal support is the top-``L`` set."""
    v = _unit(v)
    n = v.size
    if not 1 <= L <= n:
        raise DomainError(f"L must lie in [1, {n}]")
    w = np.abs(v) ** 2
    # stable sort on -w breaks ties by index
    support = np.sort(np.argsort(-w, kind="stable")[:L])
    outside = np.ones(n, dtype=bool)
    outside[support] = False
    return Tail(float(np.sum(w[outside])), support)


def best_tail_profile(v) -> np.ndarray:
    """``best_tail(v, L)`` for ``L = 1..N`` at once."""
    w = np.sort(np.abs(_unit(v)) ** 2)
    # tail after keeping the L largest = sum of the N-L smallest
    return np.concatenate([np.cumsum(w)[::-1][1:], [0.0]])


class WindowTail(NamedTuple):
    tail_mass: float
    window_start: int


def successive_best_tail(v, L: int) -> WindowTail:
    """Smallest mass outside a cyclic interval of length ``L`` (sliding window)."""
    v = _unit(v)
    n = v.size
    if not 1 <= L <= n:
        raise DomainError(f"L must lie in [1, {n}]")
    w = np.abs(v) ** 2
    ext = np.concatenate([[0.0], np.cumsum(np.concatenate([w, w[: L - 1]]))])
    window = ext[L : L + n] - ext[:n]
    s = int(np.argmax(window))
    return WindowTail(float(max(np.sum(w) - window[s], 0.0)), s)


def participation_ratio(v) -> float:
    w = np.abs(np.asarray(v)) ** 2
    return float(np.sum(w) ** 2 / np.sum(w * w))


def two_coord_overlap(v, i: int, j: int, sign: float) -> float:
    """``|<v, (e_i + sign e_j)/sqrt 2>|``; invariant under the global sign of ``v``."""
    if i == j:
        raise DomainError("two-coordinate overlap needs i != j")
    v = np.asarray(v)
    return float(abs(v[i] + sign * v[j]) / math.sqrt(2.0))


def localized_eigenvalue_bound(rho_L: float, rho: float, eta: float) -> float:
    """Ceiling on ``|lambda|`` for an eigenvector that is ``(L, eta)``-localized."""
    if not 0 <= eta < 1:
        raise DomainError("eta must lie in [0, 1)")
    if rho_L > rho * (1 + 1e-12) + 1e-300:
        raise DomainError("rho_L cannot exceed rho")
    return (rho_L + math.sqrt(eta) * rho) / math.sqrt(1.0 - eta)


def localized_c_window(mu: float, alpha: float) -> float:
    """Upper limit on ``c`` (``L = floor(N^c)``) for the unrestricted-support statement."""
    return 0.4 * mu * (alpha - 2.0) / (alpha - 1.0)


@dataclass
class PairRecord:
    k: int
    eigenvalue: float
    best_tail: float
    successive_tail: float
    participation_ratio: float
    flagged_localized: bool
    flagged_successive: bool
    overlap: float = math.nan


@dataclass
class LocalizationReport:
    L: int
    c: float
    eta0: float
    rho: float
    localized_variant: bool
    successive_variant: bool
    pairs: list[PairRecord] = field(default_factory=list)
    note: str = ""

    @property
    def flagged(self) -> bool:
        return any(p.flagged_localized or p.flagged_successive for p in self.pairs)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "lambda", "L", "best_tail", "successive_tail", "PR", "overlap"])
            for p in self.pairs:
                w.writerow([
                    p.k, repr(p.eigenvalue), self.L, repr(p.best_tail),
                    repr(p.successive_tail), repr(p.participation_ratio), repr(p.overlap),
                ])


def delocalization_scan(summary: SpectralSummary, m: SampledMatrix, c: float, eta0: float) -> LocalizationReport:
    """Look for eigenpairs that are both large and localized at scale ``L = floor(N^c)``.

    A pair is flagged when its own best tail ``eta`` is below ``eta0`` and
    ``|lambda| > sqrt(2 eta) rho(A)``.  ``rho`` is taken from the computed
    eigenvalues, so the summary should contain both ends of the spectrum.
    """
    if not 0 < eta0 < 0.5:
        raise ConfigurationError("eta0 must lie in (0, 1/2)")
    if summary.eigenvectors is None:
        raise ConfigurationError("summary holds no eigenvectors")
    mu = m.pattern.mu
    alpha = m.law.alpha if m.law is not None else math.inf
    loc_ok = c < localized_c_window(mu, alpha) if math.isfinite(alpha) else c < 0.4 * mu
    succ_ok = c < mu
    if not (loc_ok or succ_ok):
        raise ConfigurationError(f"c = {c} is outside both localization windows")
    n = m.n
    L = max(1, int(math.floor(n**c + 1e-9)))
    rho = summary.spectral_radius
    report = LocalizationReport(L, c, eta0, rho, loc_ok, succ_ok)
    if not summary.complete:
        report.note = "only the computed extreme eigenpairs were scanned"
    for t, lam in enumerate(summary.eigenvalues):
        v = summary.eigenvectors[:, t]
        v = v / np.linalg.norm(v)
        eta = best_tail(v, L).tail_mass
        eta_s = successive_best_tail(v, L).tail_mass
        big = lambda e: e < eta0 and abs(lam) > math.sqrt(2.0 * e) * rho
        report.pairs.append(PairRecord(
            k=t + 1,
            eigenvalue=float(lam),
            best_tail=eta,
            successive_tail=eta_s,
            participation_ratio=participation_ratio(v),
            flagged_localized=loc_ok and big(eta),
            flagged_successive=succ_ok and big(eta_s),
        ))
    return report
