"""Instance checks for eigenvalue/eigenvector perturbation and for the
"largest eigenvalue ~ largest entry" mechanism."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .ensemble import as_dense, largest_entries
from .errors import DomainError, PreconditionError, TheoremViolation
from .spectral import dense_eigh

SLACK = 1e-9


class Decomposition(NamedTuple):
    lam: float
    epsilon: float
    w: np.ndarray


def decompose(h, v) -> Decomposition:
    """Write ``H v = lam v + eps w`` with ``lam = <v, Hv>``, ``w`` a unit vector orthogonal to ``v``."""
    h = as_dense(h)
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise DomainError("v must be a unit vector")
    hv = h @ v
    lam = float(v @ hv)
    r = hv - lam * v
    eps = float(np.linalg.norm(r))
    w = r / eps if eps > 0 else np.zeros_like(v)
    return Decomposition(lam, eps, w)


def _scale(vals):
    return max(1.0, float(np.max(np.abs(vals))))


class PerturbedEigenvalue(NamedTuple):
    lam: float
    epsilon: float
    nearest_eig: float
    gap_ok: bool


def check_perturbed_eigenvalue(h, v) -> PerturbedEigenvalue:
    """Some eigenvalue of ``H`` lies within ``eps`` of the Rayleigh quotient of ``v``."""
    lam, eps, _ = decompose(h, v)
    vals = dense_eigh(h, vectors=False).eigenvalues
    nearest = float(vals[np.argmin(np.abs(vals - lam))])
    ok = abs(nearest - lam) <= eps + SLACK * _scale(vals)
    if not ok:
        raise TheoremViolation(f"no eigenvalue within {eps!r} of {lam!r} (nearest {nearest!r})")
    return PerturbedEigenvalue(lam, eps, nearest, ok)


class Alignment(NamedTuple):
    lhs: float
    rhs: float


def check_eigenvector_alignment(h, v, d: float) -> Alignment:
    """``||v_eps - P_v v_eps|| <= 2 eps / (d - eps)`` for the lone eigenvalue near ``<v, Hv>``."""
    lam, eps, _ = decompose(h, v)
    spec = dense_eigh(h)
    vals, vecs = spec.eigenvalues, spec.eigenvectors
    tiny = SLACK * _scale(vals)
    dist = np.abs(vals - lam)
    inside = np.flatnonzero(dist <= eps + tiny)
    if inside.size != 1:
        raise PreconditionError(f"{inside.size} eigenvalues lie in the ball of radius {eps!r}")
    if not d > eps:
        raise PreconditionError(f"gap d = {d!r} must exceed eps = {eps!r}")
    others = np.delete(dist, inside)
    if others.size and others.min() < d - tiny:
        raise PreconditionError(f"an eigenvalue lies at distance {others.min()!r} < d = {d!r}")
    u = vecs[:, inside[0]]
    v = np.asarray(v, dtype=float)
    lhs = float(np.linalg.norm(u - (u @ v) * v))
    rhs = 2.0 * eps / (d - eps)
    if lhs > rhs + SLACK:
        raise TheoremViolation(f"alignment bound fails: {lhs!r} > {rhs!r}")
    return Alignment(lhs, rhs)


@dataclass
class HypothesisA3Report:
    n: int
    c_n: float
    kappa: float
    tau: float
    nu: float
    entry_ratios: list[float]
    gap_ratios: list[float]
    max_large_per_row: int
    max_diagonal: float
    max_small_row_sum: float
    c_ratio_to_previous: float | None = None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def hypothesis_a3_check(h_sequence, c: Callable[[int], float], kappa: float, tau: float, nu: float, K: int = 3):
    """Evaluate the structural hypotheses on each matrix of an increasing sequence.

    ``c`` maps the dimension to the scale ``c_n``.  Returns one report per
    matrix and a dict of min/max proxies across sizes for the ratio
    conditions; the asymptotic scale-consistency condition is reported as
    ratios only.
    """
    for name, x in (("kappa", kappa), ("tau", tau), ("nu", nu)):
        if not 0 < x < 1:
            raise DomainError(f"{name} must lie in (0, 1)")
    reports = []
    prev = None
    for h in h_sequence:
        a = as_dense(h)
        n = a.shape[0]
        cn = float(c(n))
        big = np.abs(a) > cn**kappa
        small_sum = np.where(np.abs(a) < cn**kappa, np.abs(a), 0.0).sum(axis=1)
        top = largest_entries(a, min(K + 1, n * (n + 1) // 2))
        mods = [e.modulus for e in top]
        rep = HypothesisA3Report(
            n=n,
            c_n=cn,
            kappa=kappa,
            tau=tau,
            nu=nu,
            entry_ratios=[x / cn for x in mods[:K]],
            gap_ratios=[(mods[t] - mods[t + 1]) / cn for t in range(min(K, len(mods) - 1))],
            max_large_per_row=int(big.sum(axis=1).max()),
            max_diagonal=float(np.abs(np.diag(a)).max()),
            max_small_row_sum=float(small_sum.max()),
            c_ratio_to_previous=None if prev is None else cn / prev,
        )
        rep.checks = {
            "b_i": rep.max_large_per_row <= 1,
            "b_ii": rep.max_diagonal <= cn**tau,
            "b_iii": rep.max_small_row_sum <= cn**nu,
        }
        reports.append(rep)
        prev = cn
    ratios = [r for rep in reports for r in rep.entry_ratios]
    gaps = [g for rep in reports for g in rep.gap_ratios]
    proxies = {
        "entry_ratio_min": min(ratios, default=math.nan),
        "entry_ratio_max": max(ratios, default=math.nan),
        "gap_ratio_min": min(gaps, default=math.nan),
        "a_ii": bool(ratios) and min(ratios) > 0 and math.isfinite(max(ratios)) and (not gaps or min(gaps) > 0),
        "c_ratios": [rep.c_ratio_to_previous for rep in reports[1:]],
    }
    return reports, proxies


class A2Record(NamedTuple):
    k: int
    i: int
    j: int
    sign: float
    ratio: float
    vector_distance: float
    fact1_gap: float
    fact3_residual: float


def predicted_vector(n: int, i: int, j: int, sign: float) -> np.ndarray:
    """``(e_i + sign e_j)/sqrt 2``, or ``e_i`` for a diagonal entry."""
    u = np.zeros(n)
    if i == j:
        u[i] = 1.0
    else:
        u[i] = 1.0 / math.sqrt(2.0)
        u[j] = sign / math.sqrt(2.0)
    return u


def theorem_a2_verify(h, K: int) -> list[A2Record]:
    """Compare the top ``K`` eigenpairs of ``H`` with its top ``K`` entries."""
    a = as_dense(h)
    n = a.shape[0]
    spec = dense_eigh(a)
    top = largest_entries(a, K)
    norm_inf = float(np.abs(a).sum(axis=1).max())
    h1 = top[0].modulus
    out = []
    for k, e in enumerate(top):
        lam = spec.eigenvalues[k]
        v = spec.eigenvectors[:, k].copy()
        if v[e.i] < 0:
            v = -v
        u = predicted_vector(n, e.i, e.j, e.sign)
        resid = float(np.linalg.norm(a @ u - e.modulus * u))
        out.append(A2Record(
            k + 1, e.i, e.j, e.sign,
            float(lam / e.modulus) if e.modulus else math.nan,
            float(np.linalg.norm(v - u)),
            norm_inf / h1 - 1.0 if h1 else math.nan,
            resid,
        ))
    return out


class Fact1Chain(NamedTuple):
    largest_entry: float
    norm_inf: float
    upper: float
    holds: bool


def fact1_chain(h, threshold: float) -> Fact1Chain:
    """``|h_1| <= ||H||_inf <= |h_1| + max_i sum_{|h_ij| < threshold} |h_ij|``.

    Requires every row to hold at most one entry of modulus ``>= threshold``.
    """
    a = np.abs(as_dense(h))
    if int((a >= threshold).sum(axis=1).max()) > 1:
        raise PreconditionError("a row has two entries at or above the threshold")
    h1 = float(a.max())
    norm_inf = float(a.sum(axis=1).max())
    upper = h1 + float(np.where(a < threshold, a, 0.0).sum(axis=1).max())
    tiny = SLACK * max(1.0, upper)
    holds = h1 <= norm_inf + tiny and norm_inf <= upper + tiny
    if not holds:
        raise TheoremViolation(f"row-sum chain fails: {h1!r}, {norm_inf!r}, {upper!r}")
    return Fact1Chain(h1, norm_inf, upper, holds)


class Interlacing(NamedTuple):
    lambda_k: float
    lambda_1_sub: float
    holds: bool


def weyl_interlacing(h, removed) -> Interlacing:
    """``lambda_{r+1}(H) <= lambda_1(H minus rows/cols removed)`` with ``r = len(removed)``."""
    a = as_dense(h)
    removed = sorted(set(int(i) for i in removed))
    keep = np.setdiff1d(np.arange(a.shape[0]), removed)
    vals = dense_eigh(a, vectors=False).eigenvalues
    sub = dense_eigh(a[np.ix_(keep, keep)], vectors=False).eigenvalues
    lk, l1 = float(vals[len(removed)]), float(sub[0])
    holds = lk <= l1 + SLACK * _scale(vals)
    if not holds:
        raise TheoremViolation(f"interlacing fails: {lk!r} > {l1!r}")
    return Interlacing(lk, l1, holds)
