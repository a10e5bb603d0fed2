"""Eigen-solvers, the semicircle distance and principal-submatrix spectral radii."""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from . import _tridiag
from ._rng import generator
from .ensemble import SampledMatrix, as_dense
from .errors import ConfigurationError, DomainError, NumericError

NATIVE_LIMIT = 512
EXHAUSTIVE_BUDGET = 10**6


@dataclass
class SpectralSummary:
    """Computed eigenpairs, eigenvalues descending.

    ``eigenvectors[:, t]`` belongs to ``eigenvalues[t]`` and
    ``residuals[t] = ||H v - lambda v||``.  ``complete`` is true when
    ``eigenvalues`` is the whole spectrum.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray | None
    method: str
    n: int
    iterations: int = 0
    tolerance: float = 0.0
    converged: bool = True
    complete: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def spectral_radius(self) -> float:
        """``max |lambda|`` over computed eigenvalues (exact when both ends are present)."""
        return float(np.max(np.abs(self.eigenvalues)))

    def top(self, k: int) -> np.ndarray:
        return self.eigenvalues[:k]

    def bottom(self, k: int) -> np.ndarray:
        return self.eigenvalues[::-1][:k]


def _operator(m):
    if isinstance(m, SampledMatrix):
        return m.operator()
    if sparse.issparse(m):
        return m.tocsr()
    return as_dense(m)


def _residuals(op, vals, vecs):
    r = op @ vecs - vecs * vals
    return np.linalg.norm(r, axis=0)


def _dense_tolerance(n):
    return max(1e-12, 64.0 * n * np.finfo(float).eps)


def tridiagonal_eigh(d, e, vectors: bool = True, max_sweeps: int | None = None):
    """Eigen-decomposition of the symmetric tridiagonal matrix with diagonal ``d`` and off-diagonal ``e``.

    Returns ``(values, vectors)`` in ascending order (``vectors`` is ``None`` if
    not requested).
    """
    d = np.array(d, dtype=float)
    n = d.size
    ee = np.zeros(max(n, 1))
    ee[: n - 1] = e
    zt = np.eye(n) if vectors else np.empty((n, 0))
    status = _tridiag.tql_implicit(d, ee, zt, max_sweeps or 30 * max(n, 1))
    if status:
        raise NumericError(f"QL iteration did not converge at eigenvalue index {status - 1}", status - 1)
    order = np.argsort(d, kind="stable")
    if vectors:
        return d[order], zt[order].T.copy()
    return d[order], None


def dense_eigh(m, vectors: bool = True, backend: str = "auto", tol: float | None = None) -> SpectralSummary:
    """Full spectrum by Householder tridiagonalization and implicit-shift QL.

    ``backend="native"`` uses the compiled in-package reduction; ``"lapack"``
    delegates to ``numpy.linalg.eigh``; ``"auto"`` picks native up to
    ``NATIVE_LIMIT``.  Every returned eigenpair is checked against the
    explicit residual.
    """
    a = as_dense(m) if not isinstance(m, SampledMatrix) else m.dense()
    n = a.shape[0]
    if backend == "auto":
        backend = "native" if n <= NATIVE_LIMIT else "lapack"
    if backend == "native":
        d, e, qt = _tridiag.householder_tridiagonal(np.ascontiguousarray(a, dtype=float), vectors)
        if not vectors:
            qt = np.empty((n, 0))
        status = _tridiag.tql_implicit(d, e, qt, 30 * max(n, 1))
        if status:
            raise NumericError(f"QL iteration did not converge at eigenvalue index {status - 1}", status - 1)
        order = np.argsort(-d, kind="stable")
        vals = d[order]
        vecs = qt[order].T.copy() if vectors else None
    elif backend == "lapack":
        if vectors:
            vals, vecs = np.linalg.eigh(a)
            vals, vecs = vals[::-1].copy(), vecs[:, ::-1].copy()
        else:
            vals, vecs = np.linalg.eigvalsh(a)[::-1].copy(), None
    else:
        raise ConfigurationError(f"unknown backend {backend!r}")
    tol = _dense_tolerance(n) if tol is None else tol
    res = None
    if vectors:
        res = _residuals(a, vals, vecs)
        rho = max(abs(vals[0]), abs(vals[-1])) if n else 0.0
        bad = np.flatnonzero(res > tol * max(1.0, rho))
        if bad.size:
            raise NumericError(f"eigenpair {bad[0]} fails the residual check ({res[bad[0]]:.3e})", int(bad[0]))
    return SpectralSummary(vals, vecs, res, "dense", n, tolerance=tol, complete=True, extra={"backend": backend})


def _ritz(alpha, beta, want_vectors):
    m = alpha.size
    d = alpha.copy()
    e = np.zeros(m)
    e[: m - 1] = beta
    if want_vectors:
        zt = np.eye(m)
    else:
        zt = np.zeros((m, 1))
        zt[m - 1, 0] = 1.0
    status = _tridiag.tql_implicit(d, e, zt, 30 * m)
    if status:
        raise NumericError("QL iteration on the Lanczos tridiagonal did not converge", status - 1)
    return d, zt


def _lanczos_largest(op, n, k, tol, max_iter, rng):
    """Largest algebraic eigenpairs of ``op`` with full reorthogonalization."""
    m_max = min(n, max_iter)
    q_basis = np.zeros((n, m_max))
    alpha = np.zeros(m_max)
    beta = np.zeros(m_max)
    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    m = 0
    for j in range(m_max):
        q_basis[:, j] = q
        w = op @ q
        a = float(q @ w)
        alpha[j] = a
        w = w - a * q
        if j > 0:
            w -= beta[j - 1] * q_basis[:, j - 1]
        basis = q_basis[:, : j + 1]
        for _ in range(2):
            w -= basis @ (basis.T @ w)
        b = float(np.linalg.norm(w))
        m = j + 1
        if m >= k:
            theta, last = _ritz(alpha[:m], beta[: m - 1], False)
            top = np.argsort(-theta, kind="stable")[:k]
            scale = max(1.0, float(np.max(np.abs(theta))))
            if np.all(b * np.abs(last[top, 0]) <= 0.1 * tol * scale):
                break
        if m == m_max:
            break
        if b <= 1e-12 * max(1.0, abs(a)):
            # invariant subspace: continue from a fresh direction orthogonal to the basis
            w = rng.standard_normal(n)
            for _ in range(2):
                w -= basis @ (basis.T @ w)
            b_new = float(np.linalg.norm(w))
            if b_new <= 1e-10:
                break
            beta[j] = 0.0
            q = w / b_new
        else:
            beta[j] = b
            q = w / b
    theta, zt = _ritz(alpha[:m], beta[: m - 1], True)
    top = np.argsort(-theta, kind="stable")[:k]
    vecs = q_basis[:, :m] @ zt[top].T
    vecs /= np.linalg.norm(vecs, axis=0)
    # Rayleigh quotients of the normalized Ritz vectors
    vals = np.einsum("ij,ij->j", vecs, op @ vecs)
    return vals, vecs, m


def lanczos_topk(
    m,
    k: int,
    which: str = "largest_algebraic",
    tol: float = 1e-8,
    max_iter: int | None = None,
    seed: int = 0,
) -> SpectralSummary:
    """Extreme eigenpairs by Lanczos with full reorthogonalization.

    ``which`` is ``largest_algebraic``, ``largest_magnitude`` (both ends
    searched, then merged) or ``both_ends`` (``k`` from each end).  Residuals
    are recomputed from the operator; ``converged`` is false when any pair
    misses ``tol * max(1, spectral radius estimate)``.
    """
    op = _operator(m)
    n = op.shape[0]
    if k < 1 or k > n:
        raise ConfigurationError(f"k must lie in [1, {n}]")
    if max_iter is None:
        max_iter = max(300, 30 * k)
    rng = generator(seed)
    iters = 0
    if which == "largest_algebraic":
        vals, vecs, it = _lanczos_largest(op, n, k, tol, max_iter, rng)
        iters += it
    elif which in ("largest_magnitude", "both_ends"):
        v1, x1, it1 = _lanczos_largest(op, n, k, tol, max_iter, rng)
        v2, x2, it2 = _lanczos_largest(-op, n, k, tol, max_iter, rng)
        iters += it1 + it2
        vals = np.concatenate([v1, -v2])
        vecs = np.concatenate([x1, x2], axis=1)
        if which == "largest_magnitude":
            keep = np.argsort(-np.abs(vals), kind="stable")[:k]
            vals, vecs = vals[keep], vecs[:, keep]
    else:
        raise ConfigurationError(f"unknown selector {which!r}")
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    res = _residuals(op, vals, vecs)
    rho = float(np.max(np.abs(vals)))
    converged = bool(np.all(res <= tol * max(1.0, rho)))
    return SpectralSummary(
        vals, vecs, res, "lanczos", n, iterations=iters, tolerance=tol, converged=converged,
        extra={"which": which},
    )


def spectral_radius(m) -> float:
    a = as_dense(m) if not isinstance(m, SampledMatrix) else m.dense()
    if a.shape[0] == 0:
        return 0.0
    vals = np.linalg.eigvalsh(a)
    return float(max(abs(vals[0]), abs(vals[-1])))


# -- semicircle ---------------------------------------------------------------------


def semicircle_cdf(x):
    """CDF of the semicircle law on ``[-2, 2]``."""
    x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    return 0.5 + x * np.sqrt(4.0 - x * x) / (4.0 * np.pi) + np.arcsin(x / 2.0) / np.pi


def semicircle_quantile(p):
    p = np.asarray(p, dtype=float)
    lo = np.full(p.shape, -2.0)
    hi = np.full(p.shape, 2.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        below = semicircle_cdf(mid) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def semicircle_ks(eigenvalues, scale: float) -> float:
    """Kolmogorov-Smirnov distance between the ESD of ``eigenvalues/scale`` and the semicircle."""
    x = np.sort(np.asarray(eigenvalues, dtype=float).ravel())
    if x.size == 0:
        raise DomainError("no eigenvalues given")
    if not scale > 0:
        raise DomainError("scale must be positive")
    f = semicircle_cdf(x / scale)
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


# -- principal submatrices ----------------------------------------------------------


def _batched_radius(a, index_sets):
    idx = np.asarray(index_sets)
    sub = a[idx[:, :, None], idx[:, None, :]]
    vals = np.linalg.eigvalsh(sub)
    return float(np.max(np.maximum(np.abs(vals[:, 0]), np.abs(vals[:, -1]))))


def submatrix_rho(m, L: int, mode: str = "successive", chunk: int = 4096) -> float:
    """Largest spectral radius over ``L x L`` principal submatrices.

    ``exhaustive`` visits all ``C(N, L)`` index sets and refuses beyond
    ``EXHAUSTIVE_BUDGET`` of them; ``successive`` visits the ``N`` cyclic
    intervals.
    """
    a = as_dense(m) if not isinstance(m, SampledMatrix) else m.dense()
    n = a.shape[0]
    if not 1 <= L <= n:
        raise DomainError(f"L must lie in [1, {n}]")
    if mode == "successive":
        starts = np.arange(n) if L < n else np.arange(1)
        sets = (starts[:, None] + np.arange(L)[None, :]) % n
        return max(_batched_radius(a, sets[s : s + chunk]) for s in range(0, sets.shape[0], chunk))
    if mode != "exhaustive":
        raise ConfigurationError(f"unknown mode {mode!r}")
    count = math.comb(n, L)
    if count > EXHAUSTIVE_BUDGET:
        raise ConfigurationError(
            f"exhaustive search over C({n}, {L}) = {count} submatrices exceeds the budget; use mode='successive'"
        )
    best = 0.0
    combos = itertools.combinations(range(n), L)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return best
        best = max(best, _batched_radius(a, block))


# -- export -------------------------------------------------------------------------


def write_spectrum_csv(summary: SpectralSummary, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["rank", "eigenvalue", "residual"])
        for t, lam in enumerate(summary.eigenvalues):
            res = "" if summary.residuals is None else repr(float(summary.residuals[t]))
            w.writerow([t + 1, repr(float(lam)), res])


def write_eigenvectors_csv(summary: SpectralSummary, path) -> None:
    if summary.eigenvectors is None:
        raise ConfigurationError("summary holds no eigenvectors")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["coordinate"] + [f"v{t + 1}" for t in range(summary.eigenvectors.shape[1])])
        for i, row in enumerate(summary.eigenvectors):
            w.writerow([i + 1] + [repr(float(x)) for x in row])
