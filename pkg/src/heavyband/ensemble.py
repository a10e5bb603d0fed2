"""Sparsity patterns and sampled symmetric matrices.

Only the upper triangle (diagonal included) is stored, as coordinate arrays
sorted by ``(i, j)``; indices are 0-based in memory and 1-based in files.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy import sparse

from ._rng import generator
from .errors import BoundsError, ConfigurationError, ValidationError
from .heavy_tail import TailLaw, b_n

PATTERN_KINDS = ("band", "cyclic_band", "custom_mask")
DENSE_LIMIT = 4096


def half_width(n: int, mu: float) -> int:
    """``floor(N^mu / 2)``, capped where the band already covers every index."""
    w = int(math.floor(n**mu / 2.0 + 1e-9))
    return min(w, n // 2)


@dataclass(eq=False)
class BandPattern:
    """Set ``B(N)`` of structurally non-zero positions.

    ``half_width`` is ``W``; ``a_n`` is the realized typical row count divided
    by ``N^mu``.  For custom masks ``mask_upper`` lists the ``(i, j)``, ``i <= j``,
    positions.
    """

    n: int
    mu: float
    kind: str
    half_width: int = 0
    a_n: float = 1.0
    mask_upper: tuple | None = field(default=None, repr=False)

    @cached_property
    def upper(self) -> tuple[np.ndarray, np.ndarray]:
        """Row and column indices of the upper triangle of ``B(N)``, lexicographic."""
        n, w = self.n, self.half_width
        if self.kind == "custom_mask":
            pairs = np.array(sorted(self.mask_upper), dtype=np.int64).reshape(-1, 2)
            return pairs[:, 0].copy(), pairs[:, 1].copy()
        rows, cols = [], []
        for i in range(n):
            if self.kind == "band":
                j = np.arange(i, min(n, i + w + 1))
            else:
                d = np.arange(0, n - i)
                j = i + d[np.minimum(d, n - d) <= w]
            rows.append(np.full(j.size, i, dtype=np.int64))
            cols.append(j.astype(np.int64))
        return np.concatenate(rows), np.concatenate(cols)

    @property
    def independent_entry_count(self) -> int:
        return int(self.upper[0].size)

    @cached_property
    def row_counts(self) -> np.ndarray:
        r, c = self.upper
        counts = np.bincount(r, minlength=self.n) + np.bincount(c, minlength=self.n)
        counts -= np.bincount(r[r == c], minlength=self.n)
        return counts

    @property
    def d_n(self) -> float:
        return self.a_n * self.n**self.mu

    def contains(self, i: int, j: int) -> bool:
        i, j = min(i, j), max(i, j)
        if self.kind == "band":
            return j - i <= self.half_width
        if self.kind == "cyclic_band":
            return min(j - i, self.n - (j - i)) <= self.half_width
        return (i, j) in self._mask_set

    @cached_property
    def _mask_set(self):
        return set(map(tuple, self.mask_upper))

    def to_dict(self) -> dict:
        d = {"n": self.n, "mu": self.mu, "kind": self.kind}
        if self.kind == "custom_mask":
            d["mask_upper"] = [list(p) for p in sorted(self.mask_upper)]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BandPattern":
        if d["kind"] == "custom_mask":
            return custom_pattern(d["n"], d["mu"], [tuple(p) for p in d["mask_upper"]], validate=False)
        return build_pattern(d["n"], d["mu"], d["kind"])


def build_pattern(n: int, mu: float, kind: str = "cyclic_band") -> BandPattern:
    """Band (``|i-j| <= W``) or cyclic band (``min(|i-j|, N-|i-j|) <= W``) pattern."""
    if n < 2:
        raise ConfigurationError("n must be at least 2")
    if not 0 < mu <= 1:
        raise ConfigurationError(f"mu must lie in (0, 1], got {mu}")
    if kind not in ("band", "cyclic_band"):
        raise ConfigurationError(f"use custom_pattern for kind {kind!r}")
    w = half_width(n, mu)
    typical = min(2 * w + 1, n)
    return BandPattern(n=n, mu=mu, kind=kind, half_width=w, a_n=typical / n**mu)


def custom_pattern(n: int, mu: float, pairs, validate: bool = True) -> BandPattern:
    """Pattern from explicit positions; either triangle may be given.

    With ``validate`` the row counts must equal a common value on all but
    ``N / log N`` rows and never exceed it.
    """
    upper = set()
    for i, j in pairs:
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"position ({i}, {j}) outside a {n}x{n} matrix")
        upper.add((min(i, j), max(i, j)))
    pat = BandPattern(n=n, mu=mu, kind="custom_mask", mask_upper=tuple(sorted(upper)))
    counts = pat.row_counts
    vals, freq = np.unique(counts, return_counts=True)
    # most frequent count, larger count on ties
    typical = int(vals[np.lexsort((vals, freq))][-1])
    pat.a_n = typical / n**mu
    if validate:
        over = int(np.sum(counts > typical))
        off = int(np.sum(counts != typical))
        allowed = n / math.log(n) if n > 2 else 1
        if over or off > allowed:
            raise ValidationError(
                f"custom mask fails the row density check: {off} rows deviate from the typical "
                f"count {typical} ({over} exceed it), at most {int(allowed)} allowed"
            )
    return pat


@dataclass(eq=False)
class SampledMatrix:
    """Symmetric matrix supported on ``pattern``.

    ``values`` is aligned with ``pattern.upper``.  Instances are treated as
    immutable; ``dense()`` caches its result.
    """

    pattern: BandPattern
    values: np.ndarray
    law: TailLaw | None = None
    seed: int | None = None
    replica_index: int | None = None

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def rows(self) -> np.ndarray:
        return self.pattern.upper[0]

    @property
    def cols(self) -> np.ndarray:
        return self.pattern.upper[1]

    def dense(self, limit: int = DENSE_LIMIT) -> np.ndarray:
        if self.n > limit:
            raise ConfigurationError(f"dimension {self.n} exceeds the dense limit {limit}")
        cached = self.__dict__.get("_dense")
        if cached is None:
            a = np.zeros((self.n, self.n))
            a[self.rows, self.cols] = self.values
            a[self.cols, self.rows] = self.values
            a.setflags(write=False)
            self.__dict__["_dense"] = cached = a
        return cached

    def csr(self) -> sparse.csr_matrix:
        r, c, v = self.rows, self.cols, self.values
        off = r != c
        rr = np.concatenate([r, c[off]])
        cc = np.concatenate([c, r[off]])
        vv = np.concatenate([v, v[off]])
        return sparse.csr_matrix((vv, (rr, cc)), shape=(self.n, self.n))

    def operator(self):
        """Matrix usable with ``@``: dense below the dense limit, CSR above."""
        if self.n <= DENSE_LIMIT:
            return self.dense()
        return self.csr()

    def with_values(self, values) -> "SampledMatrix":
        return SampledMatrix(self.pattern, np.asarray(values, dtype=float), self.law, self.seed, self.replica_index)


def sample_matrix(pattern: BandPattern, law: TailLaw, seed: int, replica_index: int = 0, stream=()) -> SampledMatrix:
    """Independent draws on the upper triangle of ``B(N)``, deterministic in ``(seed, stream, replica_index)``."""
    rng = generator(seed, *stream, replica_index)
    values = law.sample(rng, pattern.independent_entry_count)
    return SampledMatrix(pattern, values, law, int(seed), int(replica_index))


def matrix_from_entries(n: int, entries: dict, mu: float = 1.0) -> SampledMatrix:
    """Matrix with the given ``{(i, j): value}`` entries (either triangle) and nothing else."""
    sym = {}
    for (i, j), v in entries.items():
        sym[(min(i, j), max(i, j))] = float(v)
    pat = custom_pattern(n, mu, sym.keys(), validate=False)
    r, c = pat.upper
    vals = np.array([sym[(int(i), int(j))] for i, j in zip(r, c)], dtype=float)
    return SampledMatrix(pat, vals)


def matrix_from_dense(a, mu: float = 1.0, atol: float = 0.0) -> SampledMatrix:
    """Wrap a symmetric array, keeping every upper-triangle entry as a pattern position."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=atol):
        raise ValidationError("matrix is not symmetric")
    n = a.shape[0]
    r, c = np.triu_indices(n)
    pat = BandPattern(n=n, mu=mu, kind="custom_mask", mask_upper=tuple(zip(r.tolist(), c.tolist())), a_n=n / n**mu)
    return SampledMatrix(pat, a[r, c].copy())


def as_dense(m) -> np.ndarray:
    if isinstance(m, SampledMatrix):
        return m.dense()
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("matrix must be square")
    return a


class RankedEntry(NamedTuple):
    i: int
    j: int
    value: float
    modulus: float
    sign: float


def largest_entries(m, k: int) -> list[RankedEntry]:
    """Top ``k`` upper-triangle entries by modulus; ties in ``(i, j)`` order."""
    if isinstance(m, SampledMatrix):
        r, c, v = m.rows, m.cols, m.values
    else:
        a = as_dense(m)
        r, c = np.triu_indices(a.shape[0])
        v = a[r, c]
    if k > v.size:
        raise BoundsError(f"requested {k} entries but the pattern has {v.size}")
    mod = np.abs(v)
    if k < v.size:
        # partition first, then resolve the order (and ties at the cut) exactly
        kth = np.partition(mod, v.size - k)[v.size - k]
        cand = np.flatnonzero(mod >= kth)
    else:
        cand = np.arange(v.size)
    # coordinates are already lexicographic, so index order is the tie-break
    order = cand[np.lexsort((cand, -mod[cand]))][:k]
    return [
        RankedEntry(int(r[t]), int(c[t]), float(v[t]), float(mod[t]), 1.0 if v[t] >= 0 else -1.0)
        for t in order
    ]


def normalization(m: SampledMatrix) -> float:
    """``b_N`` for the law of ``m`` and the number of independent entries in its pattern."""
    if m.law is None:
        raise ConfigurationError("matrix carries no entry law")
    return b_n(m.law, m.pattern.independent_entry_count)


class RowTailSum(NamedTuple):
    per_row: np.ndarray
    max: float


def row_tail_sum(m, threshold: float) -> RowTailSum:
    """``sum_{j : |a_ij| > threshold} |a_ij|`` for every row."""
    if threshold < 0:
        raise ConfigurationError("threshold must be non-negative")
    if isinstance(m, SampledMatrix):
        r, c, v = m.rows, m.cols, np.abs(m.values)
        n = m.n
    else:
        a = as_dense(m)
        n = a.shape[0]
        r, c = np.triu_indices(n)
        v = np.abs(a[r, c])
    keep = v > threshold
    r, c, v = r[keep], c[keep], v[keep]
    per_row = np.bincount(r, weights=v, minlength=n) + np.bincount(c[r != c], weights=v[r != c], minlength=n)
    return RowTailSum(per_row, float(per_row.max()) if n else 0.0)


class Claim31Diagnostics(NamedTuple):
    two_large_per_row: bool
    large_diagonal: bool
    thresholds: tuple[float, float]
    b_n: float


def claim31_exponents(mu: float, eta: float) -> tuple[float, float]:
    """Exponents of ``b_N`` above which two entries per row, resp. one diagonal entry, are unlikely."""
    return (1.0 + 2.0 * mu) / (2.0 * (1.0 + mu)) + eta, 1.0 / (1.0 + mu) + eta


def claim31_diagnostics(m: SampledMatrix, eta: float) -> Claim31Diagnostics:
    if eta <= 0:
        raise ConfigurationError("eta must be positive")
    bn = normalization(m)
    e_row, e_diag = claim31_exponents(m.pattern.mu, eta)
    t_row, t_diag = bn**e_row, bn**e_diag
    r, c, v = m.rows, m.cols, np.abs(m.values)
    big = v > t_row
    per_row = np.bincount(r[big], minlength=m.n) + np.bincount(c[big & (r != c)], minlength=m.n)
    diag = r == c
    return Claim31Diagnostics(
        bool(np.any(per_row >= 2)),
        bool(np.any(v[diag] > t_diag)),
        (t_row, t_diag),
        bn,
    )
