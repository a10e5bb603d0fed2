"""Quick property suite run by ``heavyband verify``."""
from __future__ import annotations

import itertools
import math
import tempfile
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .._rng import generator
from ..ensemble import build_pattern, largest_entries, sample_matrix
from ..extremes import expected_count_above
from ..heavy_tail import TailLaw, b_n
from ..localization import best_tail
from ..matrix_io import read_binary, read_text, write_binary, write_text
from ..spectral import dense_eigh, lanczos_topk, semicircle_ks, semicircle_quantile
from ..truncation import bennett_bound, catalan
from .config import ExperimentConfig
from .studies import lemma5_counts, random_heavy_matrix, run_study
from .persist import records_equal


class Check(NamedTuple):
    name: str
    ok: bool
    detail: str


def _native_vs_lapack():
    rng = generator(11)
    worst = 0.0
    for n in (1, 2, 7, 40, 120):
        a = random_heavy_matrix(rng, n)
        x = dense_eigh(a, vectors=False, backend="native").eigenvalues
        y = np.linalg.eigvalsh(a)[::-1]
        worst = max(worst, float(np.max(np.abs(x - y)) / max(1.0, np.max(np.abs(y)))))
    return worst < 1e-10, f"max relative deviation {worst:.2e}"


def _lanczos_vs_dense():
    pat = build_pattern(400, 0.6, "cyclic_band")
    m = sample_matrix(pat, TailLaw(3.0), 5, 0)
    top = lanczos_topk(m, 5, which="both_ends", tol=1e-10, seed=1)
    full = dense_eigh(m, vectors=False, backend="lapack").eigenvalues
    ref = np.r_[full[:5], full[-5:]]
    err = float(np.max(np.abs(np.sort(top.eigenvalues) - np.sort(ref))))
    return err < 1e-8 * max(1.0, abs(full).max()) and top.converged, f"max deviation {err:.2e}"


def _semicircle_passthrough():
    n = 1000
    x = semicircle_quantile((np.arange(n) + 0.5) / n)
    ks = semicircle_ks(x, 1.0)
    return ks <= 1.0 / n, f"KS {ks:.2e}"


def _best_tail_bruteforce():
    rng = generator(12)
    for _ in range(50):
        n = int(rng.integers(1, 8))
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        for L in range(1, n + 1):
            brute = min(1.0 - sum(v[list(s)] ** 2) for s in itertools.combinations(range(n), L))
            if abs(best_tail(v, L).tail_mass - brute) > 1e-12:
                return False, f"mismatch at n={n}, L={L}"
    return True, "50 vectors"


def _catalan_dyck():
    for s in range(9):
        count = 0
        for steps in itertools.product((1, -1), repeat=2 * s):
            h = np.cumsum(steps)
            count += bool(h.size == 0 or (h.min() >= 0 and h[-1] == 0))
        if count != catalan(s):
            return False, f"s={s}: {count} paths vs {catalan(s)}"
    return True, "s = 0..8"


def _bennett_grid():
    rng = generator(13)
    for m, p, eta in ((100, 0.1, 0.5), (1000, 0.5, 0.2), (50, 0.3, 1.0)):
        draws = rng.binomial(m, p, size=20000) / m
        emp = float(np.mean(np.abs(draws - p) > eta * p))
        if emp > bennett_bound(m, p, eta):
            return False, f"({m}, {p}, {eta}): {emp} > bound"
    return True, "3 configurations, 2e4 trials"


def _intensity_quadrature():
    for alpha, t in ((0.7, 0.5), (2.0, 2.0), (5.0, 1.3)):
        q, _ = integrate.quad(lambda x: alpha * x ** (-alpha - 1), t, math.inf, epsabs=0, epsrel=1e-12)
        if abs(q - expected_count_above(alpha, t)) > 1e-10 * max(1.0, q):
            return False, f"alpha={alpha}, t={t}"
    return True, "3 cases"


def _b_n_quantile():
    law = TailLaw(1.5)
    for m in (10, 1000, 10**6):
        x = b_n(law, m)
        if abs(law.tail(x) * m - 1.0) > 1e-9:
            return False, f"M={m}"
    return True, "G(b_N) = 1/M"


def _lemma5_small():
    rng = generator(14)
    total = bad = 0
    for _ in range(10):
        c, b, _ = lemma5_counts(random_heavy_matrix(rng, int(rng.integers(2, 9))))
        total += c
        bad += b
    return bad == 0, f"{total} checks, {bad} violations"


def _io_round_trip():
    pat = build_pattern(30, 0.5, "band")
    m = sample_matrix(pat, TailLaw(1.2), 3, 4)
    with tempfile.TemporaryDirectory() as d:
        write_text(m, f"{d}/m.txt")
        write_binary(m, f"{d}/m.bin")
        a, b = read_text(f"{d}/m.txt"), read_binary(f"{d}/m.bin")
    same = np.array_equal(a.values, m.values) and np.array_equal(b.values, m.values)
    return bool(same), "text and binary"


def _largest_entries_sorted():
    m = sample_matrix(build_pattern(60, 1.0, "cyclic_band"), TailLaw(1.0), 9, 0)
    mods = [e.modulus for e in largest_entries(m, 20)]
    return all(x >= y for x, y in zip(mods, mods[1:])), "descending moduli"


def _determinism():
    cfg = ExperimentConfig(kind="subcritical", seed=21, replicas=6, n=80, alpha=1.5, top_k=2)
    a = run_study(cfg, workers=1).records
    b = run_study(cfg, workers=4).records
    return records_equal(a, b), "1 vs 4 workers"


CHECKS = (
    ("native QL matches LAPACK", _native_vs_lapack),
    ("Lanczos matches dense", _lanczos_vs_dense),
    ("semicircle pass-through", _semicircle_passthrough),
    ("best tail equals brute force", _best_tail_bruteforce),
    ("Catalan equals Dyck count", _catalan_dyck),
    ("Bennett bound holds", _bennett_grid),
    ("intensity quadrature", _intensity_quadrature),
    ("b_N is the 1/M quantile", _b_n_quantile),
    ("localized eigenvalue bound", _lemma5_small),
    ("matrix file round trip", _io_round_trip),
    ("ranked entries sorted", _largest_entries_sorted),
    ("replica determinism", _determinism),
)


def run_verify() -> list[Check]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail))
    return out
