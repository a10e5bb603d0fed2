import itertools
import math

import numpy as np
import pytest

from heavyband._rng import generator
from heavyband.ensemble import build_pattern, matrix_from_entries, sample_matrix
from heavyband.errors import ConfigurationError, DomainError
from heavyband.heavy_tail import TailLaw
from heavyband.localization import (
    best_tail,
    best_tail_profile,
    delocalization_scan,
    localized_c_window,
    localized_eigenvalue_bound,
    participation_ratio,
    successive_best_tail,
    two_coord_overlap,
)
from heavyband.spectral import dense_eigh, lanczos_topk, submatrix_rho

R2 = 1 / math.sqrt(2)


def _e(n, *idx, signs=None):
    v = np.zeros(n)
    for t, i in enumerate(idx):
        v[i] = 1.0 if signs is None else signs[t]
    return v / np.linalg.norm(v)


def test_best_tail_examples():
    assert best_tail(_e(5, 0), 1).tail_mass == 0.0
    assert best_tail(np.full(4, 0.5), 1).tail_mass == pytest.approx(0.75)
    v = _e(6, 0, 1)
    assert best_tail(v, 1).tail_mass == pytest.approx(0.5)
    assert best_tail(v, 2).tail_mass == pytest.approx(0.0, abs=1e-16)
    assert list(best_tail(np.full(4, 0.5), 2).support) == [0, 1]


def test_best_tail_rejects_non_unit():
    with pytest.raises(DomainError):
        best_tail(np.ones(3), 1)
    with pytest.raises(DomainError):
        best_tail(_e(3, 0), 4)


def test_best_tail_optimal_against_exhaustive():
    rng = generator(1)
    for _ in range(30):
        n = int(rng.integers(2, 11))
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        w = v**2
        prof = best_tail_profile(v)
        for L in range(1, n + 1):
            brute = min(1 - w[list(s)].sum() for s in itertools.combinations(range(n), L))
            assert best_tail(v, L).tail_mass == pytest.approx(brute, abs=1e-14)
            assert prof[L - 1] == pytest.approx(brute, abs=1e-14)
        assert np.all(np.diff(prof) <= 1e-15) and prof[-1] == 0.0


def test_successive_examples():
    n = 7
    v = _e(n, n - 1, 0)
    t = successive_best_tail(v, 2)
    assert t.tail_mass == pytest.approx(0.0, abs=1e-15) and t.window_start == n - 1
    assert successive_best_tail(_e(5, 0, 2), 2).tail_mass == pytest.approx(0.5)


def test_successive_against_window_oracle():
    rng = generator(2)
    for _ in range(30):
        n = int(rng.integers(2, 15))
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        for L in range(1, n + 1):
            brute = min(1 - sum(v[(s + j) % n] ** 2 for j in range(L)) for s in range(n))
            got = successive_best_tail(v, L).tail_mass
            assert got == pytest.approx(brute, abs=1e-13)
            assert got >= best_tail(v, L).tail_mass - 1e-14


def test_participation_ratio():
    assert participation_ratio(np.full(9, 1 / 3)) == pytest.approx(9.0)
    assert participation_ratio(_e(9, 4)) == 1.0


def test_two_coord_overlap():
    assert two_coord_overlap(_e(4, 0, 1), 0, 1, 1.0) == pytest.approx(1.0)
    assert two_coord_overlap(_e(4, 0, 1, signs=(1, -1)), 0, 1, 1.0) == pytest.approx(0.0)
    v = _e(4, 0, 1, signs=(1, -1))
    assert two_coord_overlap(v, 0, 1, -1.0) == two_coord_overlap(-v, 0, 1, -1.0)
    with pytest.raises(DomainError):
        two_coord_overlap(v, 2, 2, 1.0)


def test_overlap_planted_negative_entry():
    s = dense_eigh(matrix_from_entries(5, {(0, 1): -5.0}))
    assert s.eigenvalues[0] == pytest.approx(5.0)
    assert two_coord_overlap(s.eigenvectors[:, 0], 0, 1, -1.0) == pytest.approx(1.0, abs=1e-10)


def test_localized_bound_examples():
    assert localized_eigenvalue_bound(2.5, 4.0, 0.0) == 2.5
    a = np.diag([3.0, 1.0])
    rho1 = submatrix_rho(a, 1, "exhaustive")
    assert abs(3.0) <= localized_eigenvalue_bound(rho1, 3.0, best_tail(_e(2, 0), 1).tail_mass)
    with pytest.raises(DomainError):
        localized_eigenvalue_bound(1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        localized_eigenvalue_bound(3.0, 2.0, 0.1)


def test_localized_bound_exhaustive_n12():
    rng = generator(3)
    for trial in range(4):
        a = rng.standard_t(1.5, size=(12, 12))
        a = (a + a.T) / 2
        s = dense_eigh(a)
        rho = s.spectral_radius
        rhos = [submatrix_rho(a, L, "exhaustive") for L in range(1, 13)]
        for t, lam in enumerate(s.eigenvalues):
            v = s.eigenvectors[:, t]
            for L in range(1, 13):
                eta = best_tail(v, L).tail_mass
                assert abs(lam) - localized_eigenvalue_bound(min(rhos[L - 1], rho), rho, eta) <= 1e-9


def test_c_window():
    assert localized_c_window(1.0, 6.0) == pytest.approx(0.32)


def test_scan_negative_control():
    n = 300
    m = sample_matrix(build_pattern(n, 1.0), TailLaw(6.0, variance_normalized=True), 5, 0)
    vals = m.values.copy()
    hit = np.flatnonzero((m.rows == 0) & (m.cols == 150))
    vals[hit] = 1e3
    planted = m.with_values(vals)
    s = lanczos_topk(planted, 3, which="both_ends", tol=1e-10)
    rep = delocalization_scan(s, planted, 0.25, 0.4)
    assert rep.L == 4 and rep.localized_variant
    assert rep.flagged and rep.pairs[0].flagged_localized
    assert not rep.pairs[0].flagged_successive
    clean = delocalization_scan(lanczos_topk(m, 3, which="both_ends", tol=1e-10), m, 0.25, 0.4)
    assert not clean.flagged


def test_scan_configuration_errors():
    m = sample_matrix(build_pattern(50, 0.5), TailLaw(6.0, variance_normalized=True), 1, 0)
    s = dense_eigh(m)
    with pytest.raises(ConfigurationError):
        delocalization_scan(s, m, 0.6, 0.4)
    with pytest.raises(ConfigurationError):
        delocalization_scan(s, m, 0.1, 0.5)
    with pytest.raises(ConfigurationError):
        delocalization_scan(dense_eigh(m, vectors=False), m, 0.1, 0.4)
    rep = delocalization_scan(s, m, 0.4, 0.4)
    assert rep.successive_variant and not rep.localized_variant


def test_report_csv(tmp_path):
    m = sample_matrix(build_pattern(60, 1.0), TailLaw(6.0, variance_normalized=True), 2, 0)
    rep = delocalization_scan(lanczos_topk(m, 2, which="both_ends"), m, 0.25, 0.4)
    rep.write_csv(tmp_path / "loc.csv")
    lines = (tmp_path / "loc.csv").read_text().splitlines()
    assert lines[0] == "k,lambda,L,best_tail,successive_tail,PR,overlap"
    assert len(lines) == 5
    assert "only the computed" in rep.note
