import itertools
import math

import numpy as np
import pytest

from heavyband._rng import generator
from heavyband.ensemble import build_pattern, custom_pattern, matrix_from_entries, sample_matrix
from heavyband.errors import ConfigurationError, DomainError
from heavyband.heavy_tail import TailLaw
from heavyband.spectral import spectral_radius
from heavyband.truncation import (
    TruncationSpec,
    bennett_bound,
    catalan,
    chebyshev_tail,
    moment_bound_rhs,
    remainder_norm_bound,
    subcritical_cutoff_window,
    supercritical_cutoff_window,
    trace_power_moment,
    trace_powers,
    truncate_matrix,
)


def test_truncate_examples():
    m = sample_matrix(build_pattern(20, 1.0), TailLaw(3.0), 1, 0)
    hat, removed = truncate_matrix(m, 10.0)
    assert np.array_equal(hat.values, m.values) and not np.any(removed.values)
    m = matrix_from_entries(25, {(0, 1): 7.0})
    hat, removed = truncate_matrix(m, 0.5)  # cut-off 5
    assert not np.any(hat.values)
    assert removed.dense()[0, 1] == removed.dense()[1, 0] == 7.0


def test_truncate_partition():
    for seed in range(5):
        m = sample_matrix(build_pattern(80, 0.7), TailLaw(1.2), seed, 0)
        hat, removed = truncate_matrix(m, 0.3)
        assert np.all(hat.values * removed.values == 0)
        assert np.array_equal(hat.values + removed.values, m.values)
        assert np.all(np.abs(hat.values) <= 80**0.3)
    with pytest.raises(ConfigurationError):
        truncate_matrix(m, 0.0)


def test_remainder_norm_bound():
    m = matrix_from_entries(6, {(1, 4): -7.0})
    assert remainder_norm_bound(m) == 7.0 and spectral_radius(m) == pytest.approx(7.0)
    assert remainder_norm_bound(matrix_from_entries(6, {})) == 0.0
    for seed in range(10):
        m = sample_matrix(build_pattern(50, 1.0), TailLaw(0.9), seed, 0)
        full = m
        _, removed = truncate_matrix(m, 0.4)
        assert remainder_norm_bound(removed) >= spectral_radius(removed) - 1e-9
        assert remainder_norm_bound(full) == pytest.approx(np.abs(full.dense()).sum(axis=1).max())


def test_trace_powers_identities():
    a = generator(2).standard_normal((15, 15))
    a = a + a.T
    tp = trace_powers(a, [1, 2, 3])
    assert tp[1] == pytest.approx(np.sum(a * a), rel=1e-13)
    ev = np.linalg.eigvalsh(a)
    for s in (1, 2, 3):
        assert tp[s] == pytest.approx(np.sum(ev ** (2 * s)), rel=1e-10)
        assert tp[s] >= 0


def test_trace_moment_two_cycle():
    pat = custom_pattern(2, 1.0, [(0, 1)], validate=False)
    law = TailLaw(20.0)
    est = trace_power_moment(pat, law, 100.0, 2, 20000, 3)
    want = 2 * law.moment(4)
    assert abs(est.estimate - want) <= 4 * est.std_error
    zero = custom_pattern(3, 1.0, [(0, 1)], validate=False)
    est = trace_power_moment(zero, law, 1e-6, 2, 10, 3)  # everything cut
    assert est.estimate == 0.0


@pytest.mark.slow
def test_trace_moment_self_consistency():
    pat = build_pattern(64, 1.0)
    law = TailLaw(5.0, variance_normalized=True)
    a = trace_power_moment(pat, law, 0.1, 3, 10**4, 1)
    b = trace_power_moment(pat, law, 0.1, 3, 10**4, 2)
    assert not a.overflow_risk
    assert abs(a.estimate - b.estimate) <= 3 * math.hypot(a.std_error, b.std_error)


def test_trace_moment_refuses_large_n():
    with pytest.raises(ConfigurationError):
        trace_power_moment(build_pattern(600, 0.3), TailLaw(3.0), 0.1, 1, 2, 0)


def test_spec_window():
    spec = TruncationSpec(0.1, 0.5, 0.1, 3)
    assert spec.window_violations() == []
    assert not spec.s_in_range(64) and TruncationSpec(0.1, 0.5, 0.1, 1).s_in_range(64)
    bad = TruncationSpec(0.1, 0.4, 0.1).window_violations()
    assert any("mu/2" in b for b in bad)
    with pytest.raises(ConfigurationError):
        TruncationSpec(0.0, 0.5, 0.1)
    with pytest.raises(ConfigurationError):
        TruncationSpec(0.1, 0.5, 0.1, 0)


def test_moment_rhs_log_space():
    n = 64
    spec = TruncationSpec(0.1, 0.5, 0.1, 3)
    direct = n ** 1.2 * 3**-1.5 * (2 * n**0.5) ** 6
    got = moment_bound_rhs(n, spec, 1.0)
    assert got.value == pytest.approx(direct, rel=1e-12)
    # doubling s adds 2s log(2 N^gamma') - 1.5 log 2 to the log value
    g6 = moment_bound_rhs(n, spec.with_s(6), 1.0)
    assert g6.log_value - got.log_value == pytest.approx(6 * math.log(2 * n**0.5) - 1.5 * math.log(2), rel=1e-13)
    huge = moment_bound_rhs(10**6, spec.with_s(200), 1.0)
    assert huge.value == math.inf and math.isfinite(huge.log_value)


def test_moment_rhs_errors():
    with pytest.raises(ConfigurationError, match="gamma''"):
        moment_bound_rhs(64, TruncationSpec(0.2, 0.5, 0.1, 1), 1.0)
    with pytest.raises(DomainError):
        moment_bound_rhs(64, TruncationSpec(0.1, 0.5, 0.1, 1), 0.0)


def test_chebyshev_identity():
    n, spec, c = 128, TruncationSpec(0.1, 0.55, 0.15, 2), 0.3
    rhs = moment_bound_rhs(n, spec, c)
    for kappa in (0.5, 0.9, 1 - 1e-12):
        tail = chebyshev_tail(n, spec, kappa, c)
        assert tail.log_value == pytest.approx(rhs.log_value - 2 * spec.s * math.log(kappa * 2 * n**0.55), rel=1e-13)
    with pytest.raises(DomainError):
        chebyshev_tail(n, spec, 1.0, c)


def test_chebyshev_example_window():
    # gamma'' = 0.2 sits exactly on the boundary of the strict inequality, so no bound is defined
    spec = TruncationSpec(0.1, 0.55, 0.2, int(128**0.2))
    with pytest.raises(ConfigurationError):
        chebyshev_tail(128, spec, 0.9, 1.0)


def test_catalan_examples_and_dyck():
    assert catalan(0) == 1 and catalan(3) == 5
    for s in range(9):
        count = 0
        for steps in itertools.product((1, -1), repeat=2 * s):
            h = np.cumsum(steps)
            count += h.size == 0 or (h.min() >= 0 and h[-1] == 0)
        assert count == catalan(s)
    assert catalan(30) == 3814986502092304
    with pytest.raises(DomainError):
        catalan(-1)


def test_bennett_examples():
    assert bennett_bound(100, 0.1, 1.0) == pytest.approx(2 * math.exp(-10 * (2 * math.log(2) - 1)), rel=1e-14)
    assert bennett_bound(100, 0.1, 1.0) == pytest.approx(0.0421, abs=1e-4)  # exact 0.04201
    assert bennett_bound(100, 0.1, 1e-12) == pytest.approx(2.0)
    assert bennett_bound(200, 0.1, 1.0) < bennett_bound(100, 0.1, 1.0)
    assert bennett_bound(100, 0.1, 2.0) < bennett_bound(100, 0.1, 1.0)
    with pytest.raises(DomainError):
        bennett_bound(0, 0.5, 0.1)


def test_bennett_monte_carlo():
    rng = generator(4)
    m, p, eta = 1000, 0.5, 0.2
    draws = rng.binomial(m, p, size=10**5) / m
    emp = np.mean(np.abs(draws - p) > eta * p)
    assert emp <= bennett_bound(m, p, eta)


def test_cutoff_windows():
    lo, hi = subcritical_cutoff_window(1.0, 1.5)
    assert lo < hi
    lo, hi = supercritical_cutoff_window(1.0, 6.0)
    assert lo == pytest.approx(0.1) and hi == 0.25
