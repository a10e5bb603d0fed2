import math

import numpy as np
import pytest
from scipy import integrate

from heavyband._rng import generator
from heavyband.errors import DomainError, PreconditionError
from heavyband.extremes import (
    PointProcessSample,
    expected_count_above,
    frechet_cdf,
    frechet_ks,
    poisson_count_test,
    transformed_gaps,
    transformed_spacings_test,
)


def _poisson_process(rng, alpha, n_points, replica=None):
    # unit-rate arrivals mapped through u -> u^(-1/alpha)
    u = np.cumsum(rng.exponential(size=n_points))
    return PointProcessSample(u ** (-1.0 / alpha), alpha, replica)


def test_expected_count_examples():
    assert expected_count_above(2.0, 2.0) == 0.25
    for a in (0.3, 1.0, 7.0):
        assert expected_count_above(a, 1.0) == 1.0
    assert expected_count_above(1.0, math.inf) == 0.0
    assert expected_count_above(1.0, 1e300) < 1e-299
    with pytest.raises(DomainError):
        expected_count_above(1.0, 0.0)


def test_expected_count_quadrature():
    for alpha, t in ((0.5, 0.3), (1.7, 1.0), (4.0, 2.5)):
        q = integrate.quad(lambda x: alpha * x ** (-alpha - 1), t, math.inf, epsabs=0, epsrel=1e-13)[0]
        assert expected_count_above(alpha, t) == pytest.approx(q, rel=1e-10)


def test_sample_validation():
    with pytest.raises(DomainError):
        PointProcessSample(np.array([1.0, 2.0]), 1.0)
    with pytest.raises(DomainError):
        PointProcessSample(np.array([1.0, -2.0]), 1.0)
    with pytest.raises(DomainError):
        PointProcessSample(np.array([1.0]), 0.0)
    s = PointProcessSample.from_values([-3.0, 4.0, 2.0, 0.0], 2.0, 1.0)
    assert list(s.points) == [2.0, 1.0]


def test_poisson_counts_synthetic():
    rng = generator(1)
    samples = [_poisson_process(rng, 1.5, 40, r) for r in range(500)]
    res = poisson_count_test(samples, 1.0)
    assert res.mean_count == pytest.approx(1.0, abs=0.15)
    assert res.poisson_dispersion == pytest.approx(1.0, abs=0.15)
    assert not res.degenerate
    assert res.observed.sum() == 500 and res.expected.sum() == pytest.approx(500)
    # chi-square with 3 degrees of freedom rarely exceeds 16
    assert res.pvalue_proxy < 16.3


def test_poisson_counts_degenerate_and_errors():
    rng = generator(2)
    samples = [_poisson_process(rng, 1.0, 10) for _ in range(40)]
    res = poisson_count_test(samples, 1e12)
    assert res.degenerate and res.mean_count == 0 and math.isnan(res.poisson_dispersion)
    with pytest.raises(PreconditionError):
        poisson_count_test(samples[:29], 1.0)


def test_transformed_gaps():
    s = PointProcessSample(np.array([4.0, 2.0, 1.0]), 2.0)
    assert np.allclose(transformed_gaps(s, 3), [0.25 - 0.0625, 0.75])
    with pytest.raises(DomainError):
        transformed_gaps(s, 1)
    with pytest.raises(PreconditionError):
        transformed_gaps(s, 4)


def test_spacings_synthetic():
    rng = generator(3)
    samples = [_poisson_process(rng, 2.0, 6) for _ in range(2500)]  # 4 gaps each, 10^4 total
    assert transformed_spacings_test(samples, 5) <= 0.05
    assert transformed_spacings_test(samples[0], 5) >= 0


def test_spacings_reject_wrong_alpha():
    rng = generator(4)
    samples = [PointProcessSample(_poisson_process(rng, 2.0, 6).points, 1.0) for _ in range(2500)]
    assert transformed_spacings_test(samples, 5) > 0.1


def test_frechet():
    rng = generator(5)
    alpha = 1.5
    x = (-np.log(rng.uniform(size=5000))) ** (-1 / alpha)  # inverse CDF
    assert frechet_ks(x, alpha) < 0.03
    assert frechet_cdf([0.0, -1.0], alpha).tolist() == [0.0, 0.0]
    assert frechet_cdf(1.0, alpha) == pytest.approx(math.exp(-1))
    with pytest.raises(PreconditionError):
        frechet_ks([], alpha)


@pytest.mark.slow
def test_spacings_band_instance():
    from heavyband.experiments import ExperimentConfig, run_study

    cfg = ExperimentConfig(kind="poisson", seed=3, replicas=500, n=5000, mu=0.5, alpha=2.0, K=5)
    agg = run_study(cfg).aggregate
    assert agg["eig_spacing_ks"] <= 0.1
    assert agg["entry_spacing_ks"] <= 0.1
