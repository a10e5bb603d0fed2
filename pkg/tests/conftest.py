import pytest

from heavyband.experiments import ExperimentConfig

# one quick configuration per study kind
SMALL = {
    "subcritical": dict(n=60, alpha=1.5, top_k=2, replicas=4),
    "poisson": dict(n=60, alpha=1.0, replicas=4),
    "supercritical": dict(n_grid=(60, 80), alpha=6.0, variance_normalized=True, replicas=2),
    "semicircle": dict(n_grid=(60,), alpha=5.0, variance_normalized=True, replicas=2),
    "moments": dict(n_grid=(16, 32), s_grid=(1, 2), alpha=5.0, variance_normalized=True, replicas=5),
    "tailsums": dict(n_grid=(100, 1000), alpha=3.0, high=1 / 3, epsilon=0.1, replicas=5),
    "perturbation": dict(replicas=6, max_n=12, small_trials=3, small_max_n=6),
}


def small_config(kind, seed=11, **kw):
    return ExperimentConfig(kind=kind, seed=seed, **{**SMALL[kind], **kw})


@pytest.fixture
def small():
    return small_config


# acceptance verdicts, repeated at the end of the run so they survive output capture
VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
