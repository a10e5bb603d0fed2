"""Config-driven Monte Carlo studies, persistence and the property suite."""
from .config import STUDY_KINDS, ExperimentConfig, check_assertions, load_config, parse_config_text
from .persist import load, merge_replicas, persist, records_equal, write_replica
from .studies import (
    STUDIES,
    StudySummary,
    run_moment_study,
    run_perturbation_study,
    run_poisson_study,
    run_semicircle_study,
    run_study,
    run_subcritical_study,
    run_supercritical_study,
    run_tailsum_study,
)
from .verify import run_verify
