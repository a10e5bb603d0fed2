import json
import math
from concurrent.futures import ThreadPoolExecutor

import pytest
from conftest import SMALL, small_config

from heavyband.cli import main
from heavyband.ensemble import custom_pattern
from heavyband.errors import ConfigurationError, IntegrityError, SchemaVersionError
from heavyband.experiments import ExperimentConfig, run_study
from heavyband.experiments.config import check_assertions, parse_assertion, parse_config_text
from heavyband.experiments.persist import (
    load,
    merge_replicas,
    persist,
    records_equal,
    records_from_csv,
    records_to_csv,
    write_replica,
)
from heavyband.experiments.studies import STUDIES, run_replicas, study_tasks, summarize
from heavyband.experiments.verify import run_verify
from heavyband.heavy_tail import TailLaw
from heavyband.truncation import trace_power_moment

INI = """
[study]
kind = subcritical
seed = 7
replicas = 3   # inline comment
[matrix]
n = 80
mu = 1
[law]
alpha = 1.5
symmetrized = yes
[spectral]
top_k = 2
[assert]
ratio_median_1 = [0.5, 2]
failures = <= 0
"""


# -- configuration ---------------------------------------------------------------------------


def test_parse_config_text():
    cfg = parse_config_text(INI)
    assert (cfg.kind, cfg.seed, cfg.replicas, cfg.n, cfg.top_k) == ("subcritical", 7, 3, 80, 2)
    assert cfg.symmetrized is True and cfg.alpha == 1.5
    assert cfg.assertions == {"ratio_median_1": "[0.5, 2]", "failures": "<= 0"}
    assert parse_config_text(INI, seed=9, replicas=None).seed == 9
    cfg.validate()


def test_parse_config_lists_and_none():
    cfg = parse_config_text("[study]\nkind=moments\n[matrix]\nn_grid = 32, 64 128\n[tailsums]\nlow = none\n")
    assert cfg.n_grid == (32, 64, 128) and cfg.low is None and cfg.grid == (32, 64, 128)


@pytest.mark.parametrize(
    "text",
    [
        "[study]\nseed=1\n",
        "[bogus]\nx=1\n[study]\nkind=subcritical\n",
        "[study]\nkind=subcritical\ncolour=red\n",
        "[study]\nkind=subcritical\nseed=1.5\n",
        "[study]\nkind=subcritical\n[law]\nsymmetrized=maybe\n",
        "not an ini file",
    ],
)
def test_parse_config_errors(text):
    with pytest.raises(ConfigurationError):
        parse_config_text(text)


def test_config_dict_round_trip():
    cfg = small_config("moments")
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


@pytest.mark.parametrize(
    "kind, kw",
    [
        ("subcritical", dict(alpha=4.5)),  # above the critical exponent
        ("subcritical", dict(alpha=2.5, symmetrized=False)),
        ("poisson", dict(alpha=5.0)),
        ("supercritical", dict(alpha=3.0, variance_normalized=True)),
        ("supercritical", dict(alpha=6.0)),  # not variance one
        ("semicircle", dict(alpha=5.0)),
        ("semicircle", dict(alpha=5.0, variance_normalized=True, n=5000)),
        ("moments", dict(alpha=5.0, variance_normalized=True, gamma_double_prime=0.25)),
        ("moments", dict(alpha=5.0, variance_normalized=True, n=1024)),
        ("tailsums", dict(alpha=2.0, low=0.45, high=0.55, epsilon=0.1)),
        ("nonsense", dict()),
    ],
)
def test_regime_guards(kind, kw):
    with pytest.raises(ConfigurationError):
        ExperimentConfig(kind=kind, seed=1, **kw).validate()


def test_seed_and_replicas_mandatory():
    with pytest.raises(ConfigurationError, match="seed"):
        ExperimentConfig(kind="perturbation").validate()
    with pytest.raises(ConfigurationError):
        ExperimentConfig(kind="perturbation", seed=1, replicas=0).validate()


def test_guard_runs_before_sampling():
    with pytest.raises(ConfigurationError):
        run_study(ExperimentConfig(kind="subcritical", seed=1, alpha=5.0, n=10**9))


def test_assertions():
    assert parse_assertion("[1, 2]")(1.5) and not parse_assertion("[1, 2]")(2.5)
    assert parse_assertion(">= 0.8")(0.8) and not parse_assertion("< 0.8")(0.8)
    with pytest.raises(ConfigurationError):
        parse_assertion("about 3")
    res = check_assertions({"a": "<= 1", "b": ">= 0", "c": "== 1", "d": "> 0"}, {"a": 0.5, "b": math.nan, "c": True})
    assert res == {"a": True, "b": False, "c": True, "d": False}


# -- studies ---------------------------------------------------------------------------------


@pytest.mark.parametrize("kind", list(SMALL))
def test_every_kind_runs_and_echoes_config(kind):
    s = run_study(small_config(kind))
    assert s.config.kind == kind and s.records
    assert set(s.records[0]) == set(STUDIES[kind].columns)
    # aggregates are recomputable from the stored records
    again = summarize(s.config, s.records)
    assert json.dumps(again.aggregate, sort_keys=True, default=str) == json.dumps(s.aggregate, sort_keys=True, default=str)


def test_subcritical_rejected_config_example():
    with pytest.raises(ConfigurationError):
        run_study(ExperimentConfig(kind="subcritical", seed=1, alpha=6.0))


def test_moment_two_cycle_variance_one():
    pat = custom_pattern(2, 1.0, [(0, 1)], validate=False)
    est = trace_power_moment(pat, TailLaw(5.0, variance_normalized=True), 1e6, 1, 20000, 5)
    # Tr A^2 = 2 a^2 with E a^2 = 1
    assert abs(est.estimate - 2.0) <= 4 * est.std_error


def test_tailsum_single_n_grid():
    s = run_study(small_config("tailsums", n_grid=(500,)))
    assert len(s.aggregate["decay_table"]) == 1


def test_assertion_outcomes_in_summary():
    cfg = small_config("perturbation", assertions={"total_violations": "== 0", "replicas": "> 100"})
    s = run_study(cfg)
    assert s.assertions == {"total_violations": True, "replicas": False} and not s.passed


@pytest.mark.parametrize("kind", list(SMALL))
def test_determinism_across_workers(kind):
    cfg = small_config(kind)
    assert records_equal(run_study(cfg, workers=1).records, run_study(cfg, workers=3).records)


def test_different_seeds_differ():
    a = run_study(small_config("subcritical", seed=1)).records
    b = run_study(small_config("subcritical", seed=2)).records
    assert not records_equal(a, b)


# -- persistence -----------------------------------------------------------------------------


@pytest.mark.parametrize("kind", list(SMALL))
def test_persist_round_trip(tmp_path, kind):
    s = run_study(small_config(kind))
    persist(s, tmp_path)
    back = load(tmp_path)
    assert records_equal(back.records, s.records)
    assert back.config == s.config and back.columns == s.columns
    assert back.schema_version == 1
    hist = tmp_path / f"{STUDIES[kind].histogram}.dat"
    assert hist.exists()
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert doc["schema_version"] == 1 and doc["config"]["kind"] == kind


def test_exact_float_encoding():
    cols = {"x": "float", "xs": "floats", "i": "int", "b": "bool", "s": "str"}
    recs = [
        {"x": 0.1 + 0.2, "xs": [1e-310, -0.0, math.inf], "i": -3, "b": True, "s": "a,b"},
        {"x": math.nan, "xs": [], "i": 0, "b": False, "s": ""},
    ]
    back = records_from_csv(records_to_csv(recs, cols), cols)
    assert records_equal(back, recs)
    assert math.copysign(1, back[0]["xs"][1]) == -1


def test_records_equal_is_strict():
    assert not records_equal([{"x": 0.0}], [{"x": -0.0}])
    assert records_equal([{"x": math.nan}], [{"x": math.nan}])
    assert not records_equal([{"x": 1.0}], [{"x": 1.0 + 1e-16 * 2}])
    assert not records_equal([{"x": [1.0]}], [{"x": [1.0, 2.0]}])


def test_tampered_records(tmp_path):
    persist(run_study(small_config("perturbation")), tmp_path)
    p = tmp_path / "records.csv"
    p.write_text(p.read_text().replace("0", "1", 1))
    with pytest.raises(IntegrityError):
        load(tmp_path)


def test_schema_mismatch_and_corrupt_summary(tmp_path):
    persist(run_study(small_config("perturbation")), tmp_path)
    p = tmp_path / "summary.json"
    doc = json.loads(p.read_text())
    doc["schema_version"] = 99
    p.write_text(json.dumps(doc))
    with pytest.raises(SchemaVersionError):
        load(tmp_path)
    p.write_text("{ truncated")
    with pytest.raises(IntegrityError):
        load(tmp_path)


def test_concurrent_replica_files_merge(tmp_path):
    cfg = small_config("subcritical", replicas=8)
    serial = run_study(cfg, workers=1)
    cols = STUDIES[cfg.kind].columns
    tasks = study_tasks(cfg)

    def one(t):
        rec = run_replicas(cfg, [t], workers=1)[0]
        write_replica(tmp_path, t, rec, cols)

    with ThreadPoolExecutor(4) as pool:
        list(pool.map(one, reversed(tasks)))
    merged = merge_replicas(tmp_path, cfg)
    assert records_equal(merged.records, serial.records)
    assert json.dumps(merged.aggregate, default=str) == json.dumps(serial.aggregate, default=str)


# -- command line ----------------------------------------------------------------------------


def test_cli_sample_spectrum_localize(tmp_path, capsys):
    txt = tmp_path / "m.txt"
    assert main(["sample", "--n", "80", "--mu", "0.5", "--alpha", "1.5", "--seed", "3", "--out", str(txt)]) == 0
    binary = tmp_path / "m.bin"
    assert main(["sample", "--n", "40", "--seed", "3", "--replicas", "2", "--out", str(binary)]) == 0
    assert (tmp_path / "m_0000.bin").exists() and (tmp_path / "m_0001.bin").exists()
    spec = tmp_path / "s.csv"
    assert main(["spectrum", str(txt), "--out", str(spec), "--vectors", str(tmp_path / "v.csv")]) == 0
    assert len(spec.read_text().splitlines()) == 81
    assert main(["spectrum", str(tmp_path / "m_0000.bin"), "--k", "3", "--out", str(spec)]) == 0
    assert len(spec.read_text().splitlines()) == 7
    loc = tmp_path / "loc.csv"
    assert main(["localize", str(txt), "--alpha", "1.5", "--c", "0.3", "--k", "4", "--out", str(loc)]) == 0
    assert loc.read_text().startswith("k,lambda,L,")


def test_cli_sample_needs_seed(tmp_path, capsys):
    assert main(["sample", "--out", str(tmp_path / "m.txt")]) == 2
    assert "seed" in capsys.readouterr().err


def test_cli_study_with_config(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text(INI)
    out = tmp_path / "run"
    assert main(["study", "subcritical", "--config", str(cfg), "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "PASS ratio_median_1" in text and "PASS failures" in text
    assert load(out).config.seed == 7
    cfg.write_text(INI.replace("[0.5, 2]", "[5, 6]"))
    assert main(["study", "subcritical", "--config", str(cfg), "--seed", "8"]) == 1
    assert "FAIL ratio_median_1" in capsys.readouterr().out


def test_cli_study_rejects_bad_regime(tmp_path, capsys):
    assert main(["study", "supercritical", "--seed", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_verify(capsys):
    assert main(["verify"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 12 and all(l.startswith("PASS") for l in lines)


def test_verify_checks_all_pass():
    results = run_verify()
    assert all(c.ok for c in results), [c for c in results if not c.ok]
