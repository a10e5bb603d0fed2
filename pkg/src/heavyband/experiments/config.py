"""Study configuration and its line-oriented INI file format.

Example::

    [study]
    kind = subcritical
    seed = 7
    replicas = 200
    workers = 1

    [matrix]
    n = 500
    mu = 1
    pattern = cyclic_band

    [law]
    alpha = 1.5
    symmetrized = true

    [assert]
    ratio_median_1 = [0.9, 1.1]
    overlap_pass_fraction_1 = >= 0.8

Keys of ``[assert]`` name fields of the aggregate; values are an interval
``[lo, hi]`` or a comparison ``<= x``, ``>= x``, ``< x``, ``> x``, ``== x``.
"""
from __future__ import annotations

import configparser
import dataclasses
import math
import operator
import re
from dataclasses import dataclass, field

from ..ensemble import DENSE_LIMIT
from ..errors import ConfigurationError
from ..heavy_tail import TailLaw, classify_window, critical_alpha
from ..truncation import TRACE_DENSE_LIMIT, TruncationSpec

STUDY_KINDS = ("subcritical", "supercritical", "semicircle", "poisson", "moments", "tailsums", "perturbation")

# section each field is read from
_SECTIONS = {
    "study": ("kind", "seed", "replicas", "workers", "out"),
    "matrix": ("n", "mu", "pattern", "n_grid"),
    "law": ("alpha", "scale", "slowly_varying", "sv_param", "symmetrized", "variance_normalized"),
    "spectral": ("top_k", "solver", "tol"),
    "localization": ("c", "eta0"),
    "extremes": ("t", "K"),
    "truncation": ("gamma", "gamma_prime", "gamma_double_prime", "s_grid", "kappa"),
    "tailsums": ("low", "high", "epsilon"),
    "perturbation": ("max_n", "small_trials", "small_max_n"),
}


@dataclass
class ExperimentConfig:
    kind: str
    seed: int | None = None
    replicas: int = 1
    workers: int = 1
    out: str | None = None
    n: int = 500
    mu: float = 1.0
    pattern: str = "cyclic_band"
    n_grid: tuple = ()
    alpha: float = 1.5
    scale: float = 1.0
    slowly_varying: str = "constant"
    sv_param: float = 1.0
    symmetrized: bool = True
    variance_normalized: bool = False
    top_k: int = 3
    solver: str = "auto"
    tol: float = 1e-9
    c: float = 0.25
    eta0: float = 0.4
    t: float = 1.0
    K: int = 5
    gamma: float = 0.1
    gamma_prime: float = 0.55
    gamma_double_prime: float = 0.15
    s_grid: tuple = (1, 2, 3)
    kappa: float = 0.9
    low: float | None = None
    high: float = 0.5
    epsilon: float = 0.1
    max_n: int = 50
    small_trials: int = 100
    small_max_n: int = 12
    assertions: dict = field(default_factory=dict)

    def law(self) -> TailLaw:
        return TailLaw(
            self.alpha, self.scale, self.slowly_varying, self.sv_param, self.symmetrized, self.variance_normalized
        )

    @property
    def grid(self) -> tuple:
        return tuple(self.n_grid) if self.n_grid else (self.n,)

    def truncation_spec(self) -> TruncationSpec:
        return TruncationSpec(self.gamma, self.gamma_prime, self.gamma_double_prime, 1, self.mu)

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["n_grid"] = list(self.n_grid)
        d["s_grid"] = list(self.s_grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        d["n_grid"] = tuple(d.get("n_grid", ()))
        d["s_grid"] = tuple(d.get("s_grid", (1, 2, 3)))
        return cls(**d)

    def validate(self) -> "ExperimentConfig":
        """Reject configurations outside the hypotheses of the chosen study."""
        if self.kind not in STUDY_KINDS:
            raise ConfigurationError(f"unknown study kind {self.kind!r}; choose from {', '.join(STUDY_KINDS)}")
        if self.seed is None:
            raise ConfigurationError("a seed is mandatory")
        if self.replicas < 1:
            raise ConfigurationError("replicas must be at least 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be at least 1")
        for a in self.assertions.values():
            parse_assertion(a)
        if self.kind == "perturbation":
            return self
        law = self.law()
        if self.kind == "tailsums":
            classify_window(self.alpha, self.mu, self.low, self.high, self.epsilon)
            return self
        if not 0 < self.mu <= 1:
            raise ConfigurationError(f"mu must lie in (0, 1], got {self.mu}")
        thr = critical_alpha(self.mu)
        if self.kind in ("subcritical", "poisson"):
            if not self.alpha < thr:
                raise ConfigurationError(f"{self.kind} study needs alpha < {thr} for mu = {self.mu}")
            if self.alpha >= 1 + 1 / self.mu and not law.symmetrized:
                raise ConfigurationError("alpha >= 1 + 1/mu requires a symmetrized law")
            if self.top_k < 1:
                raise ConfigurationError("top_k must be positive")
        if self.kind == "supercritical":
            if not self.alpha > thr:
                raise ConfigurationError(f"supercritical study needs alpha > {thr} for mu = {self.mu}")
            if not (law.variance_normalized and law.symmetrized):
                raise ConfigurationError("supercritical study needs a symmetrized variance-one law")
        if self.kind == "semicircle":
            if not (self.alpha > 2 and law.variance_normalized and law.symmetrized):
                raise ConfigurationError("semicircle study needs alpha > 2 and a symmetrized variance-one law")
            if max(self.grid) > DENSE_LIMIT:
                raise ConfigurationError(f"semicircle study needs the full spectrum, N <= {DENSE_LIMIT}")
        if self.kind == "moments":
            if not (law.variance_normalized and law.symmetrized):
                raise ConfigurationError("moment study needs a symmetrized variance-one law")
            bad = self.truncation_spec().window_violations()
            if bad:
                raise ConfigurationError("; ".join(bad))
            if max(self.grid) > TRACE_DENSE_LIMIT:
                raise ConfigurationError(f"moment study computes traces densely, N <= {TRACE_DENSE_LIMIT}")
            if not 0 < self.kappa < 1:
                raise ConfigurationError("kappa must lie in (0, 1)")
        return self


# -- INI parsing --------------------------------------------------------------------------

_INT = {"seed", "replicas", "workers", "n", "top_k", "K", "max_n", "small_trials", "small_max_n"}
_BOOL = {"symmetrized", "variance_normalized"}
_STR = {"kind", "out", "pattern", "slowly_varying", "solver"}
_INT_LIST = {"n_grid", "s_grid"}


def _as_int(raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        x = float(raw)
        if not x.is_integer():
            raise
        return int(x)


def _convert(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT:
            return _as_int(raw)
        if key in _BOOL:
            low = raw.lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(raw)
            return low in ("true", "yes", "1")
        if key in _STR:
            return raw
        if key in _INT_LIST:
            return tuple(_as_int(x) for x in re.split(r"[,\s]+", raw) if x)
        if key == "low":
            return None if raw.lower() in ("", "none", "-inf") else float(raw)
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"bad value {raw!r} for {key}") from None


def parse_config_text(text: str, **overrides) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"unreadable config: {exc}") from None
    values = {}
    for section in cp.sections():
        if section == "assert":
            values["assertions"] = dict(cp.items("assert"))
            continue
        allowed = _SECTIONS.get(section)
        if allowed is None:
            raise ConfigurationError(f"unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in allowed:
                raise ConfigurationError(f"unknown key {key!r} in [{section}]")
            values[key] = _convert(key, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "kind" not in values:
        raise ConfigurationError("the [study] section must set kind")
    return ExperimentConfig(**values)


def load_config(path, **overrides) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), **overrides)


# -- assertions -----------------------------------------------------------------------------

_OPS = {"<=": operator.le, ">=": operator.ge, "<": operator.lt, ">": operator.gt, "==": operator.eq}


def parse_assertion(expr: str):
    """Return a predicate on floats for ``[lo, hi]`` or ``<op> x``."""
    s = expr.strip()
    m = re.fullmatch(r"\[\s*([^,\]]+)\s*,\s*([^\]]+)\s*\]", s)
    if m:
        lo, hi = float(m.group(1)), float(m.group(2))
        return lambda x: lo <= x <= hi
    m = re.fullmatch(r"(<=|>=|==|<|>)\s*(\S+)", s)
    if m:
        op, ref = _OPS[m.group(1)], float(m.group(2))
        return lambda x: op(x, ref)
    raise ConfigurationError(f"cannot parse assertion {expr!r}")


def check_assertions(assertions: dict, aggregate: dict) -> dict:
    """``{name: bool}``; a missing or non-numeric field fails."""
    out = {}
    for name, expr in assertions.items():
        pred = parse_assertion(expr)
        val = aggregate.get(name)
        if isinstance(val, bool):
            val = float(val)
        ok = isinstance(val, (int, float)) and not math.isnan(val) and bool(pred(val))
        out[name] = ok
    return out
