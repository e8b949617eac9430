"""Flat ``key = value`` experiment configuration.

Lines are ``key = value``; ``#`` starts a comment.  A ``preset`` key
supplies a full parameter set and any other key in the file overrides it,
wherever it appears.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field, fields

from .params import ModelParams, TRADER_SETS

ANALYSES = ("kurtosis", "sf_test", "acf", "powerlaw", "agg_gaussianity")
DEFAULT_OUT = "runs"
OUT_ENV = "STYLEFACTS_OUT"
DEFAULT_WARMUP = 5 * max(26, 21)


class ConfigError(ValueError):
    def __init__(self, key: str, msg: str):
        super().__init__(f"{key}: {msg}")
        self.key = key


PRESETS: dict[str, dict] = {
    "trader_set_A": dict(TRADER_SETS["A"]),
    "trader_set_B": dict(TRADER_SETS["B"]),
    "agg_gaussianity_B": dict(TRADER_SETS["B"], T=10_000_000,
                              deltas=(1, 100, 1000, 10_000)),
    "constant_f_B": dict(TRADER_SETS["B"], T=10_000_000, f_mode="constant",
                         deltas=(1, 100, 1000, 10_000)),
    "d_one_A": dict(TRADER_SETS["A"], d=1.0),
    "d_one_B": dict(TRADER_SETS["B"], d=1.0),
}

PRESET_NOTES = {
    "trader_set_A": "Trader Set A (N1=4, N5=4, N21=8, N_T=2, N_F=2)",
    "trader_set_B": "Trader Set B (N21=16, N_T=2, N_F=2)",
    "agg_gaussianity_B": "Trader Set B, varying f, T=1e7, lags 1..1e4",
    "constant_f_B": "Trader Set B, constant f, T=1e7, lags 1..1e4",
    "d_one_A": "Trader Set A with d=1 (fixed active noise count)",
    "d_one_B": "Trader Set B with d=1 (fixed active noise count)",
}

_PARAM_TYPES = {f.name: f.type for f in fields(ModelParams)}
_INT_KEYS = {k for k, t in _PARAM_TYPES.items() if t == "int"} | {"warmup", "acf_max_lag"}
_FLOAT_KEYS = {k for k, t in _PARAM_TYPES.items() if t == "float"}
KEYS = ("preset",) + tuple(_PARAM_TYPES) + ("warmup", "deltas", "acf_max_lag", "analyses", "out")


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams = field(default_factory=ModelParams)
    analyses: frozenset = frozenset(ANALYSES)
    deltas: tuple = (1, 10, 100, 1000)
    output_dir: str | None = None
    warmup: int = DEFAULT_WARMUP
    acf_max_lag: int = 100

    def resolved_output_dir(self) -> str:
        return self.output_dir or os.environ.get(OUT_ENV) or DEFAULT_OUT

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return dataclasses.replace(self, params=self.params.replace(seed=seed))


def _int(key, raw):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        v = float(raw)  # accepts 1e6
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw!r}") from None
    if not v.is_integer():
        raise ConfigError(key, f"expected an integer, got {raw!r}")
    return int(v)


def _float(key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {raw!r}") from None


def _convert(key: str, raw: str):
    if key in _INT_KEYS:
        return _int(key, raw)
    if key in _FLOAT_KEYS:
        return _float(key, raw)
    if key == "deltas":
        vals = tuple(_int(key, x.strip()) for x in raw.split(",") if x.strip())
        if not vals or min(vals) < 1:
            raise ConfigError(key, "expected a comma list of lags >= 1")
        return vals
    if key == "analyses":
        vals = frozenset(x.strip() for x in raw.split(",") if x.strip())
        unknown = sorted(vals - set(ANALYSES))
        if unknown:
            raise ConfigError(key, f"unknown analyses {unknown}; choose from {ANALYSES}")
        return vals
    return raw


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        if key in values:
            raise ConfigError(key, "given more than once")
        values[key] = _convert(key, raw)

    merged: dict[str, object] = {}
    preset = values.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError("preset", f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        merged.update(PRESETS[preset])
    merged.update(values)

    param_kw = {k: v for k, v in merged.items() if k in _PARAM_TYPES}
    probe = object.__new__(ModelParams)
    for f in fields(ModelParams):
        object.__setattr__(probe, f.name, param_kw.get(f.name, f.default))
    bad = probe.violations()
    if bad:
        raise ConfigError(*bad[0])
    params = ModelParams(**param_kw)

    cfg = ExperimentConfig(
        params=params,
        analyses=merged.get("analyses", frozenset(ANALYSES)),
        deltas=tuple(merged.get("deltas", ExperimentConfig.deltas)),
        output_dir=merged.get("out"),
        warmup=merged.get("warmup", DEFAULT_WARMUP),
        acf_max_lag=merged.get("acf_max_lag", 100),
    )
    if cfg.warmup < 0:
        raise ConfigError("warmup", f"must be >= 0, got {cfg.warmup}")
    if cfg.warmup >= params.T:
        raise ConfigError("warmup", f"must be < T={params.T}, got {cfg.warmup}")
    if cfg.acf_max_lag < 1:
        raise ConfigError("acf_max_lag", f"must be >= 1, got {cfg.acf_max_lag}")
    return cfg


def serialize_config(cfg: ExperimentConfig) -> str:
    """Explicit key-value text (no preset) that parses back to ``cfg``."""
    lines = []
    for f in fields(ModelParams):
        v = getattr(cfg.params, f.name)
        lines.append(f"{f.name} = {v!r}" if isinstance(v, float) else f"{f.name} = {v}")
    lines.append(f"warmup = {cfg.warmup}")
    lines.append("deltas = " + ", ".join(str(d) for d in cfg.deltas))
    lines.append(f"acf_max_lag = {cfg.acf_max_lag}")
    lines.append("analyses = " + ", ".join(a for a in ANALYSES if a in cfg.analyses))
    if cfg.output_dir is not None:
        lines.append(f"out = {cfg.output_dir}")
    return "\n".join(lines) + "\n"
