"""Run a configured experiment and write its artifacts."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import stats
from .config import ExperimentConfig, serialize_config
from .io import (ACF_SCHEMA, HIST_SCHEMA, PRICES_SCHEMA, RETURNS_SCHEMA, emit_csv,
                 write_json)
from .market import SimulationOutput, run_simulation

log = logging.getLogger(__name__)

HIST_BINS = 100
POWERLAW_LAGS = (1, 100)


def code_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


@dataclass
class RunArtifacts:
    out_dir: Path
    prices_csv: Path | None = None
    returns_csv: list[Path] = field(default_factory=list)
    acf_csv: Path | None = None
    histogram_csv: list[Path] = field(default_factory=list)
    report_json: Path | None = None
    manifest: Path | None = None
    report: stats.StatsReport = field(default_factory=stats.StatsReport)
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    def files(self) -> list[Path]:
        out = [self.prices_csv, *self.returns_csv, self.acf_csv, *self.histogram_csv,
               self.report_json, self.manifest]
        return [p for p in out if p is not None]


def analyze_returns(z, analyses, acf_max_lag: int = 100, seed: int = 0,
                    errors: dict | None = None) -> stats.StatsReport:
    """Stylised-fact statistics of a lag-1 return series.

    A failing analysis is recorded in ``errors`` and leaves its fields NaN.
    """
    errors = {} if errors is None else errors
    rep = stats.StatsReport()
    z = np.asarray(z, dtype=float)
    if "kurtosis" in analyses:
        try:
            rep.excess_kurtosis = stats.excess_kurtosis(z)
        except ValueError as e:
            errors["kurtosis"] = str(e)
    if "sf_test" in analyses:
        try:
            rep.sf_statistic, rep.sf_p_value = stats.shapiro_francia(stats.subsample(z, seed=seed))
        except ValueError as e:
            errors["sf_test"] = str(e)
    if "acf" in analyses or "powerlaw" in analyses:
        try:
            rep.acf_signed = stats.acf(z, acf_max_lag)
            rep.acf_abs = stats.acf(np.abs(z), acf_max_lag)
        except ValueError as e:
            errors["acf"] = str(e)
    if "powerlaw" in analyses and len(rep.acf_abs):
        fit = stats.power_law_fit(rep.acf_abs, *POWERLAW_LAGS)
        rep.powerlaw_exponent, rep.powerlaw_r2 = fit.exponent, fit.r2
        if not fit.ok:
            errors["powerlaw"] = f"no usable positive ACF range in lags {POWERLAW_LAGS}"
    return rep


def summary_text(rep: stats.StatsReport, errors: dict | None = None) -> str:
    lines = [
        f"excess kurtosis      {rep.excess_kurtosis:.4g}",
        f"Shapiro-Francia W'   {rep.sf_statistic:.6g}   p = {rep.sf_p_value:.3g}",
        f"power-law exponent   {rep.powerlaw_exponent:.4g}   r2 = {rep.powerlaw_r2:.4g}",
    ]
    for dl, k in rep.kurtosis_by_delta.items():
        lines.append(f"kurtosis  delta={dl:<8d} {k:.4g}")
    for name, msg in (errors or {}).items():
        lines.append(f"FAILED {name}: {msg}")
    return "\n".join(lines)


def write_outputs(cfg: ExperimentConfig, sim: SimulationOutput, out_dir) -> RunArtifacts:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    art = RunArtifacts(out)
    T = sim.T
    art.prices_csv = emit_csv(
        [np.arange(T + 1), sim.prices, sim.fundamentals,
         np.r_[0, sim.demand_noise], np.r_[0, sim.demand_tech],
         np.r_[0, sim.demand_fund], np.r_[0, sim.active_noise]],
        PRICES_SCHEMA, out / "prices.csv")

    prices = sim.prices[cfg.warmup:]
    z1 = stats.log_returns(prices, 1)
    art.report = analyze_returns(z1.values, cfg.analyses, cfg.acf_max_lag,
                                 seed=cfg.params.seed, errors=art.errors)
    rep = art.report

    for dl in cfg.deltas:
        try:
            zd = stats.log_returns(prices, dl)
        except ValueError as e:
            art.errors[f"returns_d{dl}"] = str(e)
            continue
        art.returns_csv.append(emit_csv(
            [np.arange(cfg.warmup, cfg.warmup + len(zd)), zd.values],
            RETURNS_SCHEMA, out / f"returns_d{dl}.csv"))
        try:
            centers, dens = stats.histogram_density(stats.normalize(zd), HIST_BINS)
            art.histogram_csv.append(emit_csv([centers, dens], HIST_SCHEMA, out / f"hist_d{dl}.csv"))
        except ValueError as e:
            art.errors[f"hist_d{dl}"] = str(e)

    if "agg_gaussianity" in cfg.analyses:
        try:
            rep.kurtosis_by_delta = stats.kurtosis_by_delta(prices, cfg.deltas)
        except ValueError as e:
            art.errors["agg_gaussianity"] = str(e)

    if len(rep.acf_signed):
        art.acf_csv = emit_csv([np.arange(len(rep.acf_signed)), rep.acf_signed, rep.acf_abs],
                               ACF_SCHEMA, out / "acf.csv")

    report = rep.as_dict()
    report["errors"] = dict(art.errors)
    art.report_json = write_json(report, out / "report.json")
    manifest = (f"# stylefacts {code_version()}\n"
                f"# rerun: stylefacts run manifest.txt --out <dir>\n"
                + serialize_config(cfg))
    art.manifest = out / "manifest.txt"
    art.manifest.write_text(manifest)
    return art


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> RunArtifacts:
    out_dir = Path(out_dir) if out_dir is not None else Path(cfg.resolved_output_dir())
    log.info("simulating T=%d seed=%d", cfg.params.T, cfg.params.seed)
    sim = run_simulation(cfg.params)
    return write_outputs(cfg, sim, out_dir)
