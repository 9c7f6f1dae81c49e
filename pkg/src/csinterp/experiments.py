"""Declarative experiment sweeps: error-vs-samples studies over seeded trials.

A JSON config pins scenario, target function, index set, weighting strategy
with its parameter list, the m grid, trial count, noise level and base seed.
Each (m, parameter, trial) cell is solved cold with a seed derived by hash
mixing from the cell coordinates, so extending a sweep never shifts the
random streams of existing cells.  Output is a tidy results table plus a
per-cell geometric-mean summary; both serialize to CSV with a fixed header
and deterministic formatting, so identical configs give byte-identical
files.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from hashlib import sha256
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .basis import BasisSpec
from .functions import builtin_function
from .guarantees import (
    WEIGHT_STRATEGIES,
    lower_set_bound_check_table,
    prior_support_quantities,
    sufficient_m,
    truncation_bound,
    weights_from_strategy,
)
from .indexsets import (
    IndexSet,
    build_hyperbolic_cross,
    build_tensor_product,
    build_total_degree,
    is_lower,
    random_lower_set,
)
from .measurement import build_system
from .reconstruction import (
    ORACLE_MAX_DIMENSION,
    error_grid,
    oracle_coefficients,
    reconstruct,
)
from .seeding import GENERATOR_NAME, stable_seed
from .solver import SolverOptions

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "ConfigError",
    "run_experiment",
    "write_results",
    "write_summary",
    "write_meta",
    "config_hash",
    "bounds_report",
    "build_index_set",
    "RESULTS_HEADER",
    "SUMMARY_HEADER",
]

SCHEMA_VERSION = 1

INDEX_SET_KINDS = ("TP", "TD", "HC")

#: Fixed results.csv header.  Wall-clock timings stay in memory only so that
#: reruns of the same config are byte-identical on disk.
RESULTS_HEADER = (
    "config_hash,m,trial,strategy_param,linf_error,l2_coeff_error,"
    "residual,iterations,converged"
)
SUMMARY_HEADER = (
    "config_hash,m,strategy_param,trials,converged,gmean_linf_error,gmean_l2_coeff_error"
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    scenario: str
    function_id: str
    dimension: int
    index_set_kind: str
    degree: int
    weight_strategy: str
    weight_params: tuple[float, ...]
    m_values: tuple[int, ...]
    trials: int
    eta: float
    base_seed: int
    solver_opts: SolverOptions = field(default_factory=SolverOptions)
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        try:
            return _config_from_dict(cls, dict(raw))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid experiment config: {exc}") from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["K"] = out.pop("degree")
        out["weight_params"] = list(self.weight_params)
        out["m_values"] = list(self.m_values)
        out["solver_opts"] = asdict(self.solver_opts)
        return out


def _config_from_dict(cls, raw: dict) -> ExperimentConfig:
    version = int(raw.pop("schema_version", SCHEMA_VERSION))
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version}")
    solver_raw = raw.pop("solver_opts", {})
    unknown_opts = set(solver_raw) - set(SolverOptions().__dataclass_fields__)
    if unknown_opts:
        raise ConfigError(f"unknown solver options {sorted(unknown_opts)}")
    opts = SolverOptions(**solver_raw)

    scenario = str(raw.pop("scenario")).upper()
    dimension = int(raw.pop("dimension"))
    BasisSpec.from_scenario(scenario, dimension)  # validates the pair

    kind = str(raw.pop("index_set_kind")).upper()
    if kind not in INDEX_SET_KINDS:
        raise ConfigError(f"index_set_kind must be one of {INDEX_SET_KINDS}")

    function_id = str(raw.pop("function_id"))
    target = builtin_function(function_id)
    if target.dimension != dimension:
        raise ConfigError(
            f"function {function_id!r} has dimension {target.dimension}, config says {dimension}"
        )

    strategy = str(raw.pop("weight_strategy")).lower()
    if strategy not in WEIGHT_STRATEGIES or strategy in ("prior_support", "custom"):
        raise ConfigError(f"weight_strategy must be a parametric strategy, got {strategy!r}")
    params = tuple(float(a) for a in raw.pop("weight_params", [0.0])) or (0.0,)

    m_values = tuple(int(m) for m in raw.pop("m_values"))
    if not m_values or list(m_values) != sorted(m_values) or len(set(m_values)) != len(m_values):
        raise ConfigError("m_values must be a nonempty strictly ascending list")
    if m_values[0] < 1:
        raise ConfigError("m_values must be positive")

    trials = int(raw.pop("trials"))
    if trials < 1:
        raise ConfigError("trials must be >= 1")

    eta = float(raw.pop("eta", 0.0))
    if eta < 0:
        raise ConfigError("eta must be nonnegative")

    cfg = ExperimentConfig(
        name=str(raw.pop("name")),
        scenario=scenario,
        function_id=function_id,
        dimension=dimension,
        index_set_kind=kind,
        degree=int(raw.pop("K")),
        weight_strategy=strategy,
        weight_params=params,
        m_values=m_values,
        trials=trials,
        eta=eta,
        base_seed=int(raw.pop("base_seed")),
        solver_opts=opts,
        schema_version=version,
    )
    if raw:
        raise ConfigError(f"unknown config keys {sorted(raw)}")
    return cfg


@dataclass(frozen=True)
class ResultRow:
    config_hash: str
    m: int
    trial: int
    strategy_param: float
    linf_error: float
    l2_coeff_error: Optional[float]
    residual: float
    iterations: int
    converged: bool
    wall_time_ms: float  # in-memory diagnostic; not serialized

    def csv_line(self) -> str:
        return ",".join(
            [
                self.config_hash,
                str(self.m),
                str(self.trial),
                _fmt(self.strategy_param),
                _fmt(self.linf_error),
                _fmt(self.l2_coeff_error),
                _fmt(self.residual),
                str(self.iterations),
                "1" if self.converged else "0",
            ]
        )


def _fmt(value) -> str:
    if value is None:
        return ""
    v = float(value)
    if math.isnan(v):
        return "nan"
    return repr(v)


def config_hash(config: ExperimentConfig) -> str:
    canon = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return sha256(canon.encode("utf-8")).hexdigest()[:12]


def list_presets() -> list[str]:
    """Names of the experiment configs shipped with the package."""
    root = resources.files("csinterp").joinpath("presets")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> ExperimentConfig:
    path = resources.files("csinterp").joinpath("presets").joinpath(f"{name}.json")
    if not path.is_file():
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    return ExperimentConfig.from_dict(json.loads(path.read_text()))


def build_index_set(kind: str, dimension: int, degree: int) -> IndexSet:
    kind = kind.upper()
    if kind == "TP":
        return build_tensor_product(dimension, degree)
    if kind == "TD":
        return build_total_degree(dimension, degree)
    if kind == "HC":
        return build_hyperbolic_cross(dimension, degree)
    raise ConfigError(f"unknown index set kind {kind!r}")


def _run_cell(config: ExperimentConfig, chash: str, index_set: IndexSet,
              oracle: Optional[np.ndarray], m: int, param: float, trial: int) -> ResultRow:
    spec = BasisSpec.from_scenario(config.scenario, config.dimension)
    target = builtin_function(config.function_id)
    weights = weights_from_strategy(config.weight_strategy, index_set, spec, alpha=param)
    seed = stable_seed(config.base_seed, m, param, trial)
    start = time.perf_counter()
    try:
        result, report = reconstruct(
            target, spec, index_set, weights, m, config.eta, seed,
            solver_opts=config.solver_opts, oracle_coeffs=oracle,
        )
        row = ResultRow(
            config_hash=chash,
            m=m,
            trial=trial,
            strategy_param=param,
            linf_error=report.linf_error,
            l2_coeff_error=report.l2_coeff_error,
            residual=report.residual,
            iterations=result.iterations,
            converged=result.converged,
            wall_time_ms=1e3 * (time.perf_counter() - start),
        )
    except Exception:
        row = ResultRow(
            config_hash=chash, m=m, trial=trial, strategy_param=param,
            linf_error=math.nan, l2_coeff_error=None, residual=math.nan,
            iterations=0, converged=False,
            wall_time_ms=1e3 * (time.perf_counter() - start),
        )
    return row


def run_experiment(
    config: ExperimentConfig,
    workers: int = 1,
    progress: Optional[callable] = None,
) -> tuple[list[ResultRow], list[dict]]:
    """Run the full sweep; returns (rows, summary) in deterministic order.

    Per-trial failures are recorded as non-converged rows with NaN errors
    instead of aborting the sweep.  With ``workers`` > 1 the trials run in a
    process pool; rows are sorted before being returned, so output order
    does not depend on scheduling.
    """
    chash = config_hash(config)
    spec = BasisSpec.from_scenario(config.scenario, config.dimension)
    index_set = build_index_set(config.index_set_kind, config.dimension, config.degree)
    target = builtin_function(config.function_id)
    oracle = None
    if config.dimension <= ORACLE_MAX_DIMENSION:
        oracle = oracle_coefficients(target, spec, index_set)

    cells = [
        (m, param, trial)
        for param in config.weight_params
        for m in config.m_values
        for trial in range(config.trials)
    ]
    rows: list[ResultRow] = []
    if workers <= 1:
        for m, param, trial in cells:
            rows.append(_run_cell(config, chash, index_set, oracle, m, param, trial))
            if progress is not None:
                progress(len(rows), len(cells))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_cell, config, chash, index_set, oracle, m, param, trial)
                for m, param, trial in cells
            ]
            for done, fut in enumerate(futures, start=1):
                rows.append(fut.result())
                if progress is not None:
                    progress(done, len(futures))
    rows.sort(key=lambda r: (r.m, r.strategy_param, r.trial))
    return rows, summarize(rows)


def _gmean(values: list[float]) -> float:
    vals = [v for v in values if v is not None and not math.isnan(v)]
    if not vals:
        return math.nan
    return float(np.exp(np.mean(np.log(np.maximum(vals, 1e-300)))))


def summarize(rows: list[ResultRow]) -> list[dict]:
    """Per-(m, parameter) geometric means over trials."""
    keys = sorted({(r.m, r.strategy_param) for r in rows})
    summary = []
    for m, param in keys:
        group = [r for r in rows if r.m == m and r.strategy_param == param]
        summary.append(
            {
                "config_hash": group[0].config_hash,
                "m": m,
                "strategy_param": param,
                "trials": len(group),
                "converged": sum(1 for r in group if r.converged),
                "gmean_linf_error": _gmean([r.linf_error for r in group]),
                "gmean_l2_coeff_error": _gmean(
                    [r.l2_coeff_error for r in group if r.l2_coeff_error is not None]
                ),
            }
        )
    return summary


def write_results(rows: list[ResultRow], path) -> None:
    lines = [RESULTS_HEADER]
    lines.extend(r.csv_line() for r in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def write_summary(summary: list[dict], path) -> None:
    lines = [SUMMARY_HEADER]
    for s in summary:
        lines.append(
            ",".join(
                [
                    s["config_hash"],
                    str(s["m"]),
                    _fmt(s["strategy_param"]),
                    str(s["trials"]),
                    str(s["converged"]),
                    _fmt(s["gmean_linf_error"]),
                    _fmt(s["gmean_l2_coeff_error"]),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_meta(config: ExperimentConfig, path) -> None:
    index_set = build_index_set(config.index_set_kind, config.dimension, config.degree)
    _, grid_spec = error_grid(config.dimension)
    meta = {
        "config": config.to_dict(),
        "config_hash": config_hash(config),
        "code_version": __version__,
        "rng_generator": GENERATOR_NAME,
        "seeding": "sha256(base_seed|m|param|trial)",
        "index_set_size": len(index_set),
        "error_grid": grid_spec,
        "results_header": RESULTS_HEADER,
        "summary_header": SUMMARY_HEADER,
    }
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# bounds subcommand machinery

def _index_set_from_spec(raw: dict, dimension: int, full: Optional[IndexSet] = None) -> IndexSet:
    kind = str(raw.get("kind", "")).upper()
    if kind in INDEX_SET_KINDS:
        return build_index_set(kind, dimension, int(raw["K"]))
    if kind == "LOWER_RANDOM":
        return random_lower_set(dimension, int(raw["size"]), int(raw.get("seed", 0)))
    if kind == "FIRST":
        if full is None:
            raise ConfigError("'first' index-set specs are only valid for delta")
        count = int(raw["count"])
        if count > len(full):
            raise ConfigError(f"'first' count {count} exceeds full set size {len(full)}")
        return IndexSet(dimension, list(full)[:count])
    raise ConfigError(f"unknown index-set spec kind {raw.get('kind')!r}")


def bounds_report(raw: dict) -> dict:
    """Guarantee/bound report for a config fragment; see the README schema.

    Returns a JSON-ready dict with the measurement quantity report, the
    lower-set bound checks when delta is lower, and optional prior-support
    and truncation sections.
    """
    try:
        scenario = str(raw["scenario"]).upper()
        dimension = int(raw["dimension"])
        spec = BasisSpec.from_scenario(scenario, dimension)
        full = _index_set_from_spec(raw["full_set"], dimension)
        delta = _index_set_from_spec(raw["delta"], dimension, full=full)
        epsilon = float(raw.get("epsilon", 1e-3))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid bounds config: {exc}") from exc
    if not delta.issubset(full):
        raise ConfigError("delta must be contained in the full index set")

    wspec = raw.get("weights", {"strategy": "intrinsic_power", "alpha": 1.0})
    strategy = str(wspec.get("strategy", "intrinsic_power")).lower()
    weights = weights_from_strategy(strategy, full, spec, alpha=wspec.get("alpha"))
    u = weights_from_strategy("intrinsic_power", full, spec, alpha=1.0)

    report = sufficient_m(delta, full, u, weights, epsilon)
    out: dict = {
        "scenario": scenario,
        "dimension": dimension,
        "n_full": len(full),
        "delta_size": len(delta),
        "weights": {"strategy": strategy, "alpha": wspec.get("alpha")},
        "epsilon": epsilon,
        "guarantee": json.loads(report.to_json()),
        "delta_is_lower": is_lower(delta),
    }
    if out["delta_is_lower"]:
        out["lower_set_bounds"] = lower_set_bound_check_table(delta)

    prior = raw.get("prior")
    if prior:
        gamma_set = _index_set_from_spec(prior["set"], dimension, full=full)
        psr = prior_support_quantities(delta, gamma_set, float(prior["gamma"]))
        out["prior_support"] = json.loads(psr.to_json())

    trunc = raw.get("truncation")
    if trunc:
        system = build_system(
            spec, full, lambda pts: np.zeros(pts.shape[0]),
            int(trunc["m"]), 0.0, sample_seed=int(trunc.get("seed", 0)),
        )
        tr = truncation_bound(system, weights, float(trunc.get("rank_tol", 1e-10)))
        out["truncation"] = json.loads(tr.to_json())
    return out


def format_bounds_table(report: dict) -> str:
    """Human-readable rendering of a bounds_report dict."""
    lines = [
        f"scenario {report['scenario']}  d={report['dimension']}  "
        f"N={report['n_full']}  |delta|={report['delta_size']}  eps={report['epsilon']}",
        "",
        f"{'quantity':<28}{'value':>18}",
    ]
    g = report["guarantee"]
    for key in (
        "m_value", "delta_card_u", "delta_card_w", "tail_sup_ratio",
        "lam", "log_factor", "sufficient_m_estimate",
    ):
        lines.append(f"{key:<28}{g[key]:>18.6g}")
    lines.append(f"{'hypothesis_min_weight_ok':<28}{str(g['hypothesis_min_weight_ok']):>18}")
    lines.append(f"{'constant (placeholder)':<28}{g['universal_constant']:>18.6g}")
    if "lower_set_bounds" in report:
        lines.append("")
        lines.append(f"{'lower-set bound':<12}{'lhs':>14}{'rhs':>14}{'holds':>8}")
        for row in report["lower_set_bounds"]:
            lines.append(
                f"{row['scenario']:<12}{row['lhs']:>14.6g}{row['rhs']:>14.6g}{str(row['holds']):>8}"
            )
    if "prior_support" in report:
        p = report["prior_support"]
        lines.append("")
        lines.append(
            f"prior support: rho={p['rho']:.4g} sigma={p['sigma']:.4g} "
            f"M_weighted={p['m_weighted']:.6g} M_unweighted={p['m_unweighted']:.6g} "
            f"weighted_smaller={p['weighted_is_smaller']}"
        )
    if "truncation" in report:
        t = report["truncation"]
        lines.append("")
        lines.append(
            f"truncation: rank={t['rank_r']} sigma_r={t['sigma_r']:.6g} "
            f"||w||={t['pk_weight_norm']:.6g} factor={t['bound_factor']:.6g}"
        )
    return "\n".join(lines)
