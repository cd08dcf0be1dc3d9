"""Experiment driver: named presets, seeded batch execution (optionally
parallel), algorithm comparisons, the 14-variant strategy tournament,
multi-objective evaluation, and CSV/JSON report emission.

Raw CSV artifacts are pure functions of (config, seed): they carry no wall
times, so repeated invocations are byte-identical. Timings live only in the
JSON reports.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .benchmarks import BenchmarkSpec, CATALOG, analytic_front, lookup
from .core import ConfigError
from .engine import EngineConfig, RunResult, run_aded, run_classic_de
from .metrics import (
    FrontPair,
    RunBatch,
    aov,
    convergence_speed,
    generational_distance,
    q_measure,
    spread,
    success_rate,
)
from .moo import run_aded_mo
from .stats import compare_batches, rank_variants
from .variation import LocalSearchBudget, ScheduleParams, StrategyId

OUT_DIR_ENV = "ADED_OUT"
DEFAULT_OUT_DIR = "aded-out"

ALGORITHMS = ("aded", "classic_de", "aded_mo")

# Variant ids with their fixed (F, CR) pairs used by the strategy tournament.
TOURNAMENT_PAIRS = (
    ("rand1bin", 0.9, 0.5),
    ("rand1exp", 0.9, 0.0),
    ("best1bin", 0.1, 0.1),
    ("best1exp", 0.9, 0.7),
    ("rand2bin", 0.3, 0.2),
    ("rand2exp", 0.9, 0.3),
    ("best2bin", 0.1, 0.7),
    ("best2exp", 0.9, 0.3),
    ("currenttorand1bin", 0.5, 0.4),
    ("currenttorand1exp", 0.9, 0.3),
    ("currenttobest1bin", 0.2, 0.8),
    ("currenttobest1exp", 0.9, 0.1),
    ("randtobest1bin", 0.1, 0.8),
    ("randtobest1exp", 0.9, 0.4),
)

TOURNAMENT_BENCHMARKS = ("sphere", "sinusoidal")

# Named experiment presets. Values are option overrides in the same flat
# vocabulary the CLI and config files use.
PRESETS = {
    # sinusoidal demo, dynamic vs all-neighbors topology
    "sinusoidal-dynamic": {
        "benchmark": "sinusoidal", "algorithm": "aded",
        "pop": 50, "gens": 100, "runs": 10, "neighborhood": "dynamic",
    },
    "sinusoidal-global": {
        "benchmark": "sinusoidal", "algorithm": "aded",
        "pop": 50, "gens": 100, "runs": 10, "neighborhood": "all",
    },
    # full 2-D battery settings used by the comparison tables
    "battery-2d": {"algorithm": "aded", "pop": 300, "gens": 200, "runs": 30},
    # classic DE on the convex demo objective, run to full depth
    "classic-convex": {
        "benchmark": "sphere", "algorithm": "classic_de",
        "pop": 300, "gens": 200, "runs": 30,
        "stagnation_tol": 0.0, "stagnation_limit": 200,
    },
    # desk-scale strategy tournament
    "tournament-desk": {"pop": 40, "gens": 40, "runs": 5},
    # multi-objective runs: high initial F keeps the admitted archive spread
    # across the whole front while a light local-search touch pulls it tight
    "moo-zdt1": {
        "benchmark": "zdt1", "algorithm": "aded_mo", "pop": 100, "gens": 100,
        "runs": 3, "f0": 2.0, "cr0": 0.9, "stagnation_limit": 40,
        "ls_iterations": 5, "ls_probability": 0.1,
    },
}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


# ---------------------------------------------------------------------------
# Option resolution
# ---------------------------------------------------------------------------

_INT_KEYS = {"pop", "gens", "runs", "seed", "neighborhood_size", "ls_iterations",
             "stagnation_limit", "dim", "jobs"}
_FLOAT_KEYS = {"f0", "cr0", "fixed_f", "fixed_cr", "ls_probability", "stagnation_tol",
               "ls_step"}


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    return str(value)


def load_config_file(path) -> dict:
    """Flat ``key = value`` config file; a ``preset`` key inherits that preset."""
    options: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        options[key.replace("-", "_")] = value
    return options


def resolve_options(preset: str | None = None, config_file=None, overrides: dict | None = None) -> dict:
    """Merge preset < config file < explicit overrides into one option dict."""
    merged: dict = {}
    file_options = load_config_file(config_file) if config_file else {}
    preset = preset or file_options.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; available: {', '.join(PRESETS)}")
        merged.update(PRESETS[preset])
    merged.update(file_options)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return {k: _coerce(k, v) for k, v in merged.items()}


def build_engine_config(options: dict) -> EngineConfig:
    schedule = ScheduleParams(
        initial_f=options.get("f0", 0.5),
        initial_cr=options.get("cr0", 0.5),
        mode=options.get("mode", "scheduled"),
        fixed_f=options.get("fixed_f"),
        fixed_cr=options.get("fixed_cr"),
    )
    enabled = str(options.get("local_search", "on")).lower() not in ("off", "false", "0", "no")
    budget = LocalSearchBudget(
        enabled=enabled,
        max_iterations=options.get("ls_iterations", 25),
        gradient_step=options.get("ls_step", 1e-6),
        probability=options.get("ls_probability", 1.0),
    )
    pop = options.get("pop", 100)
    return EngineConfig(
        population_size=pop,
        max_generations=options.get("gens", 100),
        schedule=schedule,
        strategy=StrategyId.parse(options.get("strategy", "adedrandbin")),
        neighborhood=options.get("neighborhood", "dynamic"),
        neighborhood_size=min(options.get("neighborhood_size", 10), pop - 1),
        local_search=budget,
        stagnation_limit=options.get("stagnation_limit", 10),
        stagnation_tol=options.get("stagnation_tol", 1e-12),
        seed=options.get("seed", 0),
    )


@dataclass
class ExperimentPlan:
    """A resolved batch of seeded runs for one or more benchmarks."""

    benchmarks: list
    config: EngineConfig = field(default_factory=EngineConfig)
    algorithm: str = "aded"
    n_runs: int = 10
    base_seed: int = 0
    dim: int | None = None
    jobs: int = 1
    out_dir: Path | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.n_runs < 1:
            raise ConfigError("n_runs must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        for benchmark_id in self.benchmarks:
            lookup(benchmark_id)
        self.out_dir = Path(self.out_dir) if self.out_dir is not None else None


def build_plan(options: dict) -> ExperimentPlan:
    benchmark = options.get("benchmark")
    if not benchmark:
        raise ConfigError("no benchmark selected (use --benchmark or a preset)")
    benchmarks = [b.strip() for b in str(benchmark).split(",") if b.strip()]
    out = options.get("out") or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR
    return ExperimentPlan(
        benchmarks=benchmarks,
        config=build_engine_config(options),
        algorithm=options.get("algorithm", "aded"),
        n_runs=options.get("runs", 10),
        base_seed=options.get("seed", 0),
        dim=options.get("dim"),
        jobs=options.get("jobs", 1),
        out_dir=out,
        fmt=options.get("format", "csv"),
    )


# ---------------------------------------------------------------------------
# Batch execution
# ---------------------------------------------------------------------------

def _execute_run(benchmark_id: str, algorithm: str, cfg: EngineConfig, dim) -> RunResult:
    spec = lookup(benchmark_id)
    space = spec.space(dim)
    if algorithm == "classic_de":
        return run_classic_de(spec.evaluate, space, cfg)
    if algorithm == "aded":
        return run_aded(spec.evaluate, space, cfg)
    raise ConfigError(f"single-objective batches cannot dispatch {algorithm!r}")


def run_batch(plan: ExperimentPlan, benchmark_id: str) -> list:
    """Execute the plan's seeded runs for one benchmark, ordered by run index."""
    cfgs = [replace(plan.config, seed=plan.base_seed + i) for i in range(plan.n_runs)]
    if plan.jobs > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
            futures = [
                pool.submit(_execute_run, benchmark_id, plan.algorithm, cfg, plan.dim)
                for cfg in cfgs
            ]
            return [f.result() for f in futures]
    return [_execute_run(benchmark_id, plan.algorithm, cfg, plan.dim) for cfg in cfgs]


def batch_for(plan: ExperimentPlan, benchmark_id: str, results: list) -> RunBatch:
    spec = lookup(benchmark_id)
    optimum = spec.known_optimum if isinstance(spec, BenchmarkSpec) else None
    return RunBatch(
        results=results,
        known_optimum=optimum,
        benchmark_id=benchmark_id,
        config_key=config_hash(plan.config),
    )


def config_hash(cfg: EngineConfig) -> str:
    payload = json.dumps(asdict(cfg), sort_keys=True, default=str)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Artifact writers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header: list, rows: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_history_csv(path: Path, batches: dict) -> None:
    """One row per (benchmark, run, generation) with the tracked diagnostics."""
    rows = []
    for benchmark_id, results in batches.items():
        for run_idx, r in enumerate(results):
            rate = r.convergence_rate_history
            for g in range(r.generations_executed):
                rows.append([
                    benchmark_id, run_idx, r.seed, g,
                    float(r.best_f_history[g]),
                    float(r.diversity_history[g]),
                    float(r.fdc_history[g]),
                    float(rate[g - 1]) if g >= 1 else None,
                ])
    _write_csv(path, ["benchmark", "run", "seed", "generation", "best_f",
                      "diversity", "fdc", "convergence_rate"], rows)


def write_summary_csv(path: Path, batches: dict) -> None:
    rows = []
    for benchmark_id, results in batches.items():
        for run_idx, r in enumerate(results):
            rows.append([
                benchmark_id, run_idx, r.seed, float(r.best_f), r.n_evaluations,
                r.generations_executed, r.terminated_by,
                ";".join(repr(float(v)) for v in r.best_x),
            ])
    _write_csv(path, ["benchmark", "run", "seed", "best_f", "n_evaluations",
                      "generations", "terminated_by", "best_x"], rows)


def _summary_stats(results: list) -> dict:
    finals = np.array([r.best_f for r in results], dtype=float)
    return {
        "mean_best_f": float(finals.mean()),
        "sd_best_f": float(finals.std(ddof=1)) if finals.size > 1 else 0.0,
        "min_best_f": float(finals.min()),
        "max_best_f": float(finals.max()),
        "mean_evaluations": float(np.mean([r.n_evaluations for r in results])),
        "wall_seconds": [r.wall_seconds for r in results],
    }


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_list_benchmarks(fmt: str = "csv") -> str:
    """Catalog listing: id, kind, dimension rule, bounds, known optimum."""
    entries = []
    for benchmark_id, spec in CATALOG.items():
        if isinstance(spec, BenchmarkSpec):
            space = spec.space()
            entries.append({
                "id": benchmark_id,
                "kind": "single",
                "dim_rule": spec.dim_rule,
                "dim": spec.dim,
                "bounds": space.as_pairs(),
                "optimum": spec.known_optimum,
            })
        else:
            entries.append({
                "id": benchmark_id,
                "kind": f"multi({spec.n_objectives})",
                "dim_rule": "fixed-n",
                "dim": spec.n_vars,
                "bounds": [spec.bounds],
                "optimum": None,
            })
    if fmt == "json":
        return json.dumps(entries, indent=2)
    lines = ["id,kind,dim_rule,dim,bounds,optimum"]
    for e in entries:
        bounds = ";".join(f"[{lo},{hi}]" for lo, hi in e["bounds"])
        opt = "" if e["optimum"] is None else repr(float(e["optimum"]))
        lines.append(f"{e['id']},{e['kind']},{e['dim_rule']},{e['dim']},{bounds},{opt}")
    return "\n".join(lines)


def cmd_run(plan: ExperimentPlan) -> dict:
    """Execute the plan and emit raw history, per-run summary, and a report."""
    if plan.algorithm == "aded_mo":
        raise ConfigError("multi-objective plans go through the `moo` command")
    batches = {b: run_batch(plan, b) for b in plan.benchmarks}
    report = {
        "version": __version__,
        "algorithm": plan.algorithm,
        "config": asdict(plan.config),
        "config_hash": config_hash(plan.config),
        "n_runs": plan.n_runs,
        "base_seed": plan.base_seed,
        "benchmarks": {},
    }
    for benchmark_id, results in batches.items():
        stats = _summary_stats(results)
        batch = batch_for(plan, benchmark_id, results)
        if batch.known_optimum is not None:
            stats["success_rate"] = success_rate(batch)
        report["benchmarks"][benchmark_id] = stats
    if plan.out_dir is not None:
        out = Path(plan.out_dir)
        write_history_csv(out / "raw_history.csv", batches)
        write_summary_csv(out / "run_summary.csv", batches)
        _write_json(out / "report.json", report)
    report["results"] = batches
    return report


def _comparison_text(rows: list) -> str:
    header = (f"{'benchmark':<22}{'algorithm':<14}{'mean':>14}{'sd':>12}"
              f"{'t':>10}{'p':>10}  sig")
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.benchmark:<22}{row.label_a:<14}{row.mean_a:>14.6g}{row.sd_a:>12.4g}"
            f"{row.t:>10.3f}{row.p:>10.4f}  {row.stars}"
        )
        lines.append(f"{'':<22}{row.label_b:<14}{row.mean_b:>14.6g}{row.sd_b:>12.4g}")
    return "\n".join(lines)


def cmd_compare(plan_a: ExperimentPlan, plan_b: ExperimentPlan) -> dict:
    """Run two plans over a shared benchmark list and emit Welch comparisons."""
    if list(plan_a.benchmarks) != list(plan_b.benchmarks):
        raise ConfigError("compared plans must share the same benchmark list")
    rows = []
    per_benchmark = {}
    for benchmark_id in plan_a.benchmarks:
        results_a = run_batch(plan_a, benchmark_id)
        results_b = run_batch(plan_b, benchmark_id)
        row = compare_batches(
            batch_for(plan_a, benchmark_id, results_a),
            batch_for(plan_b, benchmark_id, results_b),
            label_a=plan_a.algorithm,
            label_b=plan_b.algorithm,
        )
        rows.append(row)
        per_benchmark[benchmark_id] = (results_a, results_b)
    report = {
        "version": __version__,
        "labels": [plan_a.algorithm, plan_b.algorithm],
        "config_hash": [config_hash(plan_a.config), config_hash(plan_b.config)],
        "rows": [asdict(r) | {"stars": r.stars} for r in rows],
    }
    if plan_a.out_dir is not None:
        out = Path(plan_a.out_dir)
        _write_csv(
            out / "comparison.csv",
            ["benchmark", "label_a", "mean_a", "sd_a", "label_b", "mean_b", "sd_b",
             "t", "p", "df", "sig"],
            [[r.benchmark, r.label_a, r.mean_a, r.sd_a, r.label_b, r.mean_b, r.sd_b,
              r.t, r.p, r.df, r.stars] for r in rows],
        )
        (out / "comparison.txt").write_text(_comparison_text(rows) + "\n")
        _write_json(out / "comparison.json", report)
    report["pairs"] = per_benchmark
    return report


def cmd_tournament(
    benchmarks=TOURNAMENT_BENCHMARKS,
    n_runs: int = 5,
    pop: int = 40,
    gens: int = 40,
    base_seed: int = 0,
    out_dir=None,
    jobs: int = 1,
    success_tol: float = 1e-4,
) -> dict:
    """Run every strategy variant with its fixed (F, CR) pair over the given
    benchmarks, score AOV / convergence speed / Q, and rank by average rank."""
    detail_rows = []
    scores = []
    for variant, fixed_f, fixed_cr in TOURNAMENT_PAIRS:
        cfg = EngineConfig(
            population_size=pop,
            max_generations=gens,
            schedule=ScheduleParams(mode="fixed", fixed_f=fixed_f, fixed_cr=fixed_cr),
            strategy=StrategyId.parse(variant),
            neighborhood="dynamic",
            neighborhood_size=min(10, pop - 1),
            seed=base_seed,
        )
        per_function = []
        for benchmark_id in benchmarks:
            plan = ExperimentPlan(
                benchmarks=[benchmark_id], config=cfg, algorithm="aded",
                n_runs=n_runs, base_seed=base_seed, jobs=jobs,
            )
            results = run_batch(plan, benchmark_id)
            batch = batch_for(plan, benchmark_id, results)
            batch.success_tol = success_tol
            qm = q_measure(batch)
            entry = {
                "variant": variant,
                "benchmark": benchmark_id,
                "aov": aov(batch),
                "cs": convergence_speed(batch),
                "q": qm.q,
                "n_success": qm.n_success,
            }
            per_function.append(entry)
            detail_rows.append(entry)
        scores.append((
            variant,
            float(np.mean([e["aov"] for e in per_function])),
            float(np.mean([e["cs"] for e in per_function])),
            float(np.mean([e["q"] for e in per_function])),
        ))
    ranked = rank_variants(scores)
    pairs = {v: (f, cr) for v, f, cr in TOURNAMENT_PAIRS}
    report = {
        "version": __version__,
        "benchmarks": list(benchmarks),
        "n_runs": n_runs,
        "pop": pop,
        "gens": gens,
        "base_seed": base_seed,
        "table": [asdict(s) | {"f": pairs[s.variant][0], "cr": pairs[s.variant][1]}
                  for s in ranked],
        "detail": detail_rows,
    }
    if out_dir is not None:
        out = Path(out_dir)
        _write_csv(
            out / "tournament.csv",
            ["variant", "f", "cr", "aov", "aov_rank", "cs", "cs_rank",
             "q_measure", "q_rank", "average_rank"],
            [[s.variant, pairs[s.variant][0], pairs[s.variant][1], s.aov, s.aov_rank,
              s.cs, s.cs_rank, s.q, s.q_rank, s.average_rank] for s in ranked],
        )
        _write_csv(
            out / "tournament_detail.csv",
            ["variant", "benchmark", "aov", "cs", "q_measure", "n_success"],
            [[e["variant"], e["benchmark"], e["aov"], e["cs"], e["q"], e["n_success"]]
             for e in detail_rows],
        )
        _write_json(out / "tournament.json", report)
    report["ranked"] = ranked
    return report


def cmd_moo(plan: ExperimentPlan, weights=None, reference_size: int = 1000) -> dict:
    """Seeded multi-objective runs with front export and GD / spread scoring."""
    report = {
        "version": __version__,
        "config": asdict(plan.config),
        "config_hash": config_hash(plan.config),
        "n_runs": plan.n_runs,
        "base_seed": plan.base_seed,
        "benchmarks": {},
    }
    all_results = {}
    for benchmark_id in plan.benchmarks:
        spec = lookup(benchmark_id)
        if isinstance(spec, BenchmarkSpec):
            raise ConfigError(f"{benchmark_id!r} is single-objective; use `run` instead")
        space = spec.space(plan.dim)
        w = np.asarray(weights, dtype=float) if weights is not None else (
            np.full(spec.n_objectives, 1.0 / spec.n_objectives))
        try:
            reference = analytic_front(benchmark_id, reference_size)
        except KeyError:
            reference = None
        runs = []
        for i in range(plan.n_runs):
            cfg = replace(plan.config, seed=plan.base_seed + i)
            result = run_aded_mo(spec.evaluate, space, cfg, w)
            front = np.array([objs for _, objs in result.front])
            entry = {
                "seed": cfg.seed,
                "front_size": len(result.front),
                "n_evaluations": result.n_evaluations,
                "terminated_by": result.terminated_by,
                "wall_seconds": result.wall_seconds,
                "best_scalarized": float(result.best_scalarized[1]),
            }
            if reference is not None:
                pair = FrontPair(obtained=front, reference=reference)
                entry["gd"] = generational_distance(pair)
                entry["spread"] = spread(pair) if front.shape[0] >= 2 else None
            runs.append((result, entry))
        all_results[benchmark_id] = runs
        report["benchmarks"][benchmark_id] = [e for _, e in runs]
    if plan.out_dir is not None:
        out = Path(plan.out_dir)
        front_rows = []
        metric_rows = []
        for benchmark_id, runs in all_results.items():
            for run_idx, (result, entry) in enumerate(runs):
                for x, objs in result.front:
                    front_rows.append(
                        [benchmark_id, run_idx, entry["seed"],
                         ";".join(repr(float(v)) for v in x)]
                        + [float(v) for v in objs]
                    )
                metric_rows.append([
                    benchmark_id, run_idx, entry["seed"], entry.get("gd"),
                    entry.get("spread"), entry["front_size"], entry["n_evaluations"],
                    entry["terminated_by"],
                ])
        max_objs = max(len(row) - 4 for row in front_rows)
        _write_csv(out / "front.csv",
                   ["benchmark", "run", "seed", "x"] + [f"f{i + 1}" for i in range(max_objs)],
                   front_rows)
        _write_csv(out / "moo_metrics.csv",
                   ["benchmark", "run", "seed", "gd", "spread", "front_size",
                    "n_evaluations", "terminated_by"],
                   metric_rows)
        _write_json(out / "moo_report.json", report)
    report["results"] = all_results
    return report
