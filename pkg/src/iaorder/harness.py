"""Reproducible Monte-Carlo experiment driver.

A sweep runs the requested ordering algorithms over independent channel
realizations at every SNR point, recording the criterion metric under the
chosen ordering, and aggregates mean and standard error per
(SNR, algorithm) pair. Realizations are independent work items; the worker
count comes from the ``IAORDER_THREADS`` environment variable and never
changes results, because every realization is seeded independently and the
reduction is ordered by realization index.

CSV outputs are part of the regression contract: exact header strings,
9 significant digits, '.' decimal separator, LF line endings.
"""

import concurrent.futures
import os
from dataclasses import dataclass

import numpy as np

from .allocation import allocate_ici
from .channels import (
    Ordering,
    SimulationParams,
    SystemConfig,
    derive_seed,
    generate_channels,
    validate_config,
)
from .errors import ConfigInvalidError
from .search import (
    CRITERIA,
    OrderingDesignCache,
    alternating_search,
    exhaustive_search,
    objective,
)

__all__ = [
    "ALGORITHMS",
    "ExperimentSpec",
    "RunRecord",
    "SweepRow",
    "SweepResult",
    "CdfRow",
    "CdfResult",
    "run_sweep",
    "run_cdf",
    "snr_at_level",
    "gain_db",
    "worker_count",
]

ALGORITHMS = ("natural", "alternating", "exhaustive")

SWEEP_HEADER = "snr_db,algorithm,criterion,metric_mean,metric_stderr,realizations,mean_tested"
CDF_HEADER = "snr_db,tested_designs,count,cum_fraction"


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything that determines a sweep byte-for-byte."""

    config: SystemConfig
    snr_db: tuple[float, ...]
    realizations: int
    base_seed: int
    criterion: str = "max-sum"
    algorithms: tuple[str, ...] = ALGORITHMS
    theta_cap_multiplier: int = 10

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))


def _validate_spec(spec: ExperimentSpec) -> None:
    validate_config(spec.config)
    if spec.realizations < 1:
        raise ConfigInvalidError(f"realizations must be >= 1, got {spec.realizations}")
    if not spec.snr_db:
        raise ConfigInvalidError("snr_db must not be empty")
    if not spec.algorithms:
        raise ConfigInvalidError("algorithms must not be empty")
    for algo in spec.algorithms:
        if algo not in ALGORITHMS:
            raise ConfigInvalidError(
                f"unknown algorithm {algo!r}; choose from {ALGORITHMS}"
            )
    if spec.criterion not in CRITERIA:
        raise ConfigInvalidError(
            f"criterion must be one of {CRITERIA}, got {spec.criterion!r}"
        )
    if spec.theta_cap_multiplier < 1:
        raise ConfigInvalidError(
            f"theta_cap_multiplier must be >= 1, got {spec.theta_cap_multiplier}"
        )


@dataclass
class RunRecord:
    """One (realization, SNR, algorithm) outcome."""

    snr_db: float
    algorithm: str
    realization: int
    metric: float
    tested: int
    objective_trace: list[float] | None = None
    theta_term: int | None = None
    lambda_term: int | None = None
    j_term: int | None = None
    converged: bool = False


@dataclass(frozen=True)
class SweepRow:
    snr_db: float
    algorithm: str
    criterion: str
    metric_mean: float
    metric_stderr: float
    realizations: int
    mean_tested: float


def _fmt(x: float) -> str:
    return f"{x:.9g}"


@dataclass
class SweepResult:
    """Aggregated sweep rows plus the per-realization records behind them."""

    spec: ExperimentSpec
    rows: list[SweepRow]
    records: list[RunRecord]

    def to_csv_text(self) -> str:
        lines = [SWEEP_HEADER]
        for r in self.rows:
            lines.append(
                ",".join(
                    (
                        _fmt(r.snr_db),
                        r.algorithm,
                        r.criterion,
                        _fmt(r.metric_mean),
                        _fmt(r.metric_stderr),
                        str(r.realizations),
                        _fmt(r.mean_tested),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_csv_text())


@dataclass(frozen=True)
class CdfRow:
    snr_db: float
    tested_designs: int
    count: int
    cum_fraction: float


@dataclass
class CdfResult:
    """Empirical distribution of the alternating search's tested counts."""

    spec: ExperimentSpec
    rows: list[CdfRow]
    records: list[RunRecord]

    def to_csv_text(self) -> str:
        lines = [CDF_HEADER]
        for r in self.rows:
            lines.append(
                ",".join(
                    (
                        _fmt(r.snr_db),
                        str(r.tested_designs),
                        str(r.count),
                        _fmt(r.cum_fraction),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_csv_text())


def _run_realization(spec: ExperimentSpec, plan, r: int) -> list[RunRecord]:
    ch = generate_channels(spec.config, derive_seed(spec.base_seed, r))
    cache = OrderingDesignCache(ch, plan)
    identity = Ordering.identity(spec.config.users_per_cell)
    cap = spec.theta_cap_multiplier * spec.config.cells
    records = []
    for snr in spec.snr_db:
        params = SimulationParams(snr)
        for algo in spec.algorithms:
            if algo == "natural":
                metric = objective(cache.evaluation(identity, params), spec.criterion)
                records.append(RunRecord(snr, algo, r, metric, 1))
            elif algo == "alternating":
                tr = alternating_search(
                    ch, plan, spec.criterion, params, theta_cap=cap, cache=cache
                )
                records.append(
                    RunRecord(
                        snr,
                        algo,
                        r,
                        tr.objective_trace[-1],
                        tr.tested,
                        objective_trace=tr.objective_trace,
                        theta_term=tr.theta_term,
                        lambda_term=tr.lambda_term,
                        j_term=tr.j_term,
                        converged=tr.converged,
                    )
                )
            else:
                tr = exhaustive_search(ch, plan, spec.criterion, params, cache=cache)
                records.append(
                    RunRecord(snr, algo, r, tr.objective_trace[-1], tr.tested)
                )
    return records


def worker_count() -> int:
    """Parallelism from ``IAORDER_THREADS`` (default 1, never semantics)."""
    raw = os.environ.get("IAORDER_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigInvalidError(f"IAORDER_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigInvalidError(f"IAORDER_THREADS must be >= 1, got {n}")
    return n


def _all_records(spec: ExperimentSpec, plan) -> list[RunRecord]:
    workers = worker_count()
    indices = range(spec.realizations)
    if workers == 1 or spec.realizations == 1:
        batches = [_run_realization(spec, plan, r) for r in indices]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, spec.realizations // (workers * 4))
            batches = list(
                pool.map(
                    _run_realization,
                    (spec for _ in indices),
                    (plan for _ in indices),
                    indices,
                    chunksize=chunk,
                )
            )
    # reduction ordered by realization index regardless of worker timing
    return [rec for batch in batches for rec in batch]


def run_sweep(spec: ExperimentSpec) -> SweepResult:
    """Run the sweep described by ``spec``; deterministic function of it.

    Any configuration or allocation error propagates before computation
    starts, so partial results are never produced.
    """
    _validate_spec(spec)
    plan = allocate_ici(spec.config)
    records = _all_records(spec, plan)
    by_key: dict = {}
    for rec in records:
        by_key.setdefault((rec.snr_db, rec.algorithm), []).append(rec)
    rows = []
    for snr in spec.snr_db:
        for algo in spec.algorithms:
            recs = by_key[(snr, algo)]
            metrics = np.array([r.metric for r in recs])
            n = len(recs)
            stderr = float(metrics.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
            rows.append(
                SweepRow(
                    snr_db=snr,
                    algorithm=algo,
                    criterion=spec.criterion,
                    metric_mean=float(metrics.mean()),
                    metric_stderr=stderr,
                    realizations=n,
                    mean_tested=float(np.mean([r.tested for r in recs])),
                )
            )
    return SweepResult(spec=spec, rows=rows, records=records)


def run_cdf(spec: ExperimentSpec) -> CdfResult:
    """Empirical CDF of the alternating search's tested-design counts."""
    if "alternating" not in spec.algorithms:
        raise ConfigInvalidError("run_cdf requires 'alternating' in spec.algorithms")
    sweep = run_sweep(spec)
    alt = [r for r in sweep.records if r.algorithm == "alternating"]
    rows = []
    for snr in spec.snr_db:
        counts: dict[int, int] = {}
        for rec in alt:
            if rec.snr_db == snr:
                counts[rec.tested] = counts.get(rec.tested, 0) + 1
        total = sum(counts.values())
        running = 0
        for tested in sorted(counts):
            running += counts[tested]
            rows.append(CdfRow(snr, tested, counts[tested], running / total))
    return CdfResult(spec=spec, rows=rows, records=alt)


def snr_at_level(result: SweepResult, algorithm: str, level: float) -> float:
    """SNR (dB) at which ``algorithm``'s mean metric crosses ``level``,
    by linear interpolation of the metric-vs-SNR curve."""
    pts = sorted(
        ((r.snr_db, r.metric_mean) for r in result.rows if r.algorithm == algorithm)
    )
    if not pts:
        raise ValueError(f"no rows for algorithm {algorithm!r}")
    snrs = np.array([p[0] for p in pts])
    metrics = np.array([p[1] for p in pts])
    if not (metrics.min() <= level <= metrics.max()):
        raise ValueError(
            f"metric level {level} outside the swept range "
            f"[{metrics.min():.6g}, {metrics.max():.6g}] for {algorithm!r}"
        )
    return float(np.interp(level, metrics, snrs))


def gain_db(
    result: SweepResult,
    level: float,
    baseline: str = "natural",
    improved: str = "alternating",
) -> float:
    """Horizontal dB gain of ``improved`` over ``baseline`` at a metric level
    (positive when ``improved`` needs less SNR to reach the level)."""
    return snr_at_level(result, baseline, level) - snr_at_level(result, improved, level)
