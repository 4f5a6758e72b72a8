"""Config-driven Monte Carlo harness.

An experiment is a grid of model parameters, a trial count, and a list of
algorithms; every (grid point, trial) pair is an independent work item whose
random streams are addressed by (experiment seed, grid id, trial index), so
results are byte-identical no matter how many worker processes run them or
in which order they finish.  Trial rows stream to CSV in (grid, trial)
order; aggregate statistics go to a JSON summary.  Per-trial wall times are
aggregated into the summary only - they would break CSV reproducibility.
"""

from __future__ import annotations

import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from os import cpu_count
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import bipartization, cuts, textio
from .core import Coloring, RepresentationMatrix, cut_weight, discrepancy
from .sampling import ModelParams, sample_matrix

ALGORITHMS = ("random", "majority", "exact", "mindisc", "bipartize")
REGIMES = ("fixed", "alpha-sweep", "c-sweep")
P_RULES = ("inv_sqrt_nm",)

CSV_SCHEMA_LINE = "# wrig-lab schema 1"
CSV_COLUMNS = (
    "grid_id",
    "trial",
    "n",
    "m",
    "p",
    "seed",
    "total_offdiag",
    "random_weight",
    "random_disc",
    "majority_weight",
    "majority_disc",
    "exact_weight",
    "exact_disc",
    "mindisc_weight",
    "mindisc_disc",
    "bipartize_weight",
    "bipartize_disc",
    "bipartize_terminated",
    "bipartize_iterations",
    "bipartize_label_disjoint",
    "bipartize_zero_strong",
    "bipartize_codd_encounters",
)

# Fraction of trials whose reported weights are re-derived from the
# serialized coloring as a self-check (every 100th trial).
AUDIT_EVERY = 100


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully resolved experiment configuration.

    ``grid`` holds one ModelParams per grid point, already expanded from the
    sweep description in the config file.  ``workers=0`` means one process
    per CPU.
    """

    name: str
    regime: str
    grid: tuple[ModelParams, ...]
    trials: int
    algorithms: tuple[str, ...]
    epsilon: float = 0.0
    seed: int = 0
    max_rematch: Optional[int] = None
    exact_cap: int = cuts.DEFAULT_BRUTE_FORCE_CAP
    output: Optional[str] = None
    summary: Optional[str] = None
    workers: int = 0

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        if not self.grid:
            raise ValueError("experiment grid is empty")
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        if not self.algorithms:
            raise ValueError("no algorithms selected")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}, expected one of {ALGORITHMS}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.workers < 0:
            raise ValueError(f"workers must be >= 0, got {self.workers}")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentSpec":
        known = {
            "name",
            "regime",
            "n",
            "m",
            "p",
            "alpha",
            "c",
            "p_rule",
            "trials",
            "algorithms",
            "epsilon",
            "seed",
            "max_rematch",
            "exact_cap",
            "output",
            "summary",
            "workers",
        }
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        regime = raw.get("regime", "fixed")
        grid = tuple(_expand_grid(regime, raw))
        return cls(
            name=str(raw.get("name", "experiment")),
            regime=regime,
            grid=grid,
            trials=int(raw.get("trials", 1)),
            algorithms=tuple(raw.get("algorithms", ("random",))),
            epsilon=float(raw.get("epsilon", 0.0)),
            seed=int(raw.get("seed", 0)),
            max_rematch=(
                int(raw["max_rematch"]) if raw.get("max_rematch") is not None else None
            ),
            exact_cap=int(raw.get("exact_cap", cuts.DEFAULT_BRUTE_FORCE_CAP)),
            output=raw.get("output"),
            summary=raw.get("summary"),
            workers=int(raw.get("workers", 0)),
        )

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ExperimentSpec":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        return cls.from_dict(raw)


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _expand_grid(regime: str, raw: dict) -> list[ModelParams]:
    if "n" not in raw:
        raise ValueError("config needs an 'n' value or list")
    ns = [int(v) for v in _as_list(raw["n"])]
    points: list[ModelParams] = []
    if regime == "fixed":
        if "m" not in raw or "p" not in raw:
            raise ValueError("fixed regime needs 'm' and 'p'")
        for n in ns:
            for m in _as_list(raw["m"]):
                for p in _as_list(raw["p"]):
                    points.append(ModelParams.fixed(n, int(m), float(p)))
    elif regime == "alpha-sweep":
        if "alpha" not in raw:
            raise ValueError("alpha-sweep regime needs 'alpha'")
        rule = raw.get("p_rule")
        if rule is not None and rule not in P_RULES:
            raise ValueError(f"p_rule must be one of {P_RULES}, got {rule!r}")
        if rule is None and "p" not in raw:
            raise ValueError("alpha-sweep regime needs 'p' or 'p_rule'")
        for n in ns:
            for alpha in _as_list(raw["alpha"]):
                if rule == "inv_sqrt_nm":
                    from .sampling import label_count_for_alpha

                    m = label_count_for_alpha(n, float(alpha))
                    points.append(
                        ModelParams.from_alpha(n, float(alpha), 1.0 / math.sqrt(n * m))
                    )
                else:
                    for p in _as_list(raw["p"]):
                        points.append(ModelParams.from_alpha(n, float(alpha), float(p)))
    else:  # c-sweep
        if "c" not in raw:
            raise ValueError("c-sweep regime needs 'c'")
        for n in ns:
            for c in _as_list(raw["c"]):
                points.append(ModelParams.from_c(n, float(c)))
    return points


@dataclass(frozen=True)
class TrialRecord:
    """One trial's deterministic results plus (non-serialized) wall times."""

    grid_id: int
    trial: int
    n: int
    m: int
    p: float
    seed: int
    total_offdiag: int
    random_weight: Optional[int] = None
    random_disc: Optional[int] = None
    majority_weight: Optional[int] = None
    majority_disc: Optional[int] = None
    exact_weight: Optional[int] = None
    exact_disc: Optional[int] = None
    mindisc_weight: Optional[int] = None
    mindisc_disc: Optional[int] = None
    bipartize_weight: Optional[int] = None
    bipartize_disc: Optional[int] = None
    bipartize_terminated: Optional[bool] = None
    bipartize_iterations: Optional[int] = None
    bipartize_label_disjoint: Optional[bool] = None
    bipartize_zero_strong: Optional[int] = None
    bipartize_codd_encounters: Optional[int] = None
    wall_times: dict[str, float] = field(default_factory=dict, compare=False)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def record_to_csv_row(record: TrialRecord) -> str:
    data = asdict(record)
    return ",".join(_csv_cell(data[column]) for column in CSV_COLUMNS)


def _trial_streams(seed: int, grid_id: int, trial: int) -> tuple[int, int, int, int]:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(grid_id), int(trial)))
    words = ss.generate_state(4, np.uint64)
    return tuple(int(w) for w in words)


def _audit_coloring(R: RepresentationMatrix, coloring: Coloring, weight: int, disc: int):
    restored = textio.parse_coloring(textio.format_coloring(coloring))
    if cut_weight(R, restored) != weight or discrepancy(R, restored) != disc:
        raise RuntimeError("audit failed: recorded weights disagree with the coloring")


def _run_trial(spec: ExperimentSpec, task: tuple[int, int]) -> TrialRecord:
    grid_id, trial = task
    params = spec.grid[grid_id]
    matrix_seed, random_seed, majority_seed, bipartize_seed = _trial_streams(
        spec.seed, grid_id, trial
    )
    R = sample_matrix(params, matrix_seed)
    fields: dict[str, object] = {}
    wall: dict[str, float] = {}
    audit = trial % AUDIT_EVERY == 0

    def run(algo: str, produce) -> None:
        start = time.perf_counter()
        produced = produce()
        wall[algo] = time.perf_counter() - start
        if produced is None:
            return
        coloring, weight = produced
        disc = discrepancy(R, coloring)
        fields[f"{algo}_weight"] = weight
        fields[f"{algo}_disc"] = disc
        if audit:
            _audit_coloring(R, coloring, weight, disc)

    if "random" in spec.algorithms:
        def _random():
            res = cuts.random_cut(R, random_seed)
            return res.coloring, res.weight

        run("random", _random)
    if "majority" in spec.algorithms:
        def _majority():
            cfg = cuts.MajorityConfig(epsilon=spec.epsilon)
            res = cuts.majority_cut(R, cfg, majority_seed)
            return res.coloring, res.weight

        run("majority", _majority)
    if "exact" in spec.algorithms and params.n <= spec.exact_cap:
        def _exact():
            res = cuts.brute_force_max_cut(R, cap=spec.exact_cap)
            return res.coloring, res.weight

        run("exact", _exact)
    if "mindisc" in spec.algorithms and params.n <= spec.exact_cap:
        def _mindisc():
            coloring, _ = cuts.brute_force_min_discrepancy(R, cap=spec.exact_cap)
            return coloring, cut_weight(R, coloring)

        run("mindisc", _mindisc)
    if "bipartize" in spec.algorithms:
        start = time.perf_counter()
        outcome = bipartization.weak_bipartization(
            R, bipartize_seed, max_rematch=spec.max_rematch
        )
        fields["bipartize_terminated"] = outcome.terminated
        fields["bipartize_iterations"] = outcome.iterations
        fields["bipartize_label_disjoint"] = outcome.label_disjoint
        fields["bipartize_zero_strong"] = len(outcome.zero_strong_cycles)
        fields["bipartize_codd_encounters"] = outcome.codd_encounters
        if outcome.terminated:
            coloring = bipartization.extract_coloring(outcome)
            weight = cut_weight(R, coloring)
            disc = discrepancy(R, coloring)
            fields["bipartize_weight"] = weight
            fields["bipartize_disc"] = disc
            if audit:
                _audit_coloring(R, coloring, weight, disc)
        wall["bipartize"] = time.perf_counter() - start

    return TrialRecord(
        grid_id=grid_id,
        trial=trial,
        n=params.n,
        m=params.m,
        p=params.p,
        seed=matrix_seed,
        total_offdiag=R.entry_sum() - R.diagonal_sum(),
        wall_times=wall,
        **fields,
    )


def run_experiment(
    spec: ExperimentSpec, *, workers: Optional[int] = None
) -> tuple[list[TrialRecord], "SummaryStats"]:
    """Execute every (grid point, trial) work item and aggregate statistics.

    Records stream to ``spec.output`` (CSV) in (grid, trial) order as they
    arrive; the summary goes to ``spec.summary`` (JSON).  Output bytes are
    invariant to the worker count.
    """
    for point in spec.grid:
        message = point.regime_warning()
        if message is not None:
            warnings.warn(message, stacklevel=2)

    count = workers if workers is not None else spec.workers
    if count == 0:
        count = cpu_count() or 1
    tasks = [
        (grid_id, trial)
        for grid_id in range(len(spec.grid))
        for trial in range(spec.trials)
    ]

    out = None
    if spec.output:
        out = Path(spec.output).open("w", encoding="utf-8", newline="\n")
        out.write(CSV_SCHEMA_LINE + "\n")
        out.write(",".join(CSV_COLUMNS) + "\n")

    records: list[TrialRecord] = []
    try:
        if count <= 1:
            produced: Iterable[TrialRecord] = (_run_trial(spec, task) for task in tasks)
            for record in produced:
                records.append(record)
                if out is not None:
                    out.write(record_to_csv_row(record) + "\n")
        else:
            chunk = max(1, len(tasks) // (count * 8))
            with ProcessPoolExecutor(max_workers=count) as pool:
                for record in pool.map(_run_trial, [spec] * len(tasks), tasks, chunksize=chunk):
                    records.append(record)
                    if out is not None:
                        out.write(record_to_csv_row(record) + "\n")
    finally:
        if out is not None:
            out.close()

    stats = summarize(records, name=spec.name)
    if spec.summary:
        write_summary(stats, spec.summary)
    return records, stats


@dataclass(frozen=True)
class ValueStats:
    """Moments of one metric over the trials of a grid point."""

    count: int
    mean: float
    variance: float
    variance_defined: bool
    stderr: float
    min: float
    max: float


@dataclass(frozen=True)
class AlgoStats:
    """Per-algorithm weight statistics, plus offdiag-normalized ones."""

    weight: ValueStats
    normalized_mean: Optional[float]
    normalized_cv: Optional[float]
    mean_wall_time: Optional[float]


@dataclass(frozen=True)
class GridStats:
    grid_id: int
    n: int
    m: int
    p: float
    trials: int
    offdiag: ValueStats
    offdiag_cv: Optional[float]
    algorithms: dict[str, AlgoStats]
    ratios: dict[str, float]
    concentration_target: Optional[str]
    concentration: Optional[float]
    termination_fraction: Optional[float]
    label_disjoint_fraction: Optional[float]
    mean_iterations: Optional[float]


@dataclass(frozen=True)
class SummaryStats:
    name: str
    schema: str
    grid: tuple[GridStats, ...]


def _value_stats(values: Sequence[float]) -> ValueStats:
    count = len(values)
    mean = sum(values) / count
    if count > 1:
        variance = sum((v - mean) ** 2 for v in values) / (count - 1)
        defined = True
    else:
        variance, defined = 0.0, False
    return ValueStats(
        count=count,
        mean=mean,
        variance=variance,
        variance_defined=defined,
        stderr=math.sqrt(variance / count),
        min=min(values),
        max=max(values),
    )


def _cv(stats: ValueStats) -> Optional[float]:
    if stats.mean == 0:
        return None
    return math.sqrt(stats.variance) / stats.mean


def summarize(records: Sequence[TrialRecord], name: str = "") -> SummaryStats:
    """Aggregate trial records into per-grid-point, per-algorithm statistics.

    Ratio fields are left out wherever their denominators are missing;
    variance uses the n-1 denominator.
    """
    if not records:
        raise ValueError("cannot summarize zero records")
    by_grid: dict[int, list[TrialRecord]] = {}
    for record in records:
        by_grid.setdefault(record.grid_id, []).append(record)

    grid_stats = []
    for grid_id in sorted(by_grid):
        rows = by_grid[grid_id]
        first = rows[0]
        offdiag = _value_stats([r.total_offdiag for r in rows])

        algo_stats: dict[str, AlgoStats] = {}
        means: dict[str, float] = {}
        for algo in ALGORITHMS:
            weights = [
                getattr(r, f"{algo}_weight")
                for r in rows
                if getattr(r, f"{algo}_weight") is not None
            ]
            if not weights:
                continue
            vs = _value_stats(weights)
            normalized = [
                getattr(r, f"{algo}_weight") / r.total_offdiag
                for r in rows
                if getattr(r, f"{algo}_weight") is not None and r.total_offdiag > 0
            ]
            norm_stats = _value_stats(normalized) if normalized else None
            times = [r.wall_times[algo] for r in rows if algo in r.wall_times]
            algo_stats[algo] = AlgoStats(
                weight=vs,
                normalized_mean=norm_stats.mean if norm_stats else None,
                normalized_cv=_cv(norm_stats) if norm_stats else None,
                mean_wall_time=sum(times) / len(times) if times else None,
            )
            means[algo] = vs.mean

        ratios: dict[str, float] = {}
        if "random" in means and "exact" in means and means["exact"] != 0:
            ratios["random_over_exact"] = means["random"] / means["exact"]
        if "majority" in means and "random" in means and means["random"] != 0:
            ratios["majority_over_random"] = means["majority"] / means["random"]
            ratios["beta_hat"] = ratios["majority_over_random"] - 1.0
        # Concentration proxy Var(W)/E[W]^2 for the strongest available cut.
        target = next((a for a in ("exact", "majority", "random") if a in algo_stats), None)
        concentration = None
        if target is not None and means[target] != 0:
            concentration = algo_stats[target].weight.variance / means[target] ** 2

        terminated = [r.bipartize_terminated for r in rows if r.bipartize_terminated is not None]
        disjoint = [r.bipartize_label_disjoint for r in rows if r.bipartize_label_disjoint is not None]
        iterations = [r.bipartize_iterations for r in rows if r.bipartize_iterations is not None]
        grid_stats.append(
            GridStats(
                grid_id=grid_id,
                n=first.n,
                m=first.m,
                p=first.p,
                trials=len(rows),
                offdiag=offdiag,
                offdiag_cv=_cv(offdiag),
                algorithms=algo_stats,
                ratios=ratios,
                concentration_target=target,
                concentration=concentration,
                termination_fraction=(
                    sum(terminated) / len(terminated) if terminated else None
                ),
                label_disjoint_fraction=(
                    sum(disjoint) / len(disjoint) if disjoint else None
                ),
                mean_iterations=(
                    sum(iterations) / len(iterations) if iterations else None
                ),
            )
        )
    return SummaryStats(name=name, schema="wrig-lab summary 1", grid=tuple(grid_stats))


def write_summary(stats: SummaryStats, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(asdict(stats), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
