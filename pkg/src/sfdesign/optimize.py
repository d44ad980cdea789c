"""Stochastic optimization of Latin hypercube samples by elementary swaps.

Three schedules share one move type (exchange two entries within one
column) and one Metropolis acceptance rule on a minimization objective:

* geometric annealing: temperature ``T = c^i * t0`` at proposal ``i``;
* plateau annealing: ``T`` shrinks by ``c`` only after ``i_max``
  consecutive proposals without a new best, and the run stops early
  once no proposal at all was accepted during the last ``i_max``;
* nested search: inner loops of ``m_inner`` iterations, each scoring
  ``j_candidates`` candidate swaps in a deterministically cycled column
  and Metropolis-testing the best one, with the temperature adapted to
  each inner loop's acceptance ratio (it can rise as well as fall).

Criteria that are maximized (minimum pairwise distance) are negated so
the same machinery serves all criteria.  Progress is recorded as traces
of (perturbation count, current value, best value, temperature) in the
criterion's native units.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .criteria import CriterionSpec, CriterionValue, Direction, evaluate
from .design import LhsDesign, default_rng, validate_lhs
from .incremental import SwapDeltaState, init_swap_state

__all__ = [
    "Algorithm",
    "CompareReport",
    "CompareScenario",
    "CompareVariant",
    "OptimizationResult",
    "OptimizationTrace",
    "OptimizerConfig",
    "Termination",
    "TraceRecord",
    "compare_optimizers",
    "optimize",
    "optimize_ese",
    "optimize_geometric_sa",
    "optimize_mm_sa",
]


class Algorithm(enum.Enum):
    GEOMETRIC_SA = "geometric-sa"
    MORRIS_MITCHELL_SA = "mm-sa"
    ESE = "ese"


class Termination(enum.Enum):
    BUDGET_EXHAUSTED = "BudgetExhausted"
    STALLED = "Stalled"


@dataclass(frozen=True)
class OptimizerConfig:
    """Shared parameter bag for all three schedules.

    ``t0`` must be given for the annealing schedules; the nested search
    derives ``0.005 * |f(initial)|`` when it is absent.  ``q_outer`` is
    derived from the budget when absent.
    """

    algorithm: Algorithm
    budget: int
    seed: int
    t0: float | None = None
    c: float = 0.95
    i_max: int = 300
    m_inner: int = 100
    j_candidates: int = 50
    q_outer: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.algorithm, str):
            object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"c must be in (0, 1), got {self.c}")
        for name in ("i_max", "m_inner", "j_candidates"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.q_outer is not None and self.q_outer < 1:
            raise ValueError(f"q_outer must be >= 1, got {self.q_outer}")
        if self.t0 is not None and not self.t0 > 0.0:
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if self.t0 is None and self.algorithm is not Algorithm.ESE:
            raise ValueError(f"{self.algorithm.value} requires t0")

    def echo(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm.value,
            "budget": self.budget,
            "seed": self.seed,
            "t0": self.t0,
            "c": self.c,
            "i_max": self.i_max,
            "m_inner": self.m_inner,
            "j_candidates": self.j_candidates,
            "q_outer": self.q_outer,
        }


@dataclass(frozen=True)
class TraceRecord:
    perturbations: int
    current: float
    best: float
    temperature: float
    report: float | None = None


@dataclass(frozen=True)
class OptimizationTrace:
    records: tuple[TraceRecord, ...]
    metadata: dict[str, Any]

    def to_csv_text(self) -> str:
        lines = ["perturbations,current,best,temperature"]
        for r in self.records:
            lines.append(
                f"{r.perturbations},{r.current:.17g},{r.best:.17g},{r.temperature:.17g}"
            )
        return "\n".join(lines) + "\n"

    def metadata_json(self) -> str:
        return json.dumps(self.metadata, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class OptimizationResult:
    best_design: LhsDesign
    best_value: CriterionValue
    trace: OptimizationTrace
    termination: Termination
    # (perturbation_count, best design coordinates) pairs, only when a
    # snapshot interval was requested; used for diagnostics over time
    snapshots: tuple[tuple[int, np.ndarray], ...] = ()


def _matrix_digest(m: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(m).tobytes()).hexdigest()


class _Run:
    """Mutable bookkeeping shared by the three schedule loops."""

    def __init__(
        self,
        initial: LhsDesign,
        spec: CriterionSpec,
        config: OptimizerConfig,
        report_spec: CriterionSpec | None,
        snapshot_interval: int | None = None,
    ) -> None:
        ok, violations = validate_lhs(initial)
        if not ok:
            raise ValueError(f"initial design is not a valid LHS: {violations[0]}")
        self.spec = spec
        self.config = config
        self.report_spec = report_spec
        self.sign = -1.0 if spec.direction is Direction.MAXIMIZE else 1.0
        self.state: SwapDeltaState = init_swap_state(initial.matrix, spec)
        self.rng = default_rng(config.seed)
        self.n, self.d = initial.n, initial.d
        self.perms = initial.permutations.copy()
        self.variant = initial.variant
        self.f = self.sign * self.state.value
        self.best_f = self.f
        self.best_matrix = np.array(self.state.matrix, copy=True)
        self.best_perms = self.perms.copy()
        self.count = 0
        self.interval = max(1, config.budget // 1000)
        self._next_checkpoint = self.interval
        self.records: list[TraceRecord] = []
        self._report_cache: float | None = None
        self._report_dirty = True
        self.snapshots: list[tuple[int, np.ndarray]] = []
        self._snap_interval = snapshot_interval
        self._next_snap = snapshot_interval if snapshot_interval else 0
        if snapshot_interval:
            self.snapshots.append((0, self.best_matrix.copy()))
        self.initial_digest = _matrix_digest(initial.matrix)
        self.started = time.perf_counter()

    # -- proposals ----------------------------------------------------------

    def draw_pair(self) -> tuple[int, int]:
        a = int(self.rng.integers(self.n))
        b = int(self.rng.integers(self.n - 1))
        if b >= a:
            b += 1
        return a, b

    def draw_col(self) -> int:
        return int(self.rng.integers(self.d))

    def metropolis(self, delta: float, temperature: float) -> bool:
        if delta <= 0.0:
            return True
        if temperature <= 0.0:
            return False
        return bool(self.rng.random() < math.exp(-delta / temperature))

    # -- state updates ------------------------------------------------------

    def commit(self, col: int, a: int, b: int) -> bool:
        """Apply an accepted swap; returns True when it sets a new best."""
        self.f = self.sign * self.state.commit(col, a, b)
        p = self.perms
        p[a, col], p[b, col] = p[b, col], p[a, col]
        if self.f < self.best_f:
            self.best_f = self.f
            np.copyto(self.best_matrix, self.state.matrix)
            np.copyto(self.best_perms, self.perms)
            self._report_dirty = True
            return True
        return False

    # -- trace --------------------------------------------------------------

    def _report_value(self) -> float | None:
        if self.report_spec is None:
            return None
        if self._report_dirty:
            self._report_cache = evaluate(self.best_matrix, self.report_spec).value
            self._report_dirty = False
        return self._report_cache

    def record(self, temperature: float, force: bool = False) -> None:
        if self._snap_interval and self.count >= self._next_snap:
            self.snapshots.append((self.count, self.best_matrix.copy()))
            self._next_snap = (
                self.count // self._snap_interval + 1
            ) * self._snap_interval
        if not force and self.count < self._next_checkpoint:
            return
        if self.records and self.records[-1].perturbations == self.count:
            return
        self.records.append(
            TraceRecord(
                perturbations=self.count,
                current=self.sign * self.f,
                best=self.sign * self.best_f,
                temperature=temperature,
                report=self._report_value(),
            )
        )
        if self.count >= self._next_checkpoint:
            self._next_checkpoint = (self.count // self.interval + 1) * self.interval

    def finish(self, temperature: float, termination: Termination) -> OptimizationResult:
        self.record(temperature, force=True)
        if self._snap_interval and self.snapshots[-1][0] != self.count:
            self.snapshots.append((self.count, self.best_matrix.copy()))
        best_design = LhsDesign(self.best_matrix, self.best_perms, self.variant)
        best_value = evaluate(best_design, self.spec)
        metadata = {
            "config": self.config.echo(),
            "criterion": {"criterion": self.spec.label, "p": self.spec.p},
            "seed": self.config.seed,
            "initial_digest": self.initial_digest,
            "final_digest": _matrix_digest(self.best_matrix),
            "termination": termination.value,
            "traced_best": self.sign * self.best_f,
            "wall_time_s": time.perf_counter() - self.started,
        }
        if self.report_spec is not None:
            metadata["report_criterion"] = {
                "criterion": self.report_spec.label,
                "p": self.report_spec.p,
            }
        trace = OptimizationTrace(records=tuple(self.records), metadata=metadata)
        return OptimizationResult(
            best_design=best_design,
            best_value=best_value,
            trace=trace,
            termination=termination,
            snapshots=tuple(self.snapshots),
        )


def optimize_geometric_sa(
    initial: LhsDesign,
    spec: CriterionSpec,
    config: OptimizerConfig,
    report_spec: CriterionSpec | None = None,
    snapshot_interval: int | None = None,
) -> OptimizationResult:
    """Annealing with the temperature law ``T = c^i * t0`` per proposal.

    Fast cooling loses too much mobility when there are many columns to
    untangle, hence the warning for small ``c`` in high dimension.
    """
    if config.c < 0.95 and initial.d > 20:
        warnings.warn(
            f"cooling ratio c={config.c} is aggressive for d={initial.d} columns; "
            "ratios below 0.95 freeze the search early in high dimension",
            UserWarning,
            stacklevel=2,
        )
    run = _Run(initial, spec, config, report_spec, snapshot_interval)
    assert config.t0 is not None
    temperature = config.t0
    run.record(temperature, force=True)
    for i in range(1, config.budget + 1):
        temperature = config.t0 * config.c**i
        col = run.draw_col()
        a, b = run.draw_pair()
        f_new = run.sign * run.state.peek(col, a, b)
        new_best = False
        if run.metropolis(f_new - run.f, temperature):
            new_best = run.commit(col, a, b)
        run.count = i
        run.record(temperature, force=new_best)
    return run.finish(temperature, Termination.BUDGET_EXHAUSTED)


def optimize_mm_sa(
    initial: LhsDesign,
    spec: CriterionSpec,
    config: OptimizerConfig,
    report_spec: CriterionSpec | None = None,
    snapshot_interval: int | None = None,
) -> OptimizationResult:
    """Annealing with plateau-triggered cooling and a stall stop.

    The temperature drops (by factor ``c``) only after ``i_max``
    consecutive proposals fail to improve the best value; the run ends
    early when no proposal at all was accepted during the last
    ``i_max`` proposals.
    """
    run = _Run(initial, spec, config, report_spec, snapshot_interval)
    assert config.t0 is not None
    temperature = config.t0
    run.record(temperature, force=True)
    plateau = 0
    last_accept = 0
    termination = Termination.BUDGET_EXHAUSTED
    for i in range(1, config.budget + 1):
        col = run.draw_col()
        a, b = run.draw_pair()
        f_new = run.sign * run.state.peek(col, a, b)
        new_best = False
        if run.metropolis(f_new - run.f, temperature):
            new_best = run.commit(col, a, b)
            last_accept = i
        run.count = i
        if new_best:
            plateau = 0
        else:
            plateau += 1
            if plateau >= config.i_max:
                temperature *= config.c
                plateau = 0
        run.record(temperature, force=new_best)
        if i - last_accept >= config.i_max:
            termination = Termination.STALLED
            break
    return run.finish(temperature, termination)


def optimize_ese(
    initial: LhsDesign,
    spec: CriterionSpec,
    config: OptimizerConfig,
    report_spec: CriterionSpec | None = None,
    snapshot_interval: int | None = None,
) -> OptimizationResult:
    """Nested candidate search with an acceptance-ratio-driven temperature.

    Each inner iteration scores ``j_candidates`` distinct swaps in one
    column (columns cycle in order across inner iterations), then
    Metropolis-tests the best candidate against the current design.
    After an inner loop of ``m_inner`` iterations the temperature is
    re-tuned: while the best value is improving it is pushed toward a
    moderate acceptance ratio, and on plateaus it is raised to escape.
    """
    run = _Run(initial, spec, config, report_spec, snapshot_interval)
    j_cand = config.j_candidates
    m_inner = config.m_inner
    if config.t0 is not None:
        temperature = config.t0
    else:
        temperature = 0.005 * abs(run.f)
        if temperature == 0.0:
            temperature = 1e-12
    per_outer = m_inner * j_cand
    if config.q_outer is not None:
        q_outer = config.q_outer
    else:
        q_outer = max(1, config.budget // per_outer)
    run.record(temperature, force=True)
    inner_index = 0
    out_of_budget = False
    for _q in range(q_outer):
        accepted = 0
        improved = False
        inner_done = 0
        for _m in range(m_inner):
            if config.budget - run.count < j_cand:
                out_of_budget = True
                break
            col = inner_index % run.d
            inner_index += 1
            aa, bb = _draw_candidate_pairs(run, j_cand)
            values = run.sign * run.state.peek_many(col, aa, bb)
            run.count += j_cand
            pick = int(np.argmin(values))
            new_best = False
            if run.metropolis(float(values[pick]) - run.f, temperature):
                new_best = run.commit(col, int(aa[pick]), int(bb[pick]))
                accepted += 1
            if new_best:
                improved = True
            inner_done += 1
            run.record(temperature, force=new_best)
        if out_of_budget:
            break
        ratio = accepted / inner_done if inner_done else 0.0
        if improved:
            if ratio > 0.1:
                temperature *= 0.8
            else:
                temperature /= 0.8
        else:
            if ratio < 0.1:
                temperature /= 0.7
            elif ratio > 0.8:
                temperature *= 0.9
    return run.finish(temperature, Termination.BUDGET_EXHAUSTED)


def _draw_candidate_pairs(run: _Run, count: int) -> tuple[np.ndarray, np.ndarray]:
    # distinct unordered row pairs; duplicates redrawn a few times, then kept
    aa = np.empty(count, dtype=np.intp)
    bb = np.empty(count, dtype=np.intp)
    seen: set[tuple[int, int]] = set()
    for j in range(count):
        a, b = run.draw_pair()
        key = (a, b) if a < b else (b, a)
        attempts = 0
        while key in seen and attempts < 10:
            a, b = run.draw_pair()
            key = (a, b) if a < b else (b, a)
            attempts += 1
        seen.add(key)
        aa[j] = a
        bb[j] = b
    return aa, bb


_DISPATCH = {
    Algorithm.GEOMETRIC_SA: optimize_geometric_sa,
    Algorithm.MORRIS_MITCHELL_SA: optimize_mm_sa,
    Algorithm.ESE: optimize_ese,
}


def optimize(
    initial: LhsDesign,
    spec: CriterionSpec,
    config: OptimizerConfig,
    report_spec: CriterionSpec | None = None,
    snapshot_interval: int | None = None,
) -> OptimizationResult:
    """Run the schedule selected by ``config.algorithm``."""
    return _DISPATCH[config.algorithm](
        initial, spec, config, report_spec, snapshot_interval
    )


# --- replicated comparisons -------------------------------------------------


@dataclass(frozen=True)
class CompareVariant:
    """One labeled (criterion, configuration) arm of a comparison."""

    label: str
    spec: CriterionSpec
    config: OptimizerConfig


@dataclass(frozen=True)
class CompareScenario:
    """Replicated head-to-head comparison of optimizer variants.

    Every variant at replicate ``r`` starts from the same initial design
    (seeded ``seed + r``) and runs with the same optimizer seed, so the
    comparison is paired.  ``report`` selects the common metric traced
    across variants (defaults to each variant's own criterion when
    absent).
    """

    n: int
    d: int
    variants: tuple[CompareVariant, ...]
    replicates: int
    seed: int
    report: CriterionSpec | None = None
    checkpoints: int = 100

    def __post_init__(self) -> None:
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not self.variants:
            raise ValueError("need at least one variant")
        labels = [v.label for v in self.variants]
        if len(set(labels)) != len(labels):
            raise ValueError(f"variant labels must be unique, got {labels}")


@dataclass(frozen=True)
class CompareRow:
    checkpoint: int
    variant: str
    q05: float
    q25: float
    q50: float
    q75: float
    q95: float


@dataclass(frozen=True)
class CompareReport:
    scenario: CompareScenario
    paired: bool
    checkpoint_grid: tuple[int, ...]
    rows: tuple[CompareRow, ...]
    final_values: dict[str, tuple[float, ...]]

    def to_csv_text(self) -> str:
        lines = ["checkpoint,variant,q05,q25,q50,q75,q95"]
        for r in self.rows:
            lines.append(
                f"{r.checkpoint},{r.variant},{r.q05:.17g},{r.q25:.17g},"
                f"{r.q50:.17g},{r.q75:.17g},{r.q95:.17g}"
            )
        return "\n".join(lines) + "\n"


def _trace_step_values(
    trace: OptimizationTrace, grid: Sequence[int], use_report: bool
) -> np.ndarray:
    counts = np.array([r.perturbations for r in trace.records])
    if use_report:
        vals = np.array([r.report for r in trace.records], dtype=float)
    else:
        vals = np.array([r.best for r in trace.records])
    idx = np.searchsorted(counts, np.asarray(grid), side="right") - 1
    idx = np.clip(idx, 0, len(counts) - 1)
    return vals[idx]


def compare_optimizers(scenario: CompareScenario, jobs: int = 1) -> CompareReport:
    """Run all variants over paired replicates and tabulate quantiles.

    Traces are aligned on a common perturbation-count grid by stepping
    each trace's last known value forward; per checkpoint and variant,
    the 5/25/50/75/95 percent quantiles across replicates are reported.
    """
    from .design import generate_random_lhs

    budget = min(v.config.budget for v in scenario.variants)
    k = min(scenario.checkpoints, budget)
    grid = np.unique(np.linspace(budget / k, budget, k).astype(int))
    use_report = scenario.report is not None

    def run_one(r: int, variant: CompareVariant) -> OptimizationTrace:
        initial = generate_random_lhs(scenario.n, scenario.d, scenario.seed + r)
        config_r = OptimizerConfig(
            algorithm=variant.config.algorithm,
            budget=variant.config.budget,
            seed=scenario.seed + r,
            t0=variant.config.t0,
            c=variant.config.c,
            i_max=variant.config.i_max,
            m_inner=variant.config.m_inner,
            j_candidates=variant.config.j_candidates,
            q_outer=variant.config.q_outer,
        )
        result = optimize(initial, variant.spec, config_r, scenario.report)
        return result.trace

    tasks = [
        (r, vi) for r in range(scenario.replicates) for vi in range(len(scenario.variants))
    ]
    traces: dict[tuple[int, int], OptimizationTrace] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = {
                pool.submit(run_one, r, scenario.variants[vi]): (r, vi)
                for r, vi in tasks
            }
            for fut, key in futs.items():
                traces[key] = fut.result()
    else:
        for r, vi in tasks:
            traces[(r, vi)] = run_one(r, scenario.variants[vi])

    rows: list[CompareRow] = []
    final_values: dict[str, tuple[float, ...]] = {}
    per_variant_series: dict[int, np.ndarray] = {}
    for vi, variant in enumerate(scenario.variants):
        series = np.vstack(
            [
                _trace_step_values(traces[(r, vi)], grid, use_report)
                for r in range(scenario.replicates)
            ]
        )
        per_variant_series[vi] = series
        final_values[variant.label] = tuple(float(x) for x in series[:, -1])
    for gi, cp in enumerate(grid):
        for vi, variant in enumerate(scenario.variants):
            q = np.quantile(per_variant_series[vi][:, gi], [0.05, 0.25, 0.5, 0.75, 0.95])
            rows.append(
                CompareRow(
                    checkpoint=int(cp),
                    variant=variant.label,
                    q05=float(q[0]),
                    q25=float(q[1]),
                    q50=float(q[2]),
                    q75=float(q[3]),
                    q95=float(q[4]),
                )
            )
    return CompareReport(
        scenario=scenario,
        paired=True,
        checkpoint_grid=tuple(int(c) for c in grid),
        rows=tuple(rows),
        final_values=final_values,
    )
