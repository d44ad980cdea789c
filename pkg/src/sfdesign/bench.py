"""Plot-ready benchmark datasets for the figure renderer.

Each benchmark runs one named scenario at the requested scale and
writes a single CSV plus a ``manifest.json`` into the output
directory.  The CSV file is named after the figure id
(``fig9`` writes ``fig9.csv``) and the renderer consumes these
schemas verbatim.

Schemas
-------
fig4 to fig7, convergence comparisons::

    checkpoint,variant,q05,q25,q50,q75,q95

fig8, tree-length statistics traced along two optimizations::

    checkpoint,variant,m_mean,sigma_mean

fig9 to fig14, two-dimensional subprojection box grids::

    panel,d,min,q25,q50,q75,max

Scenario table
--------------
Desk scale keeps every scenario shape but cuts replicates, budgets
and the dimension grid so a full pass stays laptop-sized; full scale
restores the production settings.

======  ==================================================================
figure  scenario (desk -> full)
======  ==================================================================
fig4    nested search driven by phip vs by mindist directly, minimum
        distance traced; 100 points x 10 dims, budget 50k -> 500k,
        replicates 10 -> 30
fig5    plateau annealing with short vs long plateaus (i_max 100 vs
        300) at t0=0.1, c=0.9; 50 x 5, phip driver, mindist traced;
        budget 30k -> 300k, replicates 10 -> 30
fig6    nested search (m_inner=100, j_candidates=50), same setting as
        fig5; budget 30k -> 300k, replicates 10 -> 30
fig7    long-run duel: nested search with m_inner=300 vs plateau
        annealing (t0=0.01, i_max=1000, c=0.98); 50 x 5, mindist
        traced; budget 100k -> 350k, replicates 10 -> 30
fig8    centered vs wraparound discrepancy driving the nested search
        on 100 x 10; mean tree-length stats of the incumbent design
        at 25 snapshots, 5 replicates; budget 100k -> 1M
fig9    centered discrepancy of all 2D subsamples: plain random
        designs vs centered-discrepancy optimized designs
fig10   star and centered discrepancy panels of the 2D subsamples of
        star-discrepancy optimized designs
fig11   centered discrepancy of the 2D subsamples of the scrambled
        quasirandom sequence
fig12   star and centered discrepancy panels of the 2D subsamples of
        distance-optimized (phip) designs
fig13   tree-length mean and spread panels of the 2D subsamples of
        distance-optimized (phip) designs
fig14   tree-length mean and spread panels of the 2D subsamples of
        centered-discrepancy optimized designs
======  ==================================================================

The box grids (fig9 to fig14) share one frame: 100-point designs,
5 designs per dimension cell, dimension grid {2, 5, 10, 20} at desk
scale and {2, 5, 10, 20, 54} at full scale, optimization budget 200k
at desk scale and 2M at full scale, nested search with m_inner=100
and j_candidates=50.  Box statistics pool the metric values over all
2D column pairs of all designs in the cell.

Seeds
-----
All randomness derives from the single ``seed`` argument.  The
convergence scenarios hand ``seed + r`` to replicate ``r`` (paired
across variants); the box grids give the design ``i`` of arm ``a``
at dimension ``d`` the stream ``seed + 10_000 d + 1_000 a + i``.
Reruns with equal seed, figure and scale produce byte-identical
CSVs regardless of ``jobs``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np

from ._version import __version__
from .criteria import CriterionSpec
from .design import atomic_write_text, generate_random_lhs
from .diagnostics import (
    MST,
    FiveNumber,
    SubprojectionReport,
    mst_summary,
    subprojection_report,
)
from .manifest import RunManifest, write_manifest
from .optimize import (
    CompareScenario,
    CompareVariant,
    OptimizerConfig,
    compare_optimizers,
    optimize,
)
from .sobol import SobolConfig, generate_sobol

__all__ = ["BENCH_FIGURES", "BENCH_SCALES", "run_bench", "bench_csv_text"]

BENCH_FIGURES: tuple[str, ...] = tuple(f"fig{i}" for i in range(4, 15))
BENCH_SCALES: tuple[str, ...] = ("desk", "full")

_CONVERGENCE = ("fig4", "fig5", "fig6", "fig7")
_BOXGRID = ("fig9", "fig10", "fig11", "fig12", "fig13", "fig14")

# shared nested-search shape for every optimized box-grid arm
_BOX_DESIGNS_PER_CELL = 5
_BOX_POINTS = 100


def _convergence_scenario(figure: str, scale: str, seed: int) -> CompareScenario:
    """Build the replicated comparison behind one convergence figure."""
    full = scale == "full"
    reps = 30 if full else 10
    phip = CriterionSpec("phip", 50.0)
    min_d = CriterionSpec("mindist")

    def mm_sa(budget: int, t0: float, c: float, i_max: int) -> OptimizerConfig:
        return OptimizerConfig("mm-sa", budget, 0, t0=t0, c=c, i_max=i_max)

    if figure == "fig4":
        budget = 500_000 if full else 50_000
        variants = (
            CompareVariant("phip", phip, OptimizerConfig("ese", budget, 0)),
            CompareVariant("mindist", min_d, OptimizerConfig("ese", budget, 0)),
        )
        return CompareScenario(100, 10, variants, reps, seed, report=min_d)
    if figure == "fig5":
        budget = 300_000 if full else 30_000
        variants = (
            CompareVariant("imax-100", phip, mm_sa(budget, 0.1, 0.9, 100)),
            CompareVariant("imax-300", phip, mm_sa(budget, 0.1, 0.9, 300)),
        )
        return CompareScenario(50, 5, variants, reps, seed, report=min_d)
    if figure == "fig6":
        budget = 300_000 if full else 30_000
        variants = (
            CompareVariant("ese", phip, OptimizerConfig("ese", budget, 0)),
        )
        return CompareScenario(50, 5, variants, reps, seed, report=min_d)
    if figure == "fig7":
        budget = 350_000 if full else 100_000
        variants = (
            CompareVariant(
                "ese-m300", phip, OptimizerConfig("ese", budget, 0, m_inner=300)
            ),
            CompareVariant("mm-sa", phip, mm_sa(budget, 0.01, 0.98, 1000)),
        )
        return CompareScenario(50, 5, variants, reps, seed, report=min_d)
    raise ValueError(f"unknown convergence figure {figure!r}")


def _mst_curve_csv(scale: str, seed: int, jobs: int) -> str:
    """fig8: mean tree-length stats of the incumbent along each run."""
    n, d = 100, 10
    budget = 1_000_000 if scale == "full" else 100_000
    reps = 5
    snap = max(1, budget // 25)
    variants = (("c2", CriterionSpec("c2")), ("w2", CriterionSpec("w2")))

    def run_one(vi: int, r: int) -> list[tuple[int, float, float]]:
        s = seed + r
        initial = generate_random_lhs(n, d, s)
        config = OptimizerConfig("ese", budget, s)
        result = optimize(initial, variants[vi][1], config, snapshot_interval=snap)
        points = []
        for count, mat in result.snapshots:
            summary = mst_summary(mat)
            points.append((count, summary.m, summary.sigma))
        return points

    tasks = [(vi, r) for vi in range(len(variants)) for r in range(reps)]
    curves: dict[tuple[int, int], list[tuple[int, float, float]]] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = {pool.submit(run_one, vi, r): (vi, r) for vi, r in tasks}
            for fut, key in futs.items():
                curves[key] = fut.result()
    else:
        for vi, r in tasks:
            curves[(vi, r)] = run_one(vi, r)

    # batch sizes are deterministic, so every run snapshots at the
    # same perturbation counts
    grid = [c for c, _, _ in curves[(0, 0)]]
    for key, points in curves.items():
        if [c for c, _, _ in points] != grid:
            raise RuntimeError(f"snapshot grid diverged for run {key}")

    lines = ["checkpoint,variant,m_mean,sigma_mean"]
    for ci, count in enumerate(grid):
        for vi, (label, _) in enumerate(variants):
            m_mean = float(np.mean([curves[(vi, r)][ci][1] for r in range(reps)]))
            s_mean = float(np.mean([curves[(vi, r)][ci][2] for r in range(reps)]))
            lines.append(f"{count},{label},{m_mean:.17g},{s_mean:.17g}")
    return "\n".join(lines) + "\n"


BoxPanel = tuple[str, str, "CriterionSpec | str"]


def _boxgrid_layout(
    figure: str,
) -> tuple[dict[str, tuple[str, CriterionSpec | None]], tuple[BoxPanel, ...]]:
    """Arms (design recipes) and panels (arm + metric) of one box grid.

    Returns ``(arms, panels)`` where ``arms`` maps an arm key to a
    ``(kind, optimization criterion)`` recipe with kind one of
    ``lhs`` (plain), ``lhs-opt`` (nested-search optimized) or
    ``sobol`` (scrambled sequence), and ``panels`` lists
    ``(panel label, arm key, metric)`` rows; the metric is either a
    criterion or the string ``"mst-m"`` / ``"mst-sigma"``.
    """
    c2 = CriterionSpec("c2")
    l2 = CriterionSpec("l2star")
    phip = CriterionSpec("phip", 50.0)
    if figure == "fig9":
        return (
            {"plain": ("lhs", None), "c2-opt": ("lhs-opt", c2)},
            (("plain", "plain", c2), ("c2-opt", "c2-opt", c2)),
        )
    if figure == "fig10":
        return (
            {"l2star-opt": ("lhs-opt", l2)},
            (("l2star", "l2star-opt", l2), ("c2", "l2star-opt", c2)),
        )
    if figure == "fig11":
        return (
            {"sobol": ("sobol", None)},
            (("c2", "sobol", c2),),
        )
    if figure == "fig12":
        return (
            {"phip-opt": ("lhs-opt", phip)},
            (("l2star", "phip-opt", l2), ("c2", "phip-opt", c2)),
        )
    if figure == "fig13":
        return (
            {"phip-opt": ("lhs-opt", phip)},
            (("m", "phip-opt", "mst-m"), ("sigma", "phip-opt", "mst-sigma")),
        )
    if figure == "fig14":
        return (
            {"c2-opt": ("lhs-opt", c2)},
            (("m", "c2-opt", "mst-m"), ("sigma", "c2-opt", "mst-sigma")),
        )
    raise ValueError(f"unknown box-grid figure {figure!r}")


def _boxgrid_csv(figure: str, scale: str, seed: int, jobs: int) -> str:
    full = scale == "full"
    dims = (2, 5, 10, 20, 54) if full else (2, 5, 10, 20)
    budget = 2_000_000 if full else 200_000
    arms, panels = _boxgrid_layout(figure)
    arm_index = {key: ai for ai, key in enumerate(arms)}

    def build_design(arm_key: str, d: int, i: int):
        kind, spec = arms[arm_key]
        s = seed + 10_000 * d + 1_000 * arm_index[arm_key] + i
        if kind == "sobol":
            config = SobolConfig(dimension=d, scramble="owen-nested", seed=s)
            return generate_sobol(_BOX_POINTS, config)
        initial = generate_random_lhs(_BOX_POINTS, d, s)
        if kind == "lhs":
            return initial
        assert spec is not None
        opt = OptimizerConfig("ese", budget, s)
        return optimize(initial, spec, opt).best_design

    lines = ["panel,d,min,q25,q50,q75,max"]
    for d in dims:
        tasks = [(key, i) for key in arms for i in range(_BOX_DESIGNS_PER_CELL)]
        built: dict[tuple[str, int], Any] = {}
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futs = {
                    pool.submit(build_design, key, d, i): (key, i)
                    for key, i in tasks
                }
                for fut, task in futs.items():
                    built[task] = fut.result()
        else:
            for key, i in tasks:
                built[(key, i)] = build_design(key, d, i)
        arm_designs = {
            key: [built[(key, i)] for i in range(_BOX_DESIGNS_PER_CELL)]
            for key in arms
        }

        reports: dict[tuple[str, str], SubprojectionReport] = {}
        for panel, arm_key, metric in panels:
            is_mst = isinstance(metric, str)
            token = (arm_key, "mst" if is_mst else metric.kind.value)
            if token not in reports:
                reports[token] = subprojection_report(
                    arm_designs[arm_key],
                    2,
                    MST if is_mst else metric,
                    jobs=jobs,
                )
            pooled = reports[token].pooled_summary
            if is_mst:
                box: FiveNumber = pooled[0] if metric == "mst-m" else pooled[1]
            else:
                box = pooled
            stats = ",".join(f"{v:.17g}" for v in box)
            lines.append(f"{panel},{d},{stats}")
    return "\n".join(lines) + "\n"


def bench_csv_text(figure: str, scale: str, seed: int, jobs: int = 1) -> str:
    """Run one benchmark scenario and return its CSV text."""
    if figure not in BENCH_FIGURES:
        raise ValueError(
            f"unknown figure {figure!r}; expected one of {', '.join(BENCH_FIGURES)}"
        )
    if scale not in BENCH_SCALES:
        raise ValueError(f"unknown scale {scale!r}; expected desk or full")
    if figure in _CONVERGENCE:
        scenario = _convergence_scenario(figure, scale, seed)
        return compare_optimizers(scenario, jobs=jobs).to_csv_text()
    if figure == "fig8":
        return _mst_curve_csv(scale, seed, jobs)
    return _boxgrid_csv(figure, scale, seed, jobs)


def run_bench(
    figure: str,
    scale: str,
    out_dir: str | os.PathLike,
    seed: int,
    jobs: int = 1,
) -> list[str]:
    """Run one benchmark and write ``<figure>.csv`` plus the manifest.

    Returns the written paths, CSV first.
    """
    text = bench_csv_text(figure, scale, seed, jobs)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(os.fspath(out_dir), f"{figure}.csv")
    atomic_write_text(csv_path, text)
    manifest = RunManifest(
        command=f"bench {figure}",
        config={"figure": figure, "scale": scale, "seed": seed, "jobs": jobs},
        seed=seed,
        version=__version__,
    )
    manifest.add_output(csv_path)
    manifest_path = write_manifest(manifest, out_dir)
    return [csv_path, manifest_path]
