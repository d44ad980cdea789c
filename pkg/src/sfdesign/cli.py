"""Command-line surface for generation, optimization and diagnostics.

Exit codes: 0 success, 2 usage error, 3 data or parse error,
4 numerical degeneracy.  All randomness flows from ``--seed``; when
the flag is absent a seed is drawn and printed to stderr so the run
stays reproducible.  ``SFDESIGN_OUT_DIR`` supplies the base directory
for default output locations.  Output files are written atomically
and every output directory receives exactly one ``manifest.json``.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

import click

from ._version import __version__
from .bench import BENCH_FIGURES, BENCH_SCALES, run_bench
from .criteria import CriterionSpec, evaluate
from .design import (
    DesignMatrix,
    LhsDesign,
    atomic_write_text,
    generate_centered_lhs,
    generate_random_lhs,
    generate_srs,
    lhs_from_matrix,
    read_design_csv,
    write_design_csv,
)
from .diagnostics import MST, mst_summary, subprojection_report
from .errors import DegenerateDesignError, DesignIoError
from .manifest import RunManifest, write_manifest
from .optimize import OptimizationResult, OptimizerConfig, optimize
from .sobol import SobolConfig, generate_sobol

_CRITERIA = ("c2", "w2", "l2star", "mindist", "phip")
_OUT_DIR_ENV = "SFDESIGN_OUT_DIR"


def _domain_errors(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except DesignIoError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except DegenerateDesignError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(4)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc

    return wrapper


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    drawn = int.from_bytes(os.urandom(4), "big")
    click.echo(f"seed drawn: {drawn}", err=True)
    return drawn


def _default_path(given: str | None, name: str) -> str:
    if given is not None:
        return given
    return os.path.join(os.environ.get(_OUT_DIR_ENV, "."), name)


@click.group()
@click.version_option(__version__, prog_name="sfdesign")
def main() -> None:
    """Space-filling design toolkit: Latin hypercube generation,
    criterion evaluation, swap-based optimization and geometric
    diagnostics."""


@main.command()
@click.option(
    "--method",
    type=click.Choice(["lhs", "lhs-centered", "srs", "sobol"]),
    default="lhs",
    show_default=True,
    help="Generator: stratified with uniform jitter, stratified at cell "
    "midpoints, plain uniform sampling, or the quasirandom sequence.",
)
@click.option("--n", type=click.IntRange(min=1), required=True, help="Points.")
@click.option("--d", type=click.IntRange(min=1), required=True, help="Columns.")
@click.option("--seed", type=int, default=None, help="Deterministic stream key.")
@click.option(
    "--scramble/--no-scramble",
    default=False,
    show_default=True,
    help="Apply seeded nested scrambling (sobol only).",
)
@click.option(
    "--skip",
    type=click.IntRange(min=0),
    default=1,
    show_default=True,
    help="Leading sequence points to drop (sobol only).",
)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@_domain_errors
def generate(
    method: str,
    n: int,
    d: int,
    seed: int | None,
    scramble: bool,
    skip: int,
    out_path: str | None,
) -> None:
    """Generate a design and write it as CSV."""
    if scramble and method != "sobol":
        raise click.UsageError("--scramble applies to --method sobol only")
    seed = _resolve_seed(seed)
    design: DesignMatrix | LhsDesign
    if method == "lhs":
        design = generate_random_lhs(n, d, seed)
    elif method == "lhs-centered":
        design = generate_centered_lhs(n, d, seed)
    elif method == "srs":
        design = generate_srs(n, d, seed)
    else:
        config = SobolConfig(
            dimension=d,
            skip=skip,
            scramble="owen-nested" if scramble else "none",
            seed=seed if scramble else None,
        )
        design = generate_sobol(n, config)
    out = _default_path(out_path, f"{method}-n{n}-d{d}.csv")
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    write_design_csv(design, out)
    click.echo(out)


def _specs_from_names(names: tuple[str, ...], p: float) -> list[CriterionSpec]:
    return [CriterionSpec(name, p) for name in names]


@main.command(name="evaluate")
@click.argument("design_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--criterion",
    "-c",
    "names",
    type=click.Choice(_CRITERIA),
    multiple=True,
    help="Criterion to evaluate; repeatable. Default: all five.",
)
@click.option(
    "--p",
    type=click.FloatRange(min=1.0),
    default=50.0,
    show_default=True,
    help="Exponent for the phip criterion.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv"]),
    default="json",
    show_default=True,
)
@_domain_errors
def evaluate_cmd(design_path: str, names: tuple[str, ...], p: float, fmt: str) -> None:
    """Evaluate criteria on a stored design and print the values."""
    design = read_design_csv(design_path)
    specs = _specs_from_names(names or _CRITERIA, p)
    results = [evaluate(design, spec) for spec in specs]
    broken = [r.spec.label for r in results if r.degenerate]
    if broken:
        # coincident points make the distance criteria meaningless and
        # would put non-finite numbers in the output
        raise DegenerateDesignError(
            f"design has coincident points; {', '.join(broken)} is degenerate"
        )
    if fmt == "json":
        click.echo(json.dumps([r.to_json() for r in results], indent=2))
    else:
        lines = ["criterion,p,value"]
        for r in results:
            lines.append(f"{r.spec.label},{r.spec.p:.17g},{r.value:.17g}")
        click.echo("\n".join(lines))


@main.command(name="optimize")
@click.option(
    "--in",
    "in_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Starting design CSV (must be a Latin hypercube); replicates "
    "then share this start. Default: a fresh stratified design per "
    "replicate.",
)
@click.option("--n", type=click.IntRange(min=2), default=None, help="Points.")
@click.option("--d", type=click.IntRange(min=1), default=None, help="Columns.")
@click.option(
    "--criterion",
    type=click.Choice(_CRITERIA),
    default="phip",
    show_default=True,
    help="Criterion the swaps optimize.",
)
@click.option("--p", type=click.FloatRange(min=1.0), default=50.0, show_default=True)
@click.option(
    "--report",
    type=click.Choice(_CRITERIA),
    default=None,
    help="Extra criterion traced alongside the optimized one.",
)
@click.option(
    "--algo",
    type=click.Choice(["geometric-sa", "mm-sa", "ese"]),
    default="ese",
    show_default=True,
)
@click.option("--budget", type=click.IntRange(min=1), required=True)
@click.option("--replicates", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--t0", type=float, default=None, help="Start temperature.")
@click.option("--c", type=float, default=0.95, show_default=True, help="Cooling factor.")
@click.option("--i-max", type=click.IntRange(min=1), default=300, show_default=True)
@click.option("--m-inner", type=click.IntRange(min=1), default=100, show_default=True)
@click.option(
    "--j-candidates", type=click.IntRange(min=1), default=50, show_default=True
)
@click.option("--q-outer", type=click.IntRange(min=1), default=None)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.argument("out_dir", type=click.Path(file_okay=False), required=False)
@_domain_errors
def optimize_cmd(
    in_path: str | None,
    n: int | None,
    d: int | None,
    criterion: str,
    p: float,
    report: str | None,
    algo: str,
    budget: int,
    replicates: int,
    seed: int | None,
    t0: float | None,
    c: float,
    i_max: int,
    m_inner: int,
    j_candidates: int,
    q_outer: int | None,
    jobs: int,
    out_dir: str | None,
) -> None:
    """Improve a Latin hypercube by elementary swaps.

    Replicate i derives its stream from --seed + i and writes
    design-r{i}.csv, trace-r{i}.csv and trace-r{i}.json into OUT_DIR;
    a manifest records the configuration and file digests.

    \b
    Example (plateau annealing, 50 x 5, distance-driven):
      sfdesign optimize --n 50 --d 5 --criterion phip --algo mm-sa \\
          --t0 0.1 --c 0.9 --i-max 100 --budget 30000 --seed 7 out/
    """
    if in_path is None and (n is None or d is None):
        raise click.UsageError("give --in or both --n and --d")
    if in_path is not None and (n is not None or d is not None):
        raise click.UsageError("--in already fixes the shape; drop --n/--d")
    seed = _resolve_seed(seed)
    out = _default_path(out_dir, f"optimize-{criterion}-{algo}")
    os.makedirs(out, exist_ok=True)
    spec = CriterionSpec(criterion, p)
    report_spec = CriterionSpec(report, p) if report else None
    manifest = RunManifest(
        command="optimize",
        config={
            "in": in_path,
            "n": n,
            "d": d,
            "criterion": criterion,
            "p": p,
            "report": report,
            "algo": algo,
            "budget": budget,
            "replicates": replicates,
            "seed": seed,
            "t0": t0,
            "c": c,
            "i_max": i_max,
            "m_inner": m_inner,
            "j_candidates": j_candidates,
            "q_outer": q_outer,
        },
        seed=seed,
        version=__version__,
    )
    shared_start: LhsDesign | None = None
    if in_path is not None:
        shared_start = lhs_from_matrix(read_design_csv(in_path))
        manifest.add_input(in_path)

    def run_one(i: int) -> OptimizationResult:
        seed_i = seed + i
        if shared_start is not None:
            initial = shared_start
        else:
            assert n is not None and d is not None
            initial = generate_random_lhs(n, d, seed_i)
        config = OptimizerConfig(
            algorithm=algo,
            budget=budget,
            seed=seed_i,
            t0=t0,
            c=c,
            i_max=i_max,
            m_inner=m_inner,
            j_candidates=j_candidates,
            q_outer=q_outer,
        )
        return optimize(initial, spec, config, report_spec)

    results: dict[int, OptimizationResult] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = {pool.submit(run_one, i): i for i in range(replicates)}
            for fut, i in futs.items():
                results[i] = fut.result()
    else:
        for i in range(replicates):
            results[i] = run_one(i)

    summary = []
    for i in range(replicates):
        result = results[i]
        design_path = os.path.join(out, f"design-r{i}.csv")
        trace_path = os.path.join(out, f"trace-r{i}.csv")
        meta_path = os.path.join(out, f"trace-r{i}.json")
        write_design_csv(result.best_design, design_path)
        atomic_write_text(trace_path, result.trace.to_csv_text())
        atomic_write_text(meta_path, result.trace.metadata_json() + "\n")
        for path in (design_path, trace_path, meta_path):
            manifest.add_output(path)
        summary.append(
            {
                "replicate": i,
                "seed": seed + i,
                "best": result.best_value.to_json(),
                "termination": result.termination.value,
            }
        )
    write_manifest(manifest, out)
    click.echo(json.dumps({"out_dir": out, "replicates": summary}, indent=2))


@main.command(name="subproj")
@click.argument(
    "design_paths",
    type=click.Path(exists=True, dir_okay=False),
    nargs=-1,
    required=True,
)
@click.option("--k", type=click.IntRange(min=1), default=2, show_default=True)
@click.option(
    "--metric",
    type=click.Choice(_CRITERIA + ("mst",)),
    default="c2",
    show_default=True,
)
@click.option("--p", type=click.FloatRange(min=1.0), default=50.0, show_default=True)
@click.option(
    "--max-tuples",
    type=click.IntRange(min=1),
    default=None,
    help="Sample this many column tuples when the exhaustive count is larger.",
)
@click.option("--seed", type=int, default=None, help="Tuple-sampling stream key.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.argument("out_dir", type=click.Path(file_okay=False), required=False)
@_domain_errors
def subproj_cmd(
    design_paths: tuple[str, ...],
    k: int,
    metric: str,
    p: float,
    max_tuples: int | None,
    seed: int | None,
    jobs: int,
    out_dir: str | None,
) -> None:
    """Score every k-column restriction of the given designs.

    Writes report.csv (one row per design and column tuple) and
    report.json (per-design and pooled five-number summaries) into
    OUT_DIR.
    """
    if max_tuples is not None:
        seed = _resolve_seed(seed)
    designs = [read_design_csv(path) for path in design_paths]
    ids = [os.path.splitext(os.path.basename(path))[0] for path in design_paths]
    if len(set(ids)) != len(ids):
        ids = [f"{name}#{i}" for i, name in enumerate(ids)]
    chosen = MST if metric == "mst" else CriterionSpec(metric, p)
    report = subprojection_report(
        designs,
        k,
        chosen,
        design_ids=ids,
        max_tuples=max_tuples,
        seed=seed,
        jobs=jobs,
    )
    out = _default_path(out_dir, f"subproj-k{k}-{metric}")
    os.makedirs(out, exist_ok=True)
    manifest = RunManifest(
        command="subproj",
        config={
            "designs": list(design_paths),
            "k": k,
            "metric": metric,
            "p": p,
            "max_tuples": max_tuples,
            "seed": seed,
        },
        seed=seed,
        version=__version__,
    )
    for path in design_paths:
        manifest.add_input(path)
    header, rows = report.csv_rows()
    csv_text = ",".join(header) + "\n"
    csv_text += "".join(",".join(row) + "\n" for row in rows)
    csv_path = os.path.join(out, "report.csv")
    json_path = os.path.join(out, "report.json")
    atomic_write_text(csv_path, csv_text)
    atomic_write_text(json_path, json.dumps(report.to_json(), indent=2) + "\n")
    manifest.add_output(csv_path)
    manifest.add_output(json_path)
    write_manifest(manifest, out)
    click.echo(
        json.dumps(
            {"out_dir": out, "pooled_summary": report.to_json()["pooled_summary"]},
            indent=2,
        )
    )


@main.command(name="mst")
@click.argument("design_path", type=click.Path(exists=True, dir_okay=False))
@_domain_errors
def mst_cmd(design_path: str) -> None:
    """Print minimum-spanning-tree edge statistics of a design."""
    design = read_design_csv(design_path)
    summary = mst_summary(design)
    click.echo(
        json.dumps(
            {
                "m": summary.m,
                "sigma": summary.sigma,
                "edges": int(summary.edge_lengths.size),
                "total_weight": summary.total_weight,
            },
            indent=2,
        )
    )


@main.command(name="bench")
@click.argument("figure", type=click.Choice(BENCH_FIGURES))
@click.option(
    "--scale",
    type=click.Choice(BENCH_SCALES),
    default="desk",
    show_default=True,
    help="desk runs the documented laptop-sized reduction; full runs "
    "the production scenario.",
)
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.argument("out_dir", type=click.Path(file_okay=False), required=False)
@_domain_errors
def bench_cmd(
    figure: str, scale: str, seed: int | None, jobs: int, out_dir: str | None
) -> None:
    """Produce the plot-ready CSV dataset behind one figure."""
    seed = _resolve_seed(seed)
    out = _default_path(out_dir, f"bench-{figure}-{scale}")
    paths = run_bench(figure, scale, out, seed, jobs=jobs)
    for path in paths:
        click.echo(path)


if __name__ == "__main__":
    main()
