"""Geometric diagnostics: MST edge statistics and subprojection reports.

The minimum spanning tree over a design's points summarizes its
geometry: the mean edge length ``m`` and the edge-length standard
deviation ``sigma`` together order designs partially (better filling
means longer and more even edges).  The subprojection harness evaluates
a chosen metric on every k-column restriction of one or more designs
and pools the results into quantile summaries.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

import numpy as np

from .criteria import CriterionSpec, evaluate, pairwise_sq_distances
from .design import DesignMatrix, LhsDesign, default_rng, extract_subprojection

__all__ = [
    "MST",
    "FiveNumber",
    "MstMetric",
    "MstOrder",
    "MstSummary",
    "SubprojectionReport",
    "mst_compare",
    "mst_edge_weights",
    "mst_summary",
    "quantiles",
    "subprojection_report",
]


@dataclass(frozen=True)
class MstSummary:
    """Edge-length statistics of a design's Euclidean MST.

    ``sigma`` divides by the edge count (population convention over the
    n-1 edges).
    """

    m: float
    sigma: float
    edge_lengths: np.ndarray
    total_weight: float


class MstOrder(enum.Enum):
    A_BETTER = "ABetter"
    B_BETTER = "BBetter"
    INCOMPARABLE = "Incomparable"


class FiveNumber(NamedTuple):
    min: float
    q25: float
    median: float
    q75: float
    max: float


def _as_matrix(design: DesignMatrix | LhsDesign | np.ndarray) -> np.ndarray:
    if isinstance(design, (DesignMatrix, LhsDesign)):
        return design.matrix
    return np.asarray(design, dtype=float)


def _prim_edges(d2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense greedy MST growth on a squared-distance matrix.

    Returns (squared edge weights, edge pairs as 0-based (i, j) with
    i < j).  Candidate ties are broken toward the smallest vertex pair
    so results are reproducible.
    """
    n = d2.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best_w = d2[0].copy()
    best_from = np.zeros(n, dtype=np.intp)
    best_w[0] = np.inf
    weights = np.empty(n - 1)
    pairs = np.empty((n - 1, 2), dtype=np.intp)
    for e in range(n - 1):
        masked = np.where(in_tree, np.inf, best_w)
        j = int(np.argmin(masked))  # argmin takes the smallest index on ties
        i = int(best_from[j])
        weights[e] = best_w[j]
        pairs[e] = (min(i, j), max(i, j))
        in_tree[j] = True
        row = d2[j]
        closer = row < best_w
        tie_smaller = (row == best_w) & (j < best_from)
        upd = (closer | tie_smaller) & ~in_tree
        best_w[upd] = row[upd]
        best_from[upd] = j
    return weights, pairs


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _kruskal_edges(d2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort-based MST; the independent cross-check for the greedy route."""
    n = d2.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    w = d2[iu, ju]
    order = np.lexsort((ju, iu, w))
    uf = _UnionFind(n)
    weights = []
    pairs = []
    for idx in order:
        a, b = int(iu[idx]), int(ju[idx])
        if uf.union(a, b):
            weights.append(w[idx])
            pairs.append((a, b))
            if len(weights) == n - 1:
                break
    return np.asarray(weights), np.asarray(pairs, dtype=np.intp)


def mst_edge_weights(
    design: DesignMatrix | LhsDesign | np.ndarray, method: str = "prim"
) -> np.ndarray:
    """Euclidean MST edge lengths, ascending.

    ``method`` selects the dense greedy route ("prim") or the sort-based
    route ("kruskal"); the two are implemented independently so they can
    check each other.
    """
    m = _as_matrix(design)
    if m.shape[0] < 2:
        raise ValueError("MST needs at least two points")
    d2 = pairwise_sq_distances(m)
    if method == "prim":
        w2, _ = _prim_edges(d2)
    elif method == "kruskal":
        w2, _ = _kruskal_edges(d2)
    else:
        raise ValueError(f"unknown MST method {method!r}")
    return np.sqrt(np.sort(w2))


def mst_summary(design: DesignMatrix | LhsDesign | np.ndarray) -> MstSummary:
    """Mean and spread of the design's Euclidean MST edge lengths.

    Exact MST via dense greedy growth with deterministic tie-breaking.

    Examples
    --------
    >>> import numpy as np
    >>> s = mst_summary(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    >>> (s.m, s.sigma)
    (1.0, 0.0)
    """
    lengths = mst_edge_weights(design, method="prim")
    return MstSummary(
        m=float(lengths.mean()),
        sigma=float(lengths.std()),
        edge_lengths=lengths,
        total_weight=float(lengths.sum()),
    )


def mst_compare(a: MstSummary, b: MstSummary) -> MstOrder:
    """Partial-order verdict on two MST summaries.

    ``a`` is better only when its mean edge is strictly longer AND its
    edge spread strictly smaller; disagreement or any equality is
    incomparable.
    """
    if a.m > b.m and a.sigma < b.sigma:
        return MstOrder.A_BETTER
    if b.m > a.m and b.sigma < a.sigma:
        return MstOrder.B_BETTER
    return MstOrder.INCOMPARABLE


def quantiles(values: Sequence[float] | np.ndarray) -> FiveNumber:
    """Five-number summary (min, q25, median, q75, max).

    Quartiles use linear interpolation between order statistics (the
    numpy default, quantile type 7), and values are sorted first so the
    result does not depend on input order.
    """
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("need at least one value")
    q = np.quantile(v, [0.0, 0.25, 0.5, 0.75, 1.0])
    return FiveNumber(*(float(x) for x in q))


class MstMetric:
    """Marker selecting MST (m, sigma) statistics as the subprojection metric."""

    def __repr__(self) -> str:  # pragma: no cover
        return "MST"


MST = MstMetric()


@dataclass(frozen=True)
class SubprojectionReport:
    """Metric values over all k-column restrictions of each source design.

    ``values[s][t]`` is the metric on design ``s`` restricted to
    ``tuples[t]``; floats for criterion metrics, ``MstSummary`` for the
    MST metric.  Summaries are five-number quantiles, per design and
    pooled; the MST metric summarizes ``m`` and ``sigma`` separately.
    """

    k: int
    metric: CriterionSpec | MstMetric
    sources: tuple[str, ...]
    tuples: tuple[tuple[int, ...], ...]
    values: tuple[tuple[Any, ...], ...]
    per_design_summary: tuple[Any, ...]
    pooled_summary: Any

    @property
    def metric_label(self) -> str:
        return "mst" if isinstance(self.metric, MstMetric) else self.metric.label

    def to_json(self) -> dict[str, Any]:
        is_mst = isinstance(self.metric, MstMetric)

        def summarize(s: Any) -> Any:
            if is_mst:
                return {"m": s[0]._asdict(), "sigma": s[1]._asdict()}
            return s._asdict()

        per_design = []
        for sid, vals, summ in zip(self.sources, self.values, self.per_design_summary):
            if is_mst:
                out_vals = [{"m": v.m, "sigma": v.sigma} for v in vals]
            else:
                out_vals = list(vals)
            per_design.append(
                {
                    "id": sid,
                    "tuples": [list(t) for t in self.tuples],
                    "values": out_vals,
                    "summary": summarize(summ),
                }
            )
        return {
            "k": self.k,
            "metric": self.metric_label,
            "per_design": per_design,
            "pooled_summary": summarize(self.pooled_summary),
        }

    def csv_rows(self) -> tuple[list[str], list[list[str]]]:
        """Flat per-tuple rows for the figures pipeline."""
        is_mst = isinstance(self.metric, MstMetric)
        header = ["design_id", "cols", "m", "sigma"] if is_mst else [
            "design_id",
            "cols",
            "value",
        ]
        rows = []
        for sid, vals in zip(self.sources, self.values):
            for t, v in zip(self.tuples, vals):
                cols = "|".join(str(c) for c in t)
                if is_mst:
                    rows.append([sid, cols, f"{v.m:.17g}", f"{v.sigma:.17g}"])
                else:
                    rows.append([sid, cols, f"{v:.17g}"])
        return header, rows


def _k_tuples(
    d: int, k: int, max_tuples: int | None, seed: int | None
) -> tuple[tuple[int, ...], ...]:
    total = math.comb(d, k)
    if max_tuples is None or total <= max_tuples:
        return tuple(itertools.combinations(range(1, d + 1), k))
    if seed is None:
        raise ValueError("sampled subprojection tuples need a seed")
    rng = default_rng(seed)
    chosen: set[tuple[int, ...]] = set()
    ordered: list[tuple[int, ...]] = []
    while len(ordered) < max_tuples:
        t = tuple(sorted(rng.choice(d, size=k, replace=False) + 1))
        if t not in chosen:
            chosen.add(t)
            ordered.append(t)
    return tuple(ordered)


def subprojection_report(
    designs: Sequence[DesignMatrix | LhsDesign],
    k: int,
    metric: CriterionSpec | MstMetric,
    design_ids: Sequence[str] | None = None,
    max_tuples: int | None = None,
    seed: int | None = None,
    jobs: int = 1,
) -> SubprojectionReport:
    """Evaluate ``metric`` on every k-column restriction of each design.

    Parameters
    ----------
    designs : sequence
        Designs sharing one (n, d) shape.
    k : int
        Subspace dimension, 1 <= k < d (k = d is allowed only as the
        identity projection when d == k tuples exist; the contract is
        1 <= k <= d with k < d the useful case).
    metric : CriterionSpec or MstMetric
        Criterion to evaluate per restriction, or the MST marker for
        (m, sigma) statistics.
    design_ids : sequence of str, optional
        Labels for the sources; defaults to "1", "2", ...
    max_tuples : int, optional
        Cap on the number of column tuples; when the exhaustive count
        exceeds it, that many distinct tuples are sampled (requires
        ``seed``).
    jobs : int
        Worker threads for per-tuple evaluation.

    Returns
    -------
    SubprojectionReport
    """
    if not designs:
        raise ValueError("need at least one design")
    mats = [_as_matrix(dd) for dd in designs]
    shape = mats[0].shape
    for i, m in enumerate(mats):
        if m.shape != shape:
            raise ValueError(
                f"designs must share one shape; design {i + 1} is {m.shape}, "
                f"expected {shape}"
            )
    d = shape[1]
    if not 1 <= k <= d:
        raise ValueError(f"k must be in 1..{d}, got {k}")
    if design_ids is None:
        ids = tuple(str(i + 1) for i in range(len(mats)))
    else:
        if len(design_ids) != len(mats):
            raise ValueError("design_ids length must match designs")
        ids = tuple(str(s) for s in design_ids)
    tuples = _k_tuples(d, k, max_tuples, seed)
    is_mst = isinstance(metric, MstMetric)

    def eval_one(mat: np.ndarray, cols: tuple[int, ...]) -> Any:
        sub = extract_subprojection(DesignMatrix(mat), list(cols))
        if is_mst:
            return mst_summary(sub)
        return evaluate(sub, metric).value

    tasks = [(si, ti) for si in range(len(mats)) for ti in range(len(tuples))]
    results: dict[tuple[int, int], Any] = {}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futs = {
                pool.submit(eval_one, mats[si], tuples[ti]): (si, ti)
                for si, ti in tasks
            }
            for fut, key in futs.items():
                results[key] = fut.result()
    else:
        for si, ti in tasks:
            results[(si, ti)] = eval_one(mats[si], tuples[ti])

    values = tuple(
        tuple(results[(si, ti)] for ti in range(len(tuples)))
        for si in range(len(mats))
    )

    def summarize(vals: Sequence[Any]) -> Any:
        if is_mst:
            return (
                quantiles([v.m for v in vals]),
                quantiles([v.sigma for v in vals]),
            )
        return quantiles(list(vals))

    per_design = tuple(summarize(v) for v in values)
    pooled = summarize([v for vs in values for v in vs])
    return SubprojectionReport(
        k=k,
        metric=metric,
        sources=ids,
        tuples=tuples,
        values=values,
        per_design_summary=per_design,
        pooled_summary=pooled,
    )
