"""Uniformity and distance criteria for designs on the unit hypercube.

Three L2 uniformity measures with closed forms (centered, wrap-around,
and star), plus two distance-based space-filling measures (minimum
pairwise distance and its smooth power-mean surrogate).  The centered
and wrap-around measures are reported squared; the star measure is
reported as a root.  A slow Monte Carlo estimator for the star measure
serves as an independent check on the closed form.

Open question (scale convention): tabulated magnitudes in the wider
literature for the centered measure of moderate-size designs, such as
values near 0.017 for 2D restrictions of plain 100-point Latin
hypercubes, correspond to the square root of the squared total returned
by ``centered_l2``; the squared totals land near 3e-4 instead.  Band
comparisons against such landmark magnitudes therefore take the root of
pooled summaries first.  Orderings are unaffected since the root is
monotone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

import numpy as np

from .design import DesignMatrix, LhsDesign

__all__ = [
    "CriterionKind",
    "CriterionSpec",
    "CriterionValue",
    "Direction",
    "centered_l2",
    "evaluate",
    "mc_discrepancy_oracle",
    "mindist",
    "pairwise_sq_distances",
    "phi_p",
    "star_l2",
    "wraparound_l2",
]


class CriterionKind(enum.Enum):
    C2 = "c2"
    W2 = "w2"
    L2STAR = "l2star"
    MINDIST = "mindist"
    PHIP = "phip"


class Direction(enum.Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


@dataclass(frozen=True)
class CriterionSpec:
    """A criterion choice plus its parameters.

    ``p`` is only consulted for the power-mean distance criterion; it
    must be at least 1 and defaults to 50.
    """

    kind: CriterionKind
    p: float = 50.0

    def __post_init__(self) -> None:
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", CriterionKind(self.kind))
        if not self.p >= 1.0:
            raise ValueError(f"p must be >= 1, got {self.p}")

    @property
    def direction(self) -> Direction:
        if self.kind is CriterionKind.MINDIST:
            return Direction.MAXIMIZE
        return Direction.MINIMIZE

    @property
    def label(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class CriterionValue:
    """A criterion evaluation result.

    ``degenerate`` flags values that exist only as limits, such as the
    distance criteria on a design with coincident points.
    """

    value: float
    spec: CriterionSpec
    degenerate: bool = False

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "criterion": self.spec.label,
            "p": self.spec.p,
            "value": self.value,
        }
        if self.degenerate:
            out["degenerate"] = True
        return out


def _as_matrix(design: DesignMatrix | LhsDesign | np.ndarray) -> np.ndarray:
    if isinstance(design, (DesignMatrix, LhsDesign)):
        return design.matrix
    m = np.asarray(design, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"design must be 2-D, got shape {m.shape}")
    return m


# --- product kernels -------------------------------------------------------
# Each L2 measure factorizes over columns into a point kernel g(x) and a
# symmetric pair kernel h(x, y).  The same kernels drive both the full
# evaluations here and the incremental swap updates.


def c2_point_kernel(x: np.ndarray) -> np.ndarray:
    a = np.abs(x - 0.5)
    return 1.0 + 0.5 * a - 0.5 * a * a


def c2_pair_kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 1.0 + 0.5 * np.abs(x - 0.5) + 0.5 * np.abs(y - 0.5) - 0.5 * np.abs(x - y)


def w2_pair_kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    t = np.abs(x - y)
    return 1.5 - t * (1.0 - t)


def star_point_kernel(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 - x * x)


def star_pair_kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 1.0 - np.maximum(x, y)


def _product_sums(m, point_kernel, pair_kernel):
    # S1 = sum_i prod_k g(x_ik);  S2 = sum_ij prod_k h(x_ik, x_jk)
    n, d = m.shape
    s1 = None
    cross = np.ones((n, n))
    if point_kernel is not None:
        pts = np.ones(n)
    for k in range(d):
        col = m[:, k]
        cross *= pair_kernel(col[:, None], col[None, :])
        if point_kernel is not None:
            pts *= point_kernel(col)
    if point_kernel is not None:
        s1 = float(pts.sum())
    return s1, float(cross.sum())


def centered_l2(design: DesignMatrix | LhsDesign | np.ndarray) -> CriterionValue:
    """Squared centered L2 uniformity measure (smaller is more uniform).

    Measures the squared L2 distance between the empirical and uniform
    distribution over boxes anchored at the nearest hypercube corner,
    via the closed product form.
    """
    m = _as_matrix(design)
    n, d = m.shape
    s1, s2 = _product_sums(m, c2_point_kernel, c2_pair_kernel)
    value = (13.0 / 12.0) ** d - (2.0 / n) * s1 + s2 / n**2
    return CriterionValue(float(value), CriterionSpec(CriterionKind.C2))


def wraparound_l2(design: DesignMatrix | LhsDesign | np.ndarray) -> CriterionValue:
    """Squared wrap-around L2 uniformity measure (torus geometry).

    Boxes are allowed to wrap around the faces of the cube, so the
    measure is invariant under coordinate-wise cyclic shifts.
    """
    m = _as_matrix(design)
    n, d = m.shape
    _, s2 = _product_sums(m, None, w2_pair_kernel)
    value = -((4.0 / 3.0) ** d) + s2 / n**2
    return CriterionValue(float(value), CriterionSpec(CriterionKind.W2))


def star_l2(design: DesignMatrix | LhsDesign | np.ndarray) -> CriterionValue:
    """Root star L2 uniformity measure over origin-anchored boxes.

    The squared form can come out as a tiny negative number for near
    perfect designs through cancellation; it is clamped at zero before
    the root.
    """
    m = _as_matrix(design)
    n, d = m.shape
    s1, s2 = _product_sums(m, star_point_kernel, star_pair_kernel)
    raw = (1.0 / 3.0) ** d - (2.0 / n) * s1 + s2 / n**2
    return CriterionValue(float(np.sqrt(max(raw, 0.0))), CriterionSpec(CriterionKind.L2STAR))


def star_l2_squared(design: DesignMatrix | LhsDesign | np.ndarray) -> float:
    """Squared star L2 measure without the clamp, for oracle comparisons."""
    m = _as_matrix(design)
    n, d = m.shape
    s1, s2 = _product_sums(m, star_point_kernel, star_pair_kernel)
    return float((1.0 / 3.0) ** d - (2.0 / n) * s1 + s2 / n**2)


# --- distance criteria -----------------------------------------------------


def pairwise_sq_distances(m: np.ndarray) -> np.ndarray:
    """Dense matrix of squared Euclidean distances, zero diagonal.

    Accumulated column by column from explicit differences; the usual
    Gram-matrix shortcut loses precision exactly where these criteria
    are most sensitive, at nearly coincident points.
    """
    n, d = m.shape
    out = np.zeros((n, n))
    for k in range(d):
        diff = m[:, k, None] - m[None, :, k]
        out += diff * diff
    return out


def mindist(design: DesignMatrix | LhsDesign | np.ndarray) -> CriterionValue:
    """Minimum pairwise Euclidean distance (larger is better spread).

    A design with coincident points gets value 0 with the degenerate
    flag set.
    """
    m = _as_matrix(design)
    if m.shape[0] < 2:
        raise ValueError("mindist needs at least two points")
    d2 = pairwise_sq_distances(m)
    iu = np.triu_indices(m.shape[0], k=1)
    dmin2 = float(d2[iu].min())
    spec = CriterionSpec(CriterionKind.MINDIST)
    if dmin2 == 0.0:
        return CriterionValue(0.0, spec, degenerate=True)
    return CriterionValue(float(np.sqrt(dmin2)), spec)


def phi_p(design: DesignMatrix | LhsDesign | np.ndarray, p: float = 50.0) -> CriterionValue:
    """Power-mean inverse-distance criterion (smaller is better spread).

    Computed as ``[sum over pairs of d_ij^-p]^(1/p)`` in a rescaled form
    that cannot overflow: every pair distance is divided by the minimum
    distance first, so the summands all lie in (0, 1].  As ``p`` grows
    the value approaches ``1 / mindist``.
    """
    m = _as_matrix(design)
    if m.shape[0] < 2:
        raise ValueError("phi_p needs at least two points")
    spec = CriterionSpec(CriterionKind.PHIP, p=p)
    d2 = pairwise_sq_distances(m)
    iu = np.triu_indices(m.shape[0], k=1)
    pair_d2 = d2[iu]
    dmin2 = float(pair_d2.min())
    if dmin2 == 0.0:
        return CriterionValue(float("inf"), spec, degenerate=True)
    # (dmin/d_ij)^p, all in (0, 1]; underflow of far pairs is harmless
    t = float(((dmin2 / pair_d2) ** (p / 2.0)).sum())
    dref = float(np.sqrt(dmin2))
    return CriterionValue(float(t ** (1.0 / p) / dref), spec)


def evaluate(
    design: DesignMatrix | LhsDesign | np.ndarray, spec: CriterionSpec
) -> CriterionValue:
    """Evaluate one criterion on a design."""
    if spec.kind is CriterionKind.C2:
        return centered_l2(design)
    if spec.kind is CriterionKind.W2:
        return wraparound_l2(design)
    if spec.kind is CriterionKind.L2STAR:
        return star_l2(design)
    if spec.kind is CriterionKind.MINDIST:
        return mindist(design)
    if spec.kind is CriterionKind.PHIP:
        return phi_p(design, p=spec.p)
    raise ValueError(f"unknown criterion kind {spec.kind!r}")


def mc_discrepancy_oracle(
    design: DesignMatrix | LhsDesign | np.ndarray,
    n_samples: int,
    seed: int,
    chunk: int = 200_000,
) -> tuple[float, float]:
    """Monte Carlo estimate of the squared star L2 measure.

    Draws uniform anchor points ``t``, evaluates the squared gap between
    the empirical box count and the box volume at each, and averages.

    Returns
    -------
    (estimate, standard_error)
        Sample mean and its standard error, so callers can assert
        agreement with the closed form within a few standard errors.
    """
    m = _as_matrix(design)
    n = m.shape[0]
    rng = np.random.Generator(np.random.Philox(key=seed))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_samples:
        take = min(chunk, n_samples - done)
        t = rng.random((take, m.shape[1]))
        inside = (m[None, :, :] <= t[:, None, :]).all(axis=2)
        g = (inside.mean(axis=1) - t.prod(axis=1)) ** 2
        total += float(g.sum())
        total_sq += float((g * g).sum())
        done += take
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    return mean, float(np.sqrt(var / n_samples))
