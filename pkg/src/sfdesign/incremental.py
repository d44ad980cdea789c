"""Incremental criterion re-evaluation under single-column row swaps.

Swapping two entries within one column leaves every pair's contribution
to the L2 product kernels unchanged except for pairs involving the two
swapped rows, and the same holds for pairwise distances.  The states
here cache per-pair products (or squared distances) so a proposed swap
can be scored in O(n) and committed in O(n) to O(n^2), instead of the
O(n^2 d) full evaluation.

``peek``/``peek_many``/``commit`` on the state objects use 0-based
indices and are meant for optimizer internals.  The module-level
functions (``init_swap_state``, ``peek_swap_delta``, ``apply_swap_delta``)
take 1-based indices like the rest of the public interface.

Cached sums drift at floating-point roundoff rates, so states refresh
themselves from scratch every ``REBUILD_INTERVAL`` commits.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .criteria import (
    CriterionKind,
    CriterionSpec,
    CriterionValue,
    c2_pair_kernel,
    c2_point_kernel,
    pairwise_sq_distances,
    star_pair_kernel,
    star_point_kernel,
    w2_pair_kernel,
)
from .design import DesignMatrix, LhsDesign
from .errors import DegenerateDesignError, StaleStateError

__all__ = [
    "REBUILD_INTERVAL",
    "SwapDeltaState",
    "apply_swap_delta",
    "init_swap_state",
    "peek_swap_delta",
]

REBUILD_INTERVAL = 4096


class SwapDeltaState:
    """Base class holding the design copy and bookkeeping shared by all states."""

    def __init__(self, matrix: np.ndarray, spec: CriterionSpec) -> None:
        x = np.array(matrix, dtype=float, copy=True)
        if x.ndim != 2:
            raise ValueError(f"design must be 2-D, got shape {x.shape}")
        self._x = x
        self.spec = spec
        self.n, self.d = x.shape
        self._commits = 0
        self._col_cache: dict[int, np.ndarray] = {}
        # cap pair-matrix cache memory at roughly 64 MB
        self._max_cached = max(2, int(6.4e7 / (8 * self.n * self.n)))
        self._digest: str | None = None

    @property
    def matrix(self) -> np.ndarray:
        """Current design coordinates (read-only view)."""
        view = self._x.view()
        view.flags.writeable = False
        return view

    @property
    def value(self) -> float:
        raise NotImplementedError

    def peek(self, col: int, a: int, b: int) -> float:
        """Criterion value if rows ``a`` and ``b`` swapped in ``col`` (0-based)."""
        raise NotImplementedError

    def peek_many(self, col: int, a_idx: np.ndarray, b_idx: np.ndarray) -> np.ndarray:
        """Vectorized ``peek`` over candidate row pairs in one column."""
        raise NotImplementedError

    def commit(self, col: int, a: int, b: int) -> float:
        """Apply the swap to the cached state and return the new value."""
        raise NotImplementedError

    def rebuild(self) -> None:
        """Recompute all cached quantities from the coordinates."""
        raise NotImplementedError

    # -- shared helpers -----------------------------------------------------

    def _swap_coords(self, col: int, a: int, b: int) -> None:
        x = self._x
        x[a, col], x[b, col] = x[b, col], x[a, col]
        self._col_cache.pop(col, None)
        self._commits += 1
        if self._commits % REBUILD_INTERVAL == 0:
            self.rebuild()

    def _check_swap_args(self, col: int, a: int, b: int) -> None:
        if not 0 <= col < self.d:
            raise ValueError(f"column index {col} out of 0..{self.d - 1}")
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise ValueError(f"row indices ({a}, {b}) out of 0..{self.n - 1}")
        if a == b:
            raise ValueError("rows to swap must differ")

    def matrix_digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self._x).tobytes()).hexdigest()


class ProductSwapState(SwapDeltaState):
    """Swap state for the three L2 measures via their product kernels.

    Maintains the full pair-product matrix ``P`` (including diagonal),
    the per-point products and their sums.  The pair kernels are
    symmetric and depend on each column only through the two swapped
    values, so the pair (a, b) itself never changes under a swap of rows
    a and b.
    """

    def __init__(self, matrix: np.ndarray, spec: CriterionSpec) -> None:
        super().__init__(matrix, spec)
        d = self.d
        if spec.kind is CriterionKind.C2:
            self._const = (13.0 / 12.0) ** d
            self._b_coef = -2.0
            self._point_kernel = c2_point_kernel
            self._pair_kernel = c2_pair_kernel
            self._root = False
        elif spec.kind is CriterionKind.W2:
            self._const = -((4.0 / 3.0) ** d)
            self._b_coef = 0.0
            self._point_kernel = None
            self._pair_kernel = w2_pair_kernel
            self._root = False
        elif spec.kind is CriterionKind.L2STAR:
            if (self._x >= 1.0).any():
                # star kernels vanish at 1, which breaks ratio updates
                raise DegenerateDesignError(
                    "incremental star evaluation needs all coordinates strictly "
                    "below 1; evaluate directly instead"
                )
            self._const = (1.0 / 3.0) ** d
            self._b_coef = -2.0
            self._point_kernel = star_point_kernel
            self._pair_kernel = star_pair_kernel
            self._root = True
        else:
            raise ValueError(f"not a product-kernel criterion: {spec.kind}")
        self._point_cache: dict[int, np.ndarray] = {}
        self.rebuild()

    def rebuild(self) -> None:
        x = self._x
        n = self.n
        P = np.ones((n, n))
        for k in range(self.d):
            col = x[:, k]
            P *= self._pair_kernel(col[:, None], col[None, :])
        self._P = P
        self._s2 = float(P.sum())
        if self._point_kernel is not None:
            crow = np.ones(n)
            for k in range(self.d):
                crow *= self._point_kernel(x[:, k])
            self._crow = crow
            self._s1 = float(crow.sum())
        else:
            self._crow = None
            self._s1 = 0.0
        self._col_cache.clear()
        self._point_cache.clear()

    def _pair_col(self, col: int) -> np.ndarray:
        K = self._col_cache.get(col)
        if K is None:
            if len(self._col_cache) >= self._max_cached:
                self._col_cache.clear()
            c = self._x[:, col]
            K = self._pair_kernel(c[:, None], c[None, :])
            self._col_cache[col] = K
        return K

    def _point_col(self, col: int) -> np.ndarray:
        g = self._point_cache.get(col)
        if g is None:
            g = self._point_kernel(self._x[:, col])
            self._point_cache[col] = g
        return g

    def _value_from(self, s1: float, s2: float) -> float:
        n = self.n
        raw = self._const + self._b_coef * s1 / n + s2 / (n * n)
        if self._root:
            return float(np.sqrt(max(raw, 0.0)))
        return float(raw)

    @property
    def value(self) -> float:
        return self._value_from(self._s1, self._s2)

    def _deltas(self, col: int, a: int, b: int) -> tuple[float, float]:
        K = self._pair_col(col)
        P = self._P
        ka, kb = K[a], K[b]
        va = P[a] * (kb / ka - 1.0)
        vb = P[b] * (ka / kb - 1.0)
        # pair (a, b) and the diagonals are handled separately
        off = va.sum() - va[a] - va[b] + vb.sum() - vb[a] - vb[b]
        d_aa = P[a, a] * (K[b, b] / K[a, a] - 1.0)
        d_bb = P[b, b] * (K[a, a] / K[b, b] - 1.0)
        ds2 = 2.0 * off + d_aa + d_bb
        ds1 = 0.0
        if self._crow is not None:
            g = self._point_col(col)
            ds1 = self._crow[a] * (g[b] / g[a] - 1.0) + self._crow[b] * (g[a] / g[b] - 1.0)
        return ds1, ds2

    def peek(self, col: int, a: int, b: int) -> float:
        self._check_swap_args(col, a, b)
        ds1, ds2 = self._deltas(col, a, b)
        return self._value_from(self._s1 + ds1, self._s2 + ds2)

    def peek_many(self, col: int, a_idx: np.ndarray, b_idx: np.ndarray) -> np.ndarray:
        aa = np.asarray(a_idx, dtype=np.intp)
        bb = np.asarray(b_idx, dtype=np.intp)
        K = self._pair_col(col)
        P = self._P
        j = np.arange(aa.size)
        ra = K[bb] / K[aa] - 1.0
        rb = K[aa] / K[bb] - 1.0
        va = P[aa] * ra
        vb = P[bb] * rb
        off = (
            va.sum(axis=1) - va[j, aa] - va[j, bb]
            + vb.sum(axis=1) - vb[j, aa] - vb[j, bb]
        )
        kaa, kbb = K[aa, aa], K[bb, bb]
        d_diag = P[aa, aa] * (kbb / kaa - 1.0) + P[bb, bb] * (kaa / kbb - 1.0)
        ds2 = 2.0 * off + d_diag
        s1 = np.full(aa.shape, self._s1)
        if self._crow is not None:
            g = self._point_col(col)
            s1 = s1 + self._crow[aa] * (g[bb] / g[aa] - 1.0) + self._crow[bb] * (
                g[aa] / g[bb] - 1.0
            )
        n = self.n
        raw = self._const + self._b_coef * s1 / n + (self._s2 + ds2) / (n * n)
        if self._root:
            return np.sqrt(np.maximum(raw, 0.0))
        return raw

    def commit(self, col: int, a: int, b: int) -> float:
        self._check_swap_args(col, a, b)
        K = self._pair_col(col)
        P = self._P
        ds1, ds2 = self._deltas(col, a, b)
        pa_new = P[a] * (K[b] / K[a])
        pb_new = P[b] * (K[a] / K[b])
        pa_new[b] = P[a, b]
        pb_new[a] = P[b, a]
        pa_new[a] = P[a, a] * (K[b, b] / K[a, a])
        pb_new[b] = P[b, b] * (K[a, a] / K[b, b])
        P[a, :] = pa_new
        P[b, :] = pb_new
        P[:, a] = pa_new
        P[:, b] = pb_new
        self._s2 += ds2
        if self._crow is not None:
            g = self._point_col(col)
            ca_new = self._crow[a] * (g[b] / g[a])
            cb_new = self._crow[b] * (g[a] / g[b])
            self._crow[a] = ca_new
            self._crow[b] = cb_new
            self._s1 += ds1
            self._point_cache.pop(col, None)
        self._swap_coords(col, a, b)
        return self.value


class _DistanceSwapState(SwapDeltaState):
    """Shared distance bookkeeping: squared-distance matrix with inf diagonal."""

    def __init__(self, matrix: np.ndarray, spec: CriterionSpec) -> None:
        super().__init__(matrix, spec)
        if self.n < 2:
            raise ValueError("distance criteria need at least two points")

    def _base_rebuild(self) -> None:
        d2 = pairwise_sq_distances(self._x)
        np.fill_diagonal(d2, np.inf)
        if not (d2 > 0.0).all():
            raise DegenerateDesignError(
                "design has coincident points; distance criteria are degenerate"
            )
        self._d2 = d2
        self._col_cache.clear()

    def _sq_col(self, col: int) -> np.ndarray:
        C = self._col_cache.get(col)
        if C is None:
            if len(self._col_cache) >= self._max_cached:
                self._col_cache.clear()
            c = self._x[:, col]
            diff = c[:, None] - c[None, :]
            C = diff * diff
            self._col_cache[col] = C
        return C

    def _new_rows(
        self, col: int, a: int, b: int
    ) -> tuple[np.ndarray, np.ndarray]:
        # squared-distance rows of a and b after the swap; the (a, b)
        # pair keeps its distance and the diagonal stays +inf
        C = self._sq_col(col)
        D2 = self._d2
        ra = D2[a] - C[a] + C[b]
        rb = D2[b] - C[b] + C[a]
        ra[b] = D2[a, b]
        rb[a] = D2[b, a]
        ra[a] = np.inf
        rb[b] = np.inf
        return ra, rb

    def _new_rows_many(
        self, col: int, aa: np.ndarray, bb: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        C = self._sq_col(col)
        D2 = self._d2
        j = np.arange(aa.size)
        ra = D2[aa] - C[aa] + C[bb]
        rb = D2[bb] - C[bb] + C[aa]
        ra[j, bb] = D2[aa, bb]
        rb[j, aa] = D2[bb, aa]
        ra[j, aa] = np.inf
        rb[j, bb] = np.inf
        return ra, rb

    def _commit_distance(self, col: int, a: int, b: int) -> None:
        ra, rb = self._new_rows(col, a, b)
        D2 = self._d2
        D2[a, :] = ra
        D2[b, :] = rb
        D2[:, a] = ra
        D2[:, b] = rb


class MindistSwapState(_DistanceSwapState):
    """Swap state for the minimum pairwise distance.

    Keeps the three smallest squared distances per row so that, after
    excluding the two swapped rows' columns, every untouched row still
    has at least one surviving candidate for its minimum.
    """

    _TOP = 3

    def __init__(self, matrix: np.ndarray, spec: CriterionSpec) -> None:
        super().__init__(matrix, spec)
        self.rebuild()

    def rebuild(self) -> None:
        self._base_rebuild()
        n = self.n
        k = min(self._TOP, n - 1)
        idx = np.argpartition(self._d2, k - 1, axis=1)[:, :k]
        self._top_cols = idx
        self._top_vals = np.take_along_axis(self._d2, idx, axis=1)

    @property
    def value(self) -> float:
        return float(np.sqrt(self._top_vals.min()))

    def _min_after(self, ra: np.ndarray, rb: np.ndarray, a: int, b: int) -> float:
        m1 = min(ra.min(), rb.min())
        if self.n < self._TOP + 2:
            # too few candidates per row to survive two exclusions
            mask = np.ones(self.n, dtype=bool)
            mask[[a, b]] = False
            sub = self._d2[np.ix_(mask, mask)]
            m2 = sub.min() if sub.size else np.inf
        else:
            masked = np.where(
                (self._top_cols == a) | (self._top_cols == b), np.inf, self._top_vals
            )
            rowmin = masked.min(axis=1)
            rowmin[a] = np.inf
            rowmin[b] = np.inf
            m2 = rowmin.min()
        return float(np.sqrt(min(m1, m2)))

    def peek(self, col: int, a: int, b: int) -> float:
        self._check_swap_args(col, a, b)
        ra, rb = self._new_rows(col, a, b)
        return self._min_after(ra, rb, a, b)

    def peek_many(self, col: int, a_idx: np.ndarray, b_idx: np.ndarray) -> np.ndarray:
        aa = np.asarray(a_idx, dtype=np.intp)
        bb = np.asarray(b_idx, dtype=np.intp)
        if self.n < self._TOP + 2:
            return np.array([self.peek(col, int(a), int(b)) for a, b in zip(aa, bb)])
        ra, rb = self._new_rows_many(col, aa, bb)
        m1 = np.minimum(ra.min(axis=1), rb.min(axis=1))
        j = np.arange(aa.size)
        mask = (self._top_cols[None, :, :] == aa[:, None, None]) | (
            self._top_cols[None, :, :] == bb[:, None, None]
        )
        masked = np.where(mask, np.inf, self._top_vals[None, :, :])
        rowmin = masked.min(axis=2)
        rowmin[j, aa] = np.inf
        rowmin[j, bb] = np.inf
        return np.sqrt(np.minimum(m1, rowmin.min(axis=1)))

    def commit(self, col: int, a: int, b: int) -> float:
        self._check_swap_args(col, a, b)
        self._commit_distance(col, a, b)
        self._swap_coords(col, a, b)
        if self._commits % REBUILD_INTERVAL != 0:
            # rows changed everywhere; refresh the per-row top lists
            n = self.n
            k = min(self._TOP, n - 1)
            idx = np.argpartition(self._d2, k - 1, axis=1)[:, :k]
            self._top_cols = idx
            self._top_vals = np.take_along_axis(self._d2, idx, axis=1)
        return self.value


class PhipSwapState(_DistanceSwapState):
    """Swap state for the power-mean inverse-distance criterion.

    Stores ``U[i, j] = (dref^2 / d2[i, j])^(p/2)`` with zero diagonal and
    its total ``Ssum = sum_ij U``; the criterion is
    ``(Ssum / 2)^(1/p) / dref``.  The scaling reference ``dref`` is the
    minimum distance at the last rebuild, which keeps every stored term
    in a representable range as optimization pushes distances up.
    """

    def __init__(self, matrix: np.ndarray, spec: CriterionSpec) -> None:
        super().__init__(matrix, spec)
        self._p = float(spec.p)
        self.rebuild()

    def rebuild(self) -> None:
        self._base_rebuild()
        d2 = self._d2
        self._dref2 = float(d2.min())
        with np.errstate(divide="ignore"):
            U = (self._dref2 / d2) ** (self._p / 2.0)
        np.fill_diagonal(U, 0.0)
        self._u = U
        self._ssum = float(U.sum())

    def _u_from_d2(self, d2_rows: np.ndarray) -> np.ndarray:
        # a candidate pair far closer than the rebuild anchor may
        # overflow to +inf; that is a faithful "terrible move" signal
        with np.errstate(divide="ignore", over="ignore"):
            return (self._dref2 / d2_rows) ** (self._p / 2.0)

    def _phi(self, ssum: float | np.ndarray) -> float | np.ndarray:
        half = np.maximum(np.asarray(ssum) / 2.0, np.finfo(float).tiny)
        return half ** (1.0 / self._p) / np.sqrt(self._dref2)

    @property
    def value(self) -> float:
        return float(self._phi(self._ssum))

    def _sum_with_rows(self, a: int, b: int, ua: np.ndarray, ub: np.ndarray) -> float:
        # exact total with rows/columns a and b replaced; used when the
        # incremental difference would cancel against a dominant term
        U = self._u.copy()
        U[a, :] = ua
        U[b, :] = ub
        U[:, a] = ua
        U[:, b] = ub
        return float(U.sum())

    def peek(self, col: int, a: int, b: int) -> float:
        self._check_swap_args(col, a, b)
        ra, rb = self._new_rows(col, a, b)
        ua = self._u_from_d2(ra)
        ub = self._u_from_d2(rb)
        ua[a] = 0.0
        ub[b] = 0.0
        dssum = 2.0 * ((ua.sum() - self._u[a].sum()) + (ub.sum() - self._u[b].sum()))
        new_ssum = self._ssum + dssum
        if new_ssum < 1e-2 * self._ssum:
            # the move removes terms that dominate the running total, so
            # the incremental difference above has cancelled away most of
            # its precision; fall back to an exact replaced-row sum
            new_ssum = self._sum_with_rows(a, b, ua, ub)
        return float(self._phi(new_ssum))

    def peek_many(self, col: int, a_idx: np.ndarray, b_idx: np.ndarray) -> np.ndarray:
        aa = np.asarray(a_idx, dtype=np.intp)
        bb = np.asarray(b_idx, dtype=np.intp)
        ra, rb = self._new_rows_many(col, aa, bb)
        ua = self._u_from_d2(ra)
        ub = self._u_from_d2(rb)
        j = np.arange(aa.size)
        ua[j, aa] = 0.0
        ub[j, bb] = 0.0
        dssum = 2.0 * (
            ua.sum(axis=1) - self._u[aa].sum(axis=1)
            + ub.sum(axis=1) - self._u[bb].sum(axis=1)
        )
        new_ssum = self._ssum + dssum
        cancelled = np.nonzero(new_ssum < 1e-2 * self._ssum)[0]
        for k in cancelled:
            new_ssum[k] = self._sum_with_rows(int(aa[k]), int(bb[k]), ua[k], ub[k])
        return np.asarray(self._phi(new_ssum), dtype=float)

    def commit(self, col: int, a: int, b: int) -> float:
        self._check_swap_args(col, a, b)
        ra, rb = self._new_rows(col, a, b)
        ua = self._u_from_d2(ra)
        ub = self._u_from_d2(rb)
        ua[a] = 0.0
        ub[b] = 0.0
        self._commit_distance(col, a, b)
        U = self._u
        U[a, :] = ua
        U[b, :] = ub
        U[:, a] = ua
        U[:, b] = ub
        # the terms span p/2 orders of dynamic range, so the running
        # total is re-summed from the (exactly maintained) pair matrix
        # rather than adjusted by a difference that cancellation would
        # erode over a long swap chain
        self._ssum = float(U.sum())
        self._swap_coords(col, a, b)
        if not np.isfinite(self._ssum) or self._ssum > 1e250:
            # distances fell far below the rebuild anchor; re-anchor
            self.rebuild()
        return self.value


def init_swap_state(
    design: DesignMatrix | LhsDesign | np.ndarray, spec: CriterionSpec
) -> SwapDeltaState:
    """Build an incremental evaluation state for ``design`` under ``spec``.

    The state takes its own copy of the coordinates; later changes to the
    caller's design do not affect it.
    """
    matrix = design.matrix if isinstance(design, (DesignMatrix, LhsDesign)) else design
    if spec.kind in (CriterionKind.C2, CriterionKind.W2, CriterionKind.L2STAR):
        state: SwapDeltaState = ProductSwapState(matrix, spec)
    elif spec.kind is CriterionKind.MINDIST:
        state = MindistSwapState(matrix, spec)
    elif spec.kind is CriterionKind.PHIP:
        state = PhipSwapState(matrix, spec)
    else:
        raise ValueError(f"unknown criterion kind {spec.kind!r}")
    state._digest = state.matrix_digest()
    return state


def peek_swap_delta(
    state: SwapDeltaState, column: int, row_a: int, row_b: int
) -> CriterionValue:
    """Value the criterion would take after the swap, without committing.

    ``column``, ``row_a`` and ``row_b`` are 1-based.
    """
    _check_1based(state, column, row_a, row_b)
    v = state.peek(column - 1, row_a - 1, row_b - 1)
    return CriterionValue(float(v), state.spec)


def apply_swap_delta(
    state: SwapDeltaState, column: int, row_a: int, row_b: int
) -> tuple[CriterionValue, SwapDeltaState]:
    """Commit an elementary swap and return the updated criterion value.

    ``column``, ``row_a`` and ``row_b`` are 1-based.  Raises
    ``StaleStateError`` when the tracked coordinates were mutated by
    anything other than this function since the state was created, since
    the cached sums would then be silently wrong.
    """
    _check_1based(state, column, row_a, row_b)
    if state._digest is not None and state.matrix_digest() != state._digest:
        raise StaleStateError(
            "design coordinates changed outside the swap interface; "
            "create a fresh state with init_swap_state"
        )
    v = state.commit(column - 1, row_a - 1, row_b - 1)
    state._digest = state.matrix_digest()
    return CriterionValue(float(v), state.spec), state


def _check_1based(state: SwapDeltaState, column: int, row_a: int, row_b: int) -> None:
    if not 1 <= column <= state.d:
        raise ValueError(f"column {column} out of 1..{state.d}")
    for r in (row_a, row_b):
        if not 1 <= r <= state.n:
            raise ValueError(f"row {r} out of 1..{state.n}")
    if row_a == row_b:
        raise ValueError("rows to swap must differ")
