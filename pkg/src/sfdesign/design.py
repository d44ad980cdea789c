"""Design matrices and Latin hypercube samples on the unit hypercube.

A design is an ``(n, d)`` matrix whose rows are points in ``[0, 1]^d``.
Latin hypercube samples additionally carry, per column, a permutation of
``1..n`` assigning each point to one stratum ``[(k-1)/n, k/n)`` (the last
stratum is closed at 1).  All row and column indices in the public
interface are 1-based; the underlying numpy arrays are plain 0-based
arrays.
"""

from __future__ import annotations

import enum
import io
import os
import tempfile
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DesignIoError

__all__ = [
    "DesignMatrix",
    "LhsDesign",
    "LhsVariant",
    "LhsViolation",
    "atomic_write_text",
    "default_rng",
    "elementary_swap",
    "extract_subprojection",
    "generate_centered_lhs",
    "generate_random_lhs",
    "generate_srs",
    "lhs_from_matrix",
    "lhs_from_permutations",
    "read_design_csv",
    "validate_lhs",
    "write_design_csv",
]


def default_rng(seed: int) -> np.random.Generator:
    """Return the package-wide deterministic generator for ``seed``.

    A counter-based Philox bit generator keyed directly on the seed is
    used so that identical seeds reproduce identical streams across
    platforms and process invocations.
    """
    return np.random.Generator(np.random.Philox(key=seed))


class LhsVariant(enum.Enum):
    """Placement rule for a point inside its stratum."""

    RANDOM_IN_CELL = "random-in-cell"
    CENTERED = "centered"


@dataclass(frozen=True)
class DesignMatrix:
    """An ``(n, d)`` array of points in the unit hypercube.

    Attributes
    ----------
    matrix : numpy.ndarray
        Float array of shape ``(n, d)`` with all entries in ``[0, 1]``.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError(f"design must be a 2-D array, got shape {m.shape}")
        if not np.isfinite(m).all():
            raise ValueError("design contains non-finite entries")
        if (m < 0.0).any() or (m > 1.0).any():
            raise ValueError("design entries must lie in [0, 1]")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class LhsDesign:
    """A Latin hypercube sample together with its stratum assignments.

    Attributes
    ----------
    matrix : numpy.ndarray
        Point coordinates, shape ``(n, d)``.
    permutations : numpy.ndarray
        Integer array of shape ``(n, d)``; ``permutations[i, j]`` is the
        1-based stratum index of point ``i`` in column ``j``.  Each column
        is a permutation of ``1..n``.
    variant : LhsVariant
        Placement rule the coordinates follow.
    """

    matrix: np.ndarray
    permutations: np.ndarray
    variant: LhsVariant = LhsVariant.RANDOM_IN_CELL

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=float)
        p = np.asarray(self.permutations, dtype=np.int64)
        if m.ndim != 2:
            raise ValueError(f"design must be a 2-D array, got shape {m.shape}")
        if p.shape != m.shape:
            raise ValueError(
                f"permutations shape {p.shape} does not match matrix shape {m.shape}"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "permutations", p)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]

    def as_design_matrix(self) -> DesignMatrix:
        return DesignMatrix(self.matrix)


def _positions_from_permutations(
    perms: np.ndarray, variant: LhsVariant, rng: np.random.Generator | None
) -> np.ndarray:
    n = perms.shape[0]
    if variant is LhsVariant.CENTERED:
        return (perms - 0.5) / n
    if rng is None:
        raise ValueError("random-in-cell placement requires a generator")
    u = rng.random(perms.shape)
    return (perms - 1 + u) / n


def generate_random_lhs(n: int, d: int, seed: int) -> LhsDesign:
    """Draw a Latin hypercube sample with uniform placement in each cell.

    Per column an independent uniform permutation assigns the ``n``
    points to the ``n`` strata; each point is then placed uniformly at
    random inside its stratum.

    Parameters
    ----------
    n, d : int
        Number of points and number of columns, both at least 1.
    seed : int
        Seed for the deterministic generator.

    Returns
    -------
    LhsDesign
    """
    _check_nd(n, d)
    rng = default_rng(seed)
    perms = np.empty((n, d), dtype=np.int64)
    for j in range(d):
        perms[:, j] = rng.permutation(n) + 1
    x = _positions_from_permutations(perms, LhsVariant.RANDOM_IN_CELL, rng)
    return LhsDesign(x, perms, LhsVariant.RANDOM_IN_CELL)


def generate_centered_lhs(n: int, d: int, seed: int) -> LhsDesign:
    """Draw a Latin hypercube sample with points at stratum midpoints."""
    _check_nd(n, d)
    rng = default_rng(seed)
    perms = np.empty((n, d), dtype=np.int64)
    for j in range(d):
        perms[:, j] = rng.permutation(n) + 1
    x = _positions_from_permutations(perms, LhsVariant.CENTERED, None)
    return LhsDesign(x, perms, LhsVariant.CENTERED)


def generate_srs(n: int, d: int, seed: int) -> DesignMatrix:
    """Draw ``n`` points i.i.d. uniform on ``[0, 1)^d`` (no stratification)."""
    _check_nd(n, d)
    rng = default_rng(seed)
    return DesignMatrix(rng.random((n, d)))


def lhs_from_permutations(
    perms: np.ndarray,
    variant: LhsVariant = LhsVariant.CENTERED,
    seed: int | None = None,
) -> LhsDesign:
    """Build an LHS from explicit 1-based stratum permutations.

    ``perms`` must be ``(n, d)`` with each column a permutation of
    ``1..n``.  Random-in-cell placement requires ``seed``.
    """
    p = np.asarray(perms, dtype=np.int64)
    if p.ndim != 2:
        raise ValueError("permutations must be a 2-D array")
    n = p.shape[0]
    for j in range(p.shape[1]):
        if not np.array_equal(np.sort(p[:, j]), np.arange(1, n + 1)):
            raise ValueError(f"column {j + 1} is not a permutation of 1..{n}")
    rng = default_rng(seed) if seed is not None else None
    if variant is LhsVariant.RANDOM_IN_CELL and rng is None:
        raise ValueError("random-in-cell placement requires a seed")
    x = _positions_from_permutations(p, variant, rng)
    return LhsDesign(x, p, variant)


def lhs_from_matrix(
    design: DesignMatrix | np.ndarray, variant: LhsVariant = LhsVariant.RANDOM_IN_CELL
) -> LhsDesign:
    """Recover stratum permutations from coordinates alone.

    Each coordinate is assigned the stratum containing it; the result is
    only returned when every column turns out to be a valid permutation,
    otherwise ``DesignIoError`` is raised.  Used when reading a design
    back from a file, where explicit permutations are not stored.
    """
    if not isinstance(design, DesignMatrix):
        design = DesignMatrix(design)
    m = design.matrix
    n = m.shape[0]
    # floor(x * n) is the 0-based stratum except at the right edge x == 1
    perms = np.minimum(np.floor(m * n).astype(np.int64), n - 1) + 1
    cand = LhsDesign(m, perms, variant)
    ok, violations = validate_lhs(cand)
    if not ok:
        first = violations[0]
        raise DesignIoError(
            f"matrix is not a Latin hypercube sample: column {first.column}, "
            f"row {first.row}: {first.reason}"
        )
    return cand


class LhsViolation(NamedTuple):
    """One reason a design fails Latin hypercube validation (1-based indices)."""

    row: int
    column: int
    reason: str


def validate_lhs(design: LhsDesign) -> tuple[bool, list[LhsViolation]]:
    """Check the Latin hypercube property and placement rule.

    Verifies, for every column, that the stratum indices form a
    permutation of ``1..n``, that every coordinate lies inside its
    claimed stratum ``[(k-1)/n, k/n)`` (last stratum closed at 1), and,
    for centered designs, that every coordinate equals its stratum
    midpoint exactly.

    Returns
    -------
    (bool, list[LhsViolation])
        Flag plus one violation record per offending entry.  Indices in
        the records are 1-based.
    """
    m = design.matrix
    p = design.permutations
    n, d = m.shape
    violations: list[LhsViolation] = []
    for j in range(d):
        col = p[:, j]
        counts = np.bincount(col, minlength=n + 1)
        if counts[0] > 0 or (col < 1).any() or (col > n).any():
            for i in np.nonzero((col < 1) | (col > n))[0]:
                violations.append(
                    LhsViolation(int(i) + 1, j + 1, f"stratum index {col[i]} out of 1..{n}")
                )
            continue
        dup = np.nonzero(counts[1:] != 1)[0] + 1
        for k in dup:
            if counts[k] > 1:
                for i in np.nonzero(col == k)[0]:
                    violations.append(
                        LhsViolation(int(i) + 1, j + 1, f"stratum {k} occupied {counts[k]} times")
                    )
        if dup.size:
            continue
        lo = (col - 1) / n
        hi = col / n
        x = m[:, j]
        # right edge: the last stratum includes 1 exactly
        inside = (x >= lo) & ((x < hi) | ((col == n) & (x <= 1.0)))
        for i in np.nonzero(~inside)[0]:
            violations.append(
                LhsViolation(
                    int(i) + 1,
                    j + 1,
                    f"coordinate {x[i]!r} outside stratum {col[i]} of {n}",
                )
            )
        if design.variant is LhsVariant.CENTERED:
            mid = (col - 0.5) / n
            off = np.nonzero(x != mid)[0]
            for i in off:
                violations.append(
                    LhsViolation(int(i) + 1, j + 1, "coordinate is not the stratum midpoint")
                )
    return (len(violations) == 0, violations)


def elementary_swap(design: LhsDesign, column: int, row_a: int, row_b: int) -> LhsDesign:
    """Exchange the entries of two rows within one column (all 1-based).

    This is the basic perturbation used by the optimizers: it permutes
    one column's values between two points, so the Latin hypercube
    property is preserved by construction.

    Returns a new design; the input is not modified.
    """
    n, d = design.matrix.shape
    if not 1 <= column <= d:
        raise ValueError(f"column {column} out of 1..{d}")
    for r in (row_a, row_b):
        if not 1 <= r <= n:
            raise ValueError(f"row {r} out of 1..{n}")
    if row_a == row_b:
        raise ValueError("rows to swap must differ")
    j = column - 1
    a, b = row_a - 1, row_b - 1
    m = design.matrix.copy()
    p = design.permutations.copy()
    m[a, j], m[b, j] = m[b, j], m[a, j]
    p[a, j], p[b, j] = p[b, j], p[a, j]
    return LhsDesign(m, p, design.variant)


def extract_subprojection(
    design: DesignMatrix | LhsDesign, columns: Sequence[int]
) -> DesignMatrix | LhsDesign:
    """Restrict a design to a subset of columns (1-based, order kept).

    For an ``LhsDesign`` the per-column stratum assignments are sliced
    along with the coordinates, so any single column or column subset of
    an LHS is again an LHS.
    """
    cols = list(columns)
    if len(cols) == 0:
        raise ValueError("need at least one column")
    if len(set(cols)) != len(cols):
        raise ValueError(f"duplicate columns in {cols}")
    d = design.matrix.shape[1]
    for c in cols:
        if not 1 <= c <= d:
            raise ValueError(f"column {c} out of 1..{d}")
    idx = [c - 1 for c in cols]
    if isinstance(design, LhsDesign):
        return LhsDesign(
            design.matrix[:, idx].copy(),
            design.permutations[:, idx].copy(),
            design.variant,
        )
    return DesignMatrix(design.matrix[:, idx].copy())


# ---------------------------------------------------------------------------
# CSV interchange format
#
#   # sfd-design n=<N> d=<d>
#   x1,x2,...,xd
#   <17-significant-digit floats, comma-separated, one row per point>
#
# The comment line and the column header are both optional on input.
# ---------------------------------------------------------------------------

_MAGIC = "# sfd-design"


def format_design_csv(design: DesignMatrix | LhsDesign) -> str:
    """Render a design in the interchange format as a string."""
    m = design.matrix
    n, d = m.shape
    buf = io.StringIO()
    buf.write(f"{_MAGIC} n={n} d={d}\n")
    buf.write(",".join(f"x{j + 1}" for j in range(d)) + "\n")
    for i in range(n):
        buf.write(",".join(f"{v:.17g}" for v in m[i]) + "\n")
    return buf.getvalue()


def write_design_csv(design: DesignMatrix | LhsDesign, path: str | os.PathLike) -> None:
    """Write a design to ``path`` in the interchange format.

    Floats are written with 17 significant digits so a read-back
    reproduces the matrix bit for bit.  The write is atomic: the file
    appears complete or not at all.
    """
    atomic_write_text(path, format_design_csv(design))


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_design_csv(path: str | os.PathLike) -> DesignMatrix:
    """Read a design written in the interchange format.

    Both the leading comment line and the column-name header are
    optional.  Raises ``DesignIoError`` on malformed content, ragged
    rows, non-numeric fields, out-of-range values, or a header that
    contradicts the data.
    """
    try:
        with open(path, "r") as f:
            lines = f.read().splitlines()
    except OSError as exc:
        raise DesignIoError(f"cannot read design file {path}: {exc}") from exc
    return _parse_design_lines(lines, str(path))


def _parse_design_lines(lines: list[str], origin: str) -> DesignMatrix:
    declared_n = declared_d = None
    rows: list[list[float]] = []
    body_started = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if body_started:
                raise DesignIoError(f"{origin}:{lineno}: comment after data rows")
            if line.startswith(_MAGIC):
                declared_n, declared_d = _parse_magic(line, origin, lineno)
            continue
        fields = [f.strip() for f in line.split(",")]
        if not body_started and all(_looks_like_name(f) for f in fields):
            # optional x1,...,xd header
            body_started = True
            continue
        body_started = True
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise DesignIoError(f"{origin}:{lineno}: non-numeric field: {exc}") from exc
    if not rows:
        raise DesignIoError(f"{origin}: no data rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DesignIoError(
                f"{origin}: row {i + 1} has {len(r)} fields, expected {width}"
            )
    m = np.asarray(rows, dtype=float)
    if declared_n is not None and (declared_n, declared_d) != m.shape:
        raise DesignIoError(
            f"{origin}: header declares n={declared_n} d={declared_d} "
            f"but data is {m.shape[0]}x{m.shape[1]}"
        )
    try:
        return DesignMatrix(m)
    except ValueError as exc:
        raise DesignIoError(f"{origin}: {exc}") from exc


def _parse_magic(line: str, origin: str, lineno: int) -> tuple[int, int]:
    try:
        parts = dict(tok.split("=", 1) for tok in line[len(_MAGIC):].split())
        return int(parts["n"]), int(parts["d"])
    except (KeyError, ValueError) as exc:
        raise DesignIoError(f"{origin}:{lineno}: malformed header: {line!r}") from exc


def _looks_like_name(field: str) -> bool:
    if not field:
        return False
    try:
        float(field)
        return False
    except ValueError:
        return True


def _check_nd(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n} d={d}")
