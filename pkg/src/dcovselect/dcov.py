"""Sample distance covariance, variance and correlation.

All statistics are the biased sample versions built from pairwise Euclidean
distance matrices: with ``a_ij = |x_i - x_j|`` and the double-centered matrix

    A_ij = a_ij - rowmean_i - colmean_j + grandmean,

the squared sample distance covariance of two blocks observed on the same
``n`` subjects is ``(1/n^2) * sum_ij A_ij * B_ij``.  A "block" is an ``n x k``
matrix whose ``k >= 1`` columns are treated as one vector-valued variable, so
joint statistics over several variables are just statistics of the
column-concatenated block.

Centered matrices are cheap to cache and reuse: screening a large feature
panel against one response centers the response once and pairs it with every
feature's matrix.  All functions are pure; results depend only on the inputs.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DataValidationError

__all__ = [
    "CenteredDistanceMatrix",
    "DCovStats",
    "as_block",
    "pairwise_distances",
    "double_center",
    "centered_distances",
    "dcov2",
    "dvar2",
    "dcor2",
    "dcov2_joint",
    "dcov2_centered",
    "dcor2_centered",
]


@dataclass(frozen=True)
class CenteredDistanceMatrix:
    """Double-centered distance matrix with its cached means.

    ``entries`` is symmetric and every row and column sums to zero (up to
    roundoff).  The means of the raw distance matrix are kept so callers can
    audit the centering.
    """

    entries: np.ndarray
    row_means: np.ndarray
    col_means: np.ndarray
    grand_mean: float

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class DCovStats:
    """Squared distance covariance, the two variances, and correlation.

    ``r2`` is ``v2 / sqrt(vx2 * vy2)`` clipped to [0, 1], and defined as 0
    whenever either variance vanishes (constant block).
    """

    v2: float
    vx2: float
    vy2: float
    r2: float


def as_block(values) -> np.ndarray:
    """Validate and return a variable block as an ``n x k`` float array.

    1-D input is treated as a single column.  Rejects fewer than two rows
    (centering is undefined) and any non-finite entry.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DataValidationError(f"variable block must be 1-D or 2-D, got ndim={x.ndim}")
    if x.shape[0] < 2:
        raise DataValidationError(f"variable block needs at least 2 rows, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise DataValidationError("variable block contains non-finite values")
    return x


def pairwise_distances(block) -> np.ndarray:
    """Euclidean distance matrix of the rows of ``block``.

    Symmetric with zero diagonal; entry (i, j) is ``|row_i - row_j|``.
    """
    x = as_block(block)
    d = cdist(x, x, metric="euclidean")
    return d


def double_center(d: np.ndarray) -> CenteredDistanceMatrix:
    """Double-center a symmetric zero-diagonal distance matrix.

    Subtracts row and column means and adds back the grand mean, so the
    result has zero row and column sums.
    """
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DataValidationError(f"distance matrix must be square, got shape {d.shape}")
    if d.shape[0] < 2:
        raise DataValidationError("distance matrix needs at least 2 rows")
    if not np.all(np.isfinite(d)):
        raise DataValidationError("distance matrix contains non-finite values")
    scale = np.abs(d).max()
    if not np.allclose(d, d.T, rtol=0.0, atol=1e-9 * max(scale, 1.0)):
        raise DataValidationError("distance matrix is not symmetric")
    if np.abs(np.diag(d)).max() > 1e-9 * max(scale, 1.0):
        raise DataValidationError("distance matrix has a nonzero diagonal")

    row_means = d.mean(axis=1)
    col_means = d.mean(axis=0)
    grand_mean = float(d.mean())
    entries = d - row_means[:, None] - col_means[None, :] + grand_mean
    return CenteredDistanceMatrix(
        entries=entries,
        row_means=row_means,
        col_means=col_means,
        grand_mean=grand_mean,
    )


def centered_distances(block) -> CenteredDistanceMatrix:
    """Pairwise distances of ``block`` followed by double centering."""
    return double_center(pairwise_distances(block))


def dcov2_centered(a: CenteredDistanceMatrix, b: CenteredDistanceMatrix) -> float:
    """Squared distance covariance from two precomputed centered matrices."""
    if a.n != b.n:
        raise ValueError(f"sample counts differ: {a.n} vs {b.n}")
    v2 = float(np.mean(a.entries * b.entries))
    # The biased estimator is nonnegative in exact arithmetic; clamp roundoff.
    return v2 if v2 > 0.0 else 0.0


def dcov2(x, y) -> float:
    """Squared sample distance covariance between two blocks.

    Symmetric in its arguments and nonnegative; zero when either block is
    constant.
    """
    x = as_block(x)
    y = as_block(y)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"sample counts differ: {x.shape[0]} vs {y.shape[0]}")
    return dcov2_centered(centered_distances(x), centered_distances(y))


def dvar2(x) -> float:
    """Squared sample distance variance, ``dcov2(x, x)``."""
    a = centered_distances(x)
    return dcov2_centered(a, a)


def dcor2_centered(a: CenteredDistanceMatrix, b: CenteredDistanceMatrix) -> DCovStats:
    """Distance covariance/variance/correlation from centered matrices."""
    v2 = dcov2_centered(a, b)
    vx2 = dcov2_centered(a, a)
    vy2 = dcov2_centered(b, b)
    denom2 = vx2 * vy2
    if denom2 > 0.0:
        r2 = min(v2 / np.sqrt(denom2), 1.0)
    else:
        r2 = 0.0
    return DCovStats(v2=v2, vx2=vx2, vy2=vy2, r2=float(r2))


def dcor2(x, y) -> DCovStats:
    """Squared sample distance correlation of two blocks, with components."""
    x = as_block(x)
    y = as_block(y)
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"sample counts differ: {x.shape[0]} vs {y.shape[0]}")
    return dcor2_centered(centered_distances(x), centered_distances(y))


def dcov2_joint(selected, y) -> float:
    """Squared distance covariance of several blocks, jointly, against ``y``.

    The blocks are column-concatenated into a single vector-valued variable;
    equivalent to padding each block with zero columns to a common width and
    summing (a constant or zero column contributes nothing to any pairwise
    distance).
    """
    blocks = [as_block(b) for b in selected]
    if not blocks:
        raise ValueError("joint distance covariance needs at least one block")
    n = blocks[0].shape[0]
    for b in blocks[1:]:
        if b.shape[0] != n:
            raise ValueError(f"sample counts differ: {n} vs {b.shape[0]}")
    joint = blocks[0] if len(blocks) == 1 else np.hstack(blocks)
    return dcov2(joint, y)
