"""Dense linear-algebra helpers: rank/kernel decisions and canonical bases.

Every rank decision in the package funnels through :func:`rank_and_kernel`
so that the relative cutoff is applied uniformly.
"""

from __future__ import annotations

import numpy as np

from .errors import NonPositiveDefiniteError

# Coordinate scan order used to canonicalize bases of 3x3 matrix subspaces:
# lower triangle first, then the diagonal, then the upper triangle.  For
# metric-skew subspaces this pivots on the lower-triangle entries, which is
# the parameterization the closed-form data is written in.
MATRIX_PIVOT_ORDER = [(1, 0), (2, 0), (2, 1), (0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
_FLAT_PIVOTS = [3 * i + j for i, j in MATRIX_PIVOT_ORDER]


def rank_and_kernel(
    m: np.ndarray, tol_rank: float, scale: float | None = None
) -> tuple[int, np.ndarray]:
    """Rank of ``m`` and an orthonormal basis of its (right) null space.

    Returns ``(rank, kernel)`` where ``kernel`` has one row per null vector.
    The cutoff is relative: singular values below ``tol_rank * scale`` are
    treated as zero, where ``scale`` defaults to ``max|m|``.  Callers solving
    a residual system (where the whole matrix may be numerically zero) must
    pass the natural scale of the data the matrix was built from; otherwise
    rounding noise is mistaken for full rank.  A matrix at scale zero has
    rank 0 and full kernel.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    ncols = m.shape[1]
    if scale is None:
        scale = float(np.max(np.abs(m))) if m.size else 0.0
    if scale <= 0.0:
        return 0, np.eye(ncols)
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > tol_rank * scale))
    return rank, vt[rank:]


def canonical_matrix_basis(mats: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Reduce a spanning set of 3x3 matrices to a canonical (RREF-like) basis.

    Pivot columns are scanned in MATRIX_PIVOT_ORDER and each basis matrix is
    scaled so its pivot entry is 1 with zeros at the other pivots.  The result
    is deterministic for a given span, which keeps reported generators stable.
    """
    mats = np.asarray(mats, dtype=float)
    if mats.size == 0:
        return np.zeros((0, 3, 3))
    rows = mats.reshape(len(mats), 9).copy()
    scale = max(float(np.max(np.abs(rows))), 1.0)
    pivots: list[tuple[int, int]] = []  # (column, row index) in discovery order
    used = np.zeros(len(rows), dtype=bool)
    for col in _FLAT_PIVOTS:
        best, best_val = -1, tol * scale
        for i in range(len(rows)):
            if not used[i] and abs(rows[i, col]) > best_val:
                best, best_val = i, abs(rows[i, col])
        if best < 0:
            continue
        used[best] = True
        pivot_row = rows[best] / rows[best, col]
        for i in range(len(rows)):
            if i != best:
                rows[i] = rows[i] - rows[i, col] * pivot_row
        pivots.append((col, best))
    if not pivots:
        return np.zeros((0, 3, 3))
    # the working rows keep being eliminated by later pivots, so normalizing
    # them only now yields a fully reduced (input-independent) basis
    return np.array([(rows[i] / rows[i, col]).reshape(3, 3) for col, i in pivots])


def subspace_residual(basis: np.ndarray, v: np.ndarray) -> float:
    """Distance from ``v`` to the span of ``basis`` (rows/matrices)."""
    v = np.asarray(v, dtype=float).ravel()
    if basis.size == 0:
        return float(np.linalg.norm(v))
    b = np.asarray(basis, dtype=float).reshape(len(basis), -1)
    coeff, *_ = np.linalg.lstsq(b.T, v, rcond=None)
    return float(np.linalg.norm(b.T @ coeff - v))


def check_spd(gram: np.ndarray, sym_tol: float = 1e-10) -> np.ndarray:
    """Validate a symmetric positive-definite Gram matrix.

    Symmetry is checked relative to the magnitude of the entries; positive
    definiteness through the leading principal minors.  Raises
    NonPositiveDefiniteError otherwise, returns the symmetrized matrix.
    """
    g = np.asarray(gram, dtype=float)
    if g.shape != (3, 3):
        raise NonPositiveDefiniteError(f"Gram matrix must be 3x3, got shape {g.shape}")
    scale = max(float(np.max(np.abs(g))), 1.0)
    if np.max(np.abs(g - g.T)) > sym_tol * scale:
        raise NonPositiveDefiniteError("Gram matrix is not symmetric")
    g = 0.5 * (g + g.T)
    for k in range(1, 4):
        if np.linalg.det(g[:k, :k]) <= 0.0:
            raise NonPositiveDefiniteError(
                f"Gram matrix is not positive definite (leading {k}x{k} minor <= 0)"
            )
    return g
