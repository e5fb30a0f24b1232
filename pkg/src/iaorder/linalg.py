"""Rank-revealing primitives over complex matrices.

Every routine here makes rank decisions the same way: a singular value
counts as nonzero when it exceeds ``tol`` times the largest singular value.
``tol`` is therefore a *relative* tolerance; passing ``None`` selects the
standard rank-revealing default ``max(rows, cols) * eps``.

Column phase/sign of any returned basis is unspecified: callers must treat
bases as subspaces, not as canonical matrices.
"""

import numpy as np

__all__ = [
    "default_tolerance",
    "numerical_rank",
    "orthonormal_range",
    "null_space_basis",
]

_EPS = float(np.finfo(np.float64).eps)


def default_tolerance(a: np.ndarray) -> float:
    """Relative rank cutoff for ``a``: ``max(rows, cols) * eps``."""
    return max(a.shape) * _EPS


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def _check_tol(tol) -> None:
    if tol is not None and tol < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tol}")


def numerical_rank(a, tol: float | None = None) -> int:
    """Count singular values above ``tol`` times the largest one.

    The zero matrix has rank 0 regardless of ``tol``.
    """
    a = _as_matrix(a)
    _check_tol(tol)
    s = np.linalg.svd(a, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return 0
    if tol is None:
        tol = default_tolerance(a)
    return int(np.count_nonzero(s > tol * smax))


def orthonormal_range(a, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the column space of ``a``.

    Returns a ``rows x r`` matrix with orthonormal columns, where ``r`` is
    the numerical rank of ``a`` at the given relative tolerance.
    """
    a = _as_matrix(a)
    _check_tol(tol)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if tol is None:
        tol = default_tolerance(a)
    smax = float(s[0]) if s.size else 0.0
    r = int(np.count_nonzero(s > tol * smax)) if smax > 0.0 else 0
    return u[:, :r]


def null_space_basis(a, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of ``{x : a @ x = 0}``.

    Returns a ``cols x (cols - r)`` matrix with orthonormal columns; for a
    full-rank square or tall ``a`` the result has zero columns. Each column
    ``x`` satisfies ``|a @ x| <= tol * |a| * |x|`` up to factors of order
    machine epsilon.
    """
    a = _as_matrix(a)
    _check_tol(tol)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if tol is None:
        tol = default_tolerance(a)
    smax = float(s[0]) if s.size else 0.0
    r = int(np.count_nonzero(s > tol * smax)) if smax > 0.0 else 0
    return vh[r:, :].conj().T
