"""Small dense real-matrix kernels with an explicit tolerance policy.

Everything here works on plain ``numpy`` float arrays.  The 2x2 routines are
closed-form so that the squeezing parameters they feed stay exactly
reproducible; the larger kernels lean on LAPACK through numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParam, NotOrthonormal, RankDeficient, Singular


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for rank decisions and orthogonality checks."""

    rank_eps: float = 1e-10
    ortho_eps: float = 1e-10

    def __post_init__(self):
        if not 0.0 < self.rank_eps <= 1e-6:
            raise InvalidParam(f"rank_eps must lie in (0, 1e-6], got {self.rank_eps}")
        if not 0.0 < self.ortho_eps <= 1e-8:
            raise InvalidParam(f"ortho_eps must lie in (0, 1e-8], got {self.ortho_eps}")


DEFAULT_TOL = Tolerance()


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Convert to a 2-D float array, rejecting NaN/Inf."""
    arr = np.array(m, dtype=float, ndmin=2)
    if arr.ndim != 2:
        raise InvalidParam(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParam(f"{name} contains non-finite entries")
    return arr


def ortho_error(q: np.ndarray) -> float:
    """Max-norm deviation of ``q q^T`` from the identity."""
    q = np.asarray(q, dtype=float)
    return float(np.max(np.abs(q @ q.T - np.eye(q.shape[0])))) if q.size else 0.0


def null_space_1d(rows, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unit vector spanning the null space of a (k-1) x k matrix.

    The sign is fixed so that the first component whose magnitude exceeds
    ``rank_eps`` is positive.  Raises :class:`RankDeficient` when the rows
    span fewer than k-1 dimensions.
    """
    rows = as_matrix(rows, "rows")
    m, k = rows.shape
    if m != k - 1:
        raise RankDeficient(f"expected k-1 = {k - 1} rows for a 1-D null space, got {m}")
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    scale = max(1.0, float(s[0])) if s.size else 1.0
    if s.size and s[-1] <= tol.rank_eps * scale:
        raise RankDeficient(
            f"row space has dimension < {m} (smallest singular value {s[-1]:.3e})"
        )
    v = vt[-1]
    v = v / np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > tol.rank_eps)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v


def orthonormal_complete(
    given: Sequence[Sequence[float]] | np.ndarray,
    dim: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Extend orthonormal row vectors to a full orthogonal matrix.

    The given vectors become the leading rows, unchanged.  Further rows are
    drawn from the standard basis by Gram-Schmidt with a second
    re-orthogonalisation pass; at each step the basis vector with the
    largest residual is taken (ties go to the lowest index), which keeps the
    completion deterministic.
    """
    given = np.array(given, dtype=float)
    if given.size == 0:
        if dim is None:
            raise InvalidParam("dim is required when no vectors are given")
        given = np.zeros((0, dim))
    given = np.atleast_2d(given)
    k = given.shape[1] if dim is None else dim
    if given.shape[1] != k:
        raise InvalidParam(f"vectors have length {given.shape[1]}, expected {k}")
    if given.shape[0] > k:
        raise NotOrthonormal(f"{given.shape[0]} vectors cannot be orthonormal in R^{k}")
    if given.shape[0] and ortho_error(given) > tol.ortho_eps:
        raise NotOrthonormal(
            f"inputs deviate from orthonormality by {ortho_error(given):.3e}"
        )

    basis = [row for row in given]
    eye = np.eye(k)
    while len(basis) < k:
        q = np.array(basis) if basis else np.zeros((0, k))
        resid = eye - (eye @ q.T) @ q if basis else eye.copy()
        norms = np.linalg.norm(resid, axis=1)
        j = int(np.argmax(norms))
        w = resid[j]
        if basis:
            w = w - q.T @ (q @ w)
        basis.append(w / np.linalg.norm(w))
    return np.array(basis)


def sym_eig_2x2(m) -> tuple[float, float]:
    """Eigenvalues of a symmetric 2x2 matrix, largest first.

    Uses the quadratic formula in its cancellation-free arrangement: the
    larger-magnitude root comes from ``t/2 +- d`` and the other from the
    determinant.
    """
    m = as_matrix(m, "m")
    if m.shape != (2, 2):
        raise InvalidParam(f"expected 2x2, got {m.shape}")
    a, b, c = m[0, 0], 0.5 * (m[0, 1] + m[1, 0]), m[1, 1]
    if abs(m[0, 1] - m[1, 0]) > 1e-12 * max(1.0, abs(m[0, 1])):
        raise InvalidParam("matrix is not symmetric")
    half_trace = 0.5 * (a + c)
    d = math.hypot(0.5 * (a - c), b)
    det = a * c - b * b
    if half_trace >= 0:
        big = half_trace + d
        if big == 0.0:
            return 0.0, 0.0
        return big, min(det / big, big)
    small = half_trace - d
    return max(det / small, small), small


def svd_2x2(m, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, float, float, np.ndarray]:
    """Closed-form SVD ``m = X @ diag(s1, s2) @ Y`` of an invertible 2x2 matrix.

    Both singular values are strictly positive with ``s1 >= s2``; any sign
    is absorbed into the orthogonal factors, which may be reflections.
    """
    m = as_matrix(m, "m")
    if m.shape != (2, 2):
        raise InvalidParam(f"expected 2x2, got {m.shape}")
    mmt = m @ m.T
    theta = 0.5 * math.atan2(2.0 * mmt[0, 1], mmt[0, 0] - mmt[1, 1])
    c, s = math.cos(theta), math.sin(theta)
    x = np.array([[c, -s], [s, c]])
    b = x.T @ m
    s1 = float(np.linalg.norm(b[0]))
    if s1 < tol.rank_eps:
        raise Singular("matrix is numerically zero")
    y1 = b[0] / s1
    y2 = np.array([-y1[1], y1[0]])
    s2 = float(b[1] @ y2)
    if s2 < 0:
        s2, y2 = -s2, -y2
    if s2 < tol.rank_eps:
        raise Singular(f"smaller singular value {s2:.3e} below rank_eps")
    if s2 > s1:
        # only possible through rounding when s1 ~ s2
        x = x[:, ::-1].copy()
        s1, s2 = s2, s1
        y1, y2 = y2, y1
    return x, s1, s2, np.array([y1, y2])
