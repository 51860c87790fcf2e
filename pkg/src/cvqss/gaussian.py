"""Multimode Gaussian states at the level of first and second moments.

Conventions (fixed throughout the package):

* hbar = 1, vacuum covariance = I/2;
* quadratures ordered as all positions then all momenta,
  ``(x_1, ..., x_n, p_1, ..., p_n)``;
* a coherent state with mean ``(x0, p0)`` has ``|alpha|^2 = (x0^2 + p0^2)/2``,
  so the vacuum/coherent overlap for mean ``(sqrt(2), 0)`` is ``e^-1``.

A squeezed ancilla with wavefunction ``(pi a^2)^(-1/4) exp(-x^2 / 2a^2)``
has position variance ``a^2/2`` and momentum variance ``1/(2 a^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BadIndex, DimensionMismatch, InvalidParam, Singular
from .matlib import DEFAULT_TOL, Tolerance, as_matrix


def omega(n: int) -> np.ndarray:
    """Symplectic form ``[[0, I], [-I, 0]]`` for n modes."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def mode_indices(n: int, modes: Sequence[int]) -> np.ndarray:
    """Phase-space row indices (x block then p block) for the given modes."""
    modes = np.asarray(modes, dtype=int)
    return np.concatenate([modes, modes + n])


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = as_matrix(self.cov, "cov")
        if mean.size % 2 or cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(
                f"mean of length {mean.size} incompatible with cov {cov.shape}"
            )
        if not np.all(np.isfinite(mean)):
            raise InvalidParam("mean contains non-finite entries")
        if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(cov))):
            raise InvalidParam("covariance matrix is not symmetric")
        mean.setflags(write=False)
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def modes(self) -> int:
        return self.mean.size // 2

    @classmethod
    def vacuum(cls, n: int) -> "GaussianState":
        return cls(np.zeros(2 * n), 0.5 * np.eye(2 * n))

    @classmethod
    def coherent(cls, mean: Sequence[float]) -> "GaussianState":
        x0, p0 = mean
        return cls(np.array([x0, p0], dtype=float), 0.5 * np.eye(2))

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Williamson spectrum, sorted ascending (each value >= 1/2 for a physical state)."""
        # i L^T Omega L is Hermitian with eigenvalues +-nu_j (cov = L L^T)
        lower = np.linalg.cholesky(self.cov)
        ev = np.linalg.eigvalsh(1j * lower.T @ omega(self.modes) @ lower)
        return ev[self.modes:]

    def is_physical(self, atol: float = 1e-9) -> bool:
        return bool(np.all(self.symplectic_eigenvalues() >= 0.5 - atol))

    def allclose(self, other: "GaussianState", atol: float = 1e-9) -> bool:
        return (
            self.mean.shape == other.mean.shape
            and np.allclose(self.mean, other.mean, rtol=0, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    s: np.ndarray

    def __post_init__(self):
        s = as_matrix(self.s, "s")
        if s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise DimensionMismatch(f"symplectic matrix must be 2n x 2n, got {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def modes(self) -> int:
        return self.s.shape[0] // 2

    def symplectic_error(self) -> float:
        om = omega(self.modes)
        return float(np.max(np.abs(self.s @ om @ self.s.T - om)))

    def __matmul__(self, other: "SymplecticMap") -> "SymplecticMap":
        return SymplecticMap(self.s @ other.s)


def squeezed_ancilla_variances(a: float) -> tuple[float, float]:
    """(x-variance, p-variance) of the ancilla ``phi_a``."""
    return a * a / 2.0, 1.0 / (2.0 * a * a)


def product_state(secret_mean: Sequence[float], k: int, a: float) -> GaussianState:
    """Unentangled dealer input: coherent secret, k-1 copies of phi_a, k-1 of phi_{1/a}."""
    if not (np.isfinite(a) and a > 0):
        raise InvalidParam(f"squeezing scale a must be positive, got {a}")
    if k < 2:
        raise InvalidParam(f"threshold k must be >= 2, got {k}")
    n = 2 * k - 1
    vx_a, vp_a = squeezed_ancilla_variances(a)
    var_x = np.array([0.5] + [vx_a] * (k - 1) + [vp_a] * (k - 1))
    var_p = np.array([0.5] + [vp_a] * (k - 1) + [vx_a] * (k - 1))
    mean = np.zeros(2 * n)
    mean[0], mean[n] = secret_mean
    return GaussianState(mean, np.diag(np.concatenate([var_x, var_p])))


def point_transform_symplectic(g, tol: Tolerance = DEFAULT_TOL) -> SymplecticMap:
    """Symplectic image ``diag(g, g^-T)`` of the point transformation x -> g x."""
    g = as_matrix(g, "g")
    n = g.shape[0]
    if g.shape != (n, n):
        raise DimensionMismatch(f"g must be square, got {g.shape}")
    smin = np.linalg.svd(g, compute_uv=False)[-1]
    if smin <= tol.rank_eps * max(1.0, np.linalg.norm(g, 2)):
        raise Singular(f"point transformation is not invertible (sigma_min={smin:.3e})")
    s = np.zeros((2 * n, 2 * n))
    s[:n, :n] = g
    s[n:, n:] = np.linalg.inv(g).T
    return SymplecticMap(s)


def apply(smap: SymplecticMap, st: GaussianState) -> GaussianState:
    if smap.modes != st.modes:
        raise DimensionMismatch(f"map acts on {smap.modes} modes, state has {st.modes}")
    s = smap.s
    return GaussianState(s @ st.mean, s @ st.cov @ s.T)


def reduce(st: GaussianState, keep: Iterable[int]) -> GaussianState:
    """Partial trace onto the listed modes (0-based), in the order given."""
    keep = list(keep)
    if not keep:
        raise BadIndex("keep must be non-empty")
    if len(set(keep)) != len(keep) or any(not 0 <= m < st.modes for m in keep):
        raise BadIndex(f"invalid mode indices {keep} for a {st.modes}-mode state")
    idx = mode_indices(st.modes, keep)
    return GaussianState(st.mean[idx], st.cov[np.ix_(idx, idx)])


def overlap(st1: GaussianState, st2: GaussianState) -> float:
    """Hilbert-Schmidt overlap Tr(rho1 rho2) of two Gaussian states."""
    if st1.modes != st2.modes:
        raise DimensionMismatch("states have different mode counts")
    sigma = st1.cov + st2.cov
    delta = st1.mean - st2.mean
    return float(
        np.exp(-0.5 * delta @ np.linalg.solve(sigma, delta)) / np.sqrt(np.linalg.det(sigma))
    )


def purity(st: GaussianState) -> float:
    return float(1.0 / np.sqrt(np.linalg.det(2.0 * st.cov)))


def overlap_with_coherent(st: GaussianState, mean0: Sequence[float]) -> float:
    """<psi|rho|psi> for the coherent state |psi> with mean ``mean0``."""
    if st.modes != 1:
        raise DimensionMismatch(f"expected a single-mode state, got {st.modes} modes")
    return overlap(st, GaussianState.coherent(mean0))


def normalized_overlap(st1: GaussianState, st2: GaussianState) -> float:
    """Tr(rho1 rho2) / sqrt(Tr rho1^2 Tr rho2^2); equals 1 iff the states coincide."""
    return overlap(st1, st2) / np.sqrt(purity(st1) * purity(st2))
