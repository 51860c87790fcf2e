"""Player side: the disentangling transformation and its two-squeezer form.

For a collaborating k-subset the decoder builds a k x k matrix ``T`` acting
on the collaborators' position coordinates, ``xi_i = sum_j T_ij g_j``, such
that the replicated secret appears on the first collaborator's mode.  ``T``
is factored as ``X_hat @ V_d @ Z`` with ``Z`` and ``X_hat`` orthogonal
(passive optics) and ``V_d = diag(v1, v2, 1, ..., 1)`` (two squeezers).

Indices are 0-based throughout; the CLI converts to player numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gaussian
from .cost import minimize_gamma_analytic
from .errors import BadSubset, InvalidParam, Singular
from .matlib import DEFAULT_TOL, Tolerance, null_space_1d, ortho_error, orthonormal_complete, svd_2x2
from .scheme import EncodingMatrix, SchemeView, encode

# a - alpha W1 shorter than this counts as parallel to W1
PARALLEL_EPS = 1e-12


def _unpack(scheme: EncodingMatrix | SchemeView) -> tuple[EncodingMatrix, tuple[int, ...]]:
    if isinstance(scheme, SchemeView):
        return scheme.enc, scheme.accessible
    return scheme, tuple(range(scheme.n))


def check_subset(scheme: EncodingMatrix | SchemeView, subset: Sequence[int], size: int) -> tuple[int, ...]:
    enc, accessible = _unpack(scheme)
    subset = tuple(int(i) for i in subset)
    if len(subset) != size:
        raise BadSubset(f"expected {size} players, got {len(subset)}")
    if len(set(subset)) != size:
        raise BadSubset(f"repeated player in {subset}")
    if any(i not in accessible for i in subset):
        raise BadSubset(f"subset {subset} contains shares outside {accessible}")
    return subset


@dataclass(frozen=True, eq=False)
class SubspaceSplit:
    """X+Y / Z components of collaborator and non-collaborator rows."""

    collaborators: tuple[int, ...]
    others: tuple[int, ...]
    kappa: np.ndarray  # k x k
    lam: np.ndarray  # k x (k-1)
    zeta_adv: np.ndarray  # (k-1) x k
    gamma_adv: np.ndarray  # (k-1) x (k-1)

    @property
    def k(self) -> int:
        return self.kappa.shape[0]


def split(scheme: EncodingMatrix | SchemeView, collaborators: Sequence[int]) -> SubspaceSplit:
    """Relabel so the collaborators come first and split each row into X+Y and Z parts.

    Every non-collaborator share, discarded or not, is still part of the
    global state and enters ``zeta_adv``.
    """
    enc, _ = _unpack(scheme)
    collab = check_subset(scheme, collaborators, enc.k)
    others = tuple(i for i in range(enc.n) if i not in collab)
    g, k = enc.g, enc.k
    return SubspaceSplit(
        collaborators=collab,
        others=others,
        kappa=g[list(collab), :k].copy(),
        lam=g[list(collab), k:].copy(),
        zeta_adv=g[list(others), :k].copy(),
        gamma_adv=g[list(others), k:].copy(),
    )


@dataclass(frozen=True, eq=False)
class TransformBuild:
    T: np.ndarray
    alpha: float
    beta: float
    gamma_free: float
    W: np.ndarray
    v: np.ndarray
    a: np.ndarray

    def __iter__(self):
        return iter((self.T, self.alpha, self.beta))


def middle_factor(alpha: float, beta: float, gamma: float, k: int) -> np.ndarray:
    """The matrix V of T = V W: the 2x2 block [[alpha, beta], [0, gamma]] padded with I."""
    v = np.eye(k)
    v[:2, :2] = [[alpha, beta], [0.0, gamma]]
    return v


def build_T(sp: SubspaceSplit, gamma_free: float | None = None, tol: Tolerance = DEFAULT_TOL) -> TransformBuild:
    """Construct the disentangling transformation for a split.

    ``gamma_free=None`` selects the squeezing-optimal value.
    """
    if gamma_free is not None and (not math.isfinite(gamma_free) or gamma_free == 0):
        raise InvalidParam("gamma_free must be finite and nonzero")
    k = sp.k
    # common vector orthogonal to every non-collaborator X+Y component
    v = null_space_1d(sp.zeta_adv, tol)
    if np.linalg.svd(sp.kappa, compute_uv=False)[-1] <= tol.rank_eps:
        raise Singular("collaborator X+Y components are linearly dependent")
    # first row of T: coefficients expanding f_1 in the collaborators' kappa_j
    a = np.linalg.solve(sp.kappa.T, np.eye(k)[0])

    w1 = sp.kappa @ v
    w1 = w1 / np.linalg.norm(w1)
    alpha = float(a @ w1)
    if abs(alpha) <= tol.rank_eps:
        raise Singular("first collaborator coordinate is orthogonal to v (alpha = 0)")
    resid = a - alpha * w1
    beta = float(np.linalg.norm(resid))
    if beta > PARALLEL_EPS * max(1.0, np.linalg.norm(a)):
        W = orthonormal_complete([w1, resid / beta], tol=tol)
        beta = float(a @ W[1])
    else:
        W = orthonormal_complete([w1], tol=tol)
        beta = 0.0

    if gamma_free is None:
        gamma_free = minimize_gamma_analytic(alpha, beta).gamma0
    T = middle_factor(alpha, beta, gamma_free, k) @ W
    return TransformBuild(T, alpha, beta, float(gamma_free), W, v, a)


def embed(block: np.ndarray, k: int) -> np.ndarray:
    out = np.eye(k)
    b = block.shape[0]
    out[:b, :b] = block
    return out


@dataclass(frozen=True, eq=False)
class DisentanglingPlan:
    collaborators: tuple[int, ...]
    T: np.ndarray
    Z: np.ndarray
    r1: float
    r2: float
    X2: np.ndarray
    gamma_free: float
    alpha: float
    beta: float

    @property
    def k(self) -> int:
        return self.T.shape[0]

    @property
    def X_hat(self) -> np.ndarray:
        return embed(self.X2, self.k)

    @property
    def V_d(self) -> np.ndarray:
        d = np.ones(self.k)
        d[:2] = math.exp(self.r1), math.exp(self.r2)
        return np.diag(d)

    @property
    def total_squeezing(self) -> float:
        return abs(self.r1) + abs(self.r2)

    def squeezer_count(self, atol: float = 1e-12) -> int:
        """Non-unit diagonal entries of V_d."""
        return int(np.sum(np.abs(np.diag(self.V_d) - 1.0) > atol))

    def reconstruction_error(self) -> float:
        return float(np.max(np.abs(self.X_hat @ self.V_d @ self.Z - self.T)))

    def orthogonality_error(self) -> float:
        return max(ortho_error(self.Z), ortho_error(self.X_hat))

    def to_dict(self) -> dict:
        return {
            "collaborators": [i + 1 for i in self.collaborators],
            "gamma_free": self.gamma_free,
            "alpha": self.alpha,
            "beta": self.beta,
            "r1": self.r1,
            "r2": self.r2,
            "Z": self.Z.tolist(),
            "X2": self.X2.tolist(),
        }


def factor(T: np.ndarray, alpha: float, beta: float, gamma_free: float, W: np.ndarray,
           collaborators: Sequence[int] = (), tol: Tolerance = DEFAULT_TOL) -> DisentanglingPlan:
    """Split T = V W into passive Z, two squeezers, and a two-mode passive X."""
    if abs(alpha * gamma_free) <= tol.rank_eps:
        raise Singular("middle block is singular (alpha * gamma = 0)")
    k = T.shape[0]
    x2, s1, s2, y2 = svd_2x2([[alpha, beta], [0.0, gamma_free]], tol)
    Z = embed(y2, k) @ W
    return DisentanglingPlan(
        collaborators=tuple(collaborators),
        T=np.array(T, dtype=float),
        Z=Z,
        r1=math.log(s1),
        r2=math.log(s2),
        X2=x2,
        gamma_free=float(gamma_free),
        alpha=float(alpha),
        beta=float(beta),
    )


def plan(scheme: EncodingMatrix | SchemeView, collaborators: Sequence[int],
         gamma_free: float | None = None, tol: Tolerance = DEFAULT_TOL) -> DisentanglingPlan:
    sp = split(scheme, collaborators)
    b = build_T(sp, gamma_free, tol)
    return factor(b.T, b.alpha, b.beta, b.gamma_free, b.W, sp.collaborators, tol)


@dataclass(frozen=True, eq=False)
class XiSystem:
    """Share coordinates after decoding, rows relabeled collaborators-first.

    Columns keep the X | Y | Z split: column 0 is alpha_i, columns 1..k-1
    are beta_i and columns k.. are gamma_i.
    """

    xi: np.ndarray
    k: int
    v: np.ndarray

    @property
    def alpha(self) -> np.ndarray:
        return self.xi[:, 0]

    @property
    def beta(self) -> np.ndarray:
        return self.xi[:, 1 : self.k]

    @property
    def gamma(self) -> np.ndarray:
        return self.xi[:, self.k :]

    @property
    def zeta(self) -> np.ndarray:
        return self.xi[:, : self.k]

    def residuals(self) -> dict:
        k = self.k
        return {
            "alpha1": float(abs(self.alpha[0] - 1.0)),
            "beta1": float(np.max(np.abs(self.beta[0]), initial=0.0)),
            "span": float(np.max(np.abs(self.zeta[1:] @ self.v), initial=0.0)),
            "span_rank_deficit": int(k - 1 - np.linalg.matrix_rank(self.zeta[1:k], tol=1e-9)),
        }

    def check(self, atol: float = 1e-9) -> bool:
        r = self.residuals()
        return r["alpha1"] <= atol and r["beta1"] <= atol and r["span"] <= atol and r["span_rank_deficit"] == 0


def xi_system(sp: SubspaceSplit, build: TransformBuild) -> XiSystem:
    collab_rows = np.hstack([sp.kappa, sp.lam])
    other_rows = np.hstack([sp.zeta_adv, sp.gamma_adv])
    xi = np.vstack([build.T @ collab_rows, other_rows])
    return XiSystem(xi, sp.k, build.v)


def decoding_map(n: int, collaborators: Sequence[int], T: np.ndarray) -> np.ndarray:
    """n x n point transformation: T on the collaborators' modes, identity elsewhere."""
    m = np.eye(n)
    idx = list(collaborators)
    m[np.ix_(idx, idx)] = T
    return m


def replicate(scheme: EncodingMatrix | SchemeView, collaborators: Sequence[int],
              secret_mean: Sequence[float], a: float, gamma_free: float | None = None,
              tol: Tolerance = DEFAULT_TOL) -> tuple[gaussian.GaussianState, DisentanglingPlan]:
    """Simulate encode -> decode and return the state on the first collaborator's mode."""
    enc, _ = _unpack(scheme)
    p = plan(scheme, collaborators, gamma_free, tol)
    encoded = encode(enc, secret_mean, a)
    dec = gaussian.point_transform_symplectic(decoding_map(enc.n, p.collaborators, p.T), tol)
    out = gaussian.apply(dec, encoded)
    return gaussian.reduce(out, [p.collaborators[0]]), p
