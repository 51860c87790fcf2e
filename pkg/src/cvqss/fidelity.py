"""Finite-squeezing degradation of the replicated secret.

With ancilla squeezing ``a`` the replica's density matrix is the secret's,
convolved in position with a Gaussian of variance ``v^2 / (2 a^2)`` and
damped off-diagonally by ``exp[-u^2 (x - x')^2 / 4a^2]``.  At moment level
that is an additive-noise channel: ``cov -> cov + diag(v^2, u^2) / (2 a^2)``
with the mean untouched.  For a coherent secret this gives

    F = [1 + (u^2 + v^2) / 2a^2 + u^2 v^2 / 4a^4]^(-1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gaussian
from .decoder import build_T, check_subset, replicate, split, xi_system, XiSystem, _unpack
from .errors import InconsistentExpansion, InvalidParam
from .scheme import EncodingMatrix, SchemeView, encode

EXPANSION_RESIDUAL = 1e-9


@dataclass(frozen=True)
class DegradationParams:
    u: float
    v: float
    a: float

    def __post_init__(self):
        if not (self.u >= 0 and self.v >= 0):
            raise InvalidParam(f"u and v must be non-negative, got u={self.u}, v={self.v}")
        if not (math.isfinite(self.a) and self.a > 0):
            raise InvalidParam(f"a must be positive, got {self.a}")

    @property
    def r(self) -> float:
        return math.log(self.a)


def u_coefficients(xi: XiSystem) -> np.ndarray:
    """Solve alpha_j = sum_i u_i beta_ji for j = 2..k (least squares with a residual guard)."""
    k = xi.k
    b = xi.beta[1:k]
    rhs = xi.alpha[1:k]
    u, *_ = np.linalg.lstsq(b, rhs, rcond=None)
    resid = float(np.max(np.abs(b @ u - rhs), initial=0.0))
    if resid > EXPANSION_RESIDUAL * max(1.0, float(np.max(np.abs(rhs), initial=0.0))):
        raise InconsistentExpansion(f"alpha_j not in the row space of beta (residual {resid:.3e})")
    return u


def degradation_params(xi: XiSystem, a: float) -> DegradationParams:
    v = float(np.linalg.norm(xi.gamma[0]))
    u = float(np.linalg.norm(u_coefficients(xi)))
    return DegradationParams(u, v, a)


def analytic_fidelity(p: DegradationParams) -> float:
    a2 = p.a * p.a
    u2, v2 = p.u * p.u, p.v * p.v
    return (1.0 + (u2 + v2) / (2.0 * a2) + u2 * v2 / (4.0 * a2 * a2)) ** -0.5


def replicated_state_analytic(p: DegradationParams, secret_mean: Sequence[float]) -> gaussian.GaussianState:
    """Moments of the replica of a coherent secret."""
    secret = gaussian.GaussianState.coherent(secret_mean)
    noise = np.diag([p.v * p.v, p.u * p.u]) / (2.0 * p.a * p.a)
    return gaussian.GaussianState(secret.mean, secret.cov + noise)


def fidelity_curve(u: float, v: float, r_grid: Iterable[float]) -> list[tuple[float, float]]:
    return [(float(r), analytic_fidelity(DegradationParams(u, v, math.exp(r)))) for r in r_grid]


def realized_params(scheme: EncodingMatrix | SchemeView, collaborators: Sequence[int], a: float,
                    gamma_free: float | None = None) -> DegradationParams:
    """(u, v) of the decoder this package builds for the given subset."""
    sp = split(scheme, collaborators)
    return degradation_params(xi_system(sp, build_T(sp, gamma_free)), a)


def end_to_end_fidelity(scheme: EncodingMatrix | SchemeView, collaborators: Sequence[int], a: float,
                        gamma_free: float | None = None,
                        secret_mean: Sequence[float] = (0.0, 0.0)) -> tuple[float, float]:
    """(F from Gaussian simulation, F from the closed form) for one subset."""
    replica, _ = replicate(scheme, collaborators, secret_mean, a, gamma_free)
    f_sim = gaussian.overlap_with_coherent(replica, secret_mean)
    f_analytic = analytic_fidelity(realized_params(scheme, collaborators, a, gamma_free))
    return f_sim, f_analytic


def adversary_state(scheme: EncodingMatrix | SchemeView, adversary: Sequence[int], a: float,
                    secret_mean: Sequence[float]) -> gaussian.GaussianState:
    enc, _ = _unpack(scheme)
    adversary = check_subset(scheme, adversary, enc.k - 1)
    return gaussian.reduce(encode(enc, secret_mean, a), adversary)


def adversary_leakage(scheme: EncodingMatrix | SchemeView, adversary: Sequence[int], a: float,
                      secrets: tuple[Sequence[float], Sequence[float]]) -> float:
    """1 - normalised overlap between the adversary's states for two secrets.

    Zero iff the k-1 shares look identical for both secrets.
    """
    s0, s1 = secrets
    st0 = adversary_state(scheme, adversary, a, s0)
    st1 = adversary_state(scheme, adversary, a, s1)
    return max(0.0, 1.0 - gaussian.normalized_overlap(st0, st1))
