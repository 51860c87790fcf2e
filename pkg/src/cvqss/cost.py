"""Total squeezing cost of the two-squeezer decoder and its minimisation.

The middle block of the decoder is ``V' = [[alpha, beta], [0, gamma]]``.  With
``lambda_1 >= lambda_2`` the eigenvalues of ``V' V'^T`` (trace
``alpha^2 + beta^2 + gamma^2``, determinant ``alpha^2 gamma^2``), the total
squeezing is ``R = (|ln lambda_1| + |ln lambda_2|) / 2``.

Two closed-form candidates for the optimum exist:

* ``gamma^2 = kappa = (1 - alpha^2 - beta^2) / (1 - alpha^2)`` puts one
  eigenvalue at exactly 1, so ``R = |ln(|alpha| sqrt(kappa))|``;
* ``gamma^2 = alpha^2 + beta^2`` minimises the condition number of ``V'``,
  giving ``R = ln[(sqrt(alpha^2 + beta^2) + |beta|) / |alpha|]`` whenever the
  two log-eigenvalues there have opposite signs.

The true minimum is always one of the two, so :func:`minimize_gamma_analytic`
evaluates both through :func:`total_squeezing` rather than trusting either
closed-form value.  :func:`minimize_gamma_oracle` is an independent grid and
golden-section search used as ground truth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParam
from .matlib import svd_2x2, sym_eig_2x2

GRID_POINTS = 600
GRID_RANGE = (1e-3, 1e3)
GOLDEN_TOL = 1e-10
# below this |ln lambda| the optimum sits on the lambda = 1 boundary
BOUNDARY_EPS = 1e-6


class CaseTag(str, enum.Enum):
    PRODUCT_CASE_I = "product_case_i"
    RATIO_CASE_II = "ratio_case_ii"


@dataclass
class SqueezeCostResult:
    gamma0: float
    r_min: float
    case_tag: CaseTag
    lambda1: float
    lambda2: float
    kappa: float | None = None
    candidates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "gamma0": self.gamma0,
            "r_min": self.r_min,
            "case_tag": self.case_tag.value,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "kappa": self.kappa,
            "candidates": dict(self.candidates),
        }


def _check(alpha: float, beta: float) -> None:
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise InvalidParam("alpha and beta must be finite")
    if alpha == 0:
        raise InvalidParam("alpha must be nonzero (V' would be singular)")


def middle_block(alpha: float, beta: float, gamma: float) -> np.ndarray:
    return np.array([[alpha, beta], [0.0, gamma]])


def eigenvalues(alpha: float, beta: float, gamma: float) -> tuple[float, float]:
    """Eigenvalues of ``V' V'^T``, largest first."""
    v = middle_block(alpha, beta, gamma)
    return sym_eig_2x2(v @ v.T)


def total_squeezing(alpha: float, beta: float, gamma: float) -> float:
    _check(alpha, beta)
    if not (math.isfinite(gamma) and gamma > 0):
        raise InvalidParam(f"gamma must be positive, got {gamma}")
    l1, l2 = eigenvalues(alpha, beta, gamma)
    return 0.5 * (abs(math.log(l1)) + abs(math.log(l2)))


def total_squeezing_svd(alpha: float, beta: float, gamma: float) -> float:
    """Same quantity as |ln v1| + |ln v2| from the 2x2 SVD of V'."""
    _check(alpha, beta)
    _, s1, s2, _ = svd_2x2(middle_block(alpha, beta, gamma))
    return abs(math.log(s1)) + abs(math.log(s2))


def kappa(alpha: float, beta: float) -> float | None:
    """``(1 - alpha^2 - beta^2) / (1 - alpha^2)``, or None when alpha^2 = 1."""
    denom = 1.0 - alpha * alpha
    if abs(denom) < 1e-12:
        return None
    return (1.0 - alpha * alpha - beta * beta) / denom


def classify(alpha: float, beta: float, gamma: float) -> CaseTag:
    l1, l2 = eigenvalues(alpha, beta, gamma)
    ln1, ln2 = math.log(l1), math.log(l2)
    if min(abs(ln1), abs(ln2)) < BOUNDARY_EPS or ln1 * ln2 > 0:
        return CaseTag.PRODUCT_CASE_I
    return CaseTag.RATIO_CASE_II


def _result(alpha, beta, gamma0, r_min, tag, **extra) -> SqueezeCostResult:
    l1, l2 = eigenvalues(alpha, beta, gamma0)
    return SqueezeCostResult(gamma0, r_min, tag, l1, l2, **extra)


def _golden(f, lo: float, hi: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def minimize_gamma_oracle(alpha: float, beta: float) -> SqueezeCostResult:
    """Brute-force minimum of R over gamma > 0 (log grid + golden section)."""
    _check(alpha, beta)
    grid = np.geomspace(*GRID_RANGE, GRID_POINTS)
    values = np.array([total_squeezing(alpha, beta, g) for g in grid])
    i = int(np.argmin(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, GRID_POINTS - 1)]
    gamma0 = _golden(lambda g: total_squeezing(alpha, beta, g), lo, hi, GOLDEN_TOL)
    r_min = total_squeezing(alpha, beta, gamma0)
    return _result(
        alpha, beta, gamma0, r_min, classify(alpha, beta, gamma0),
        kappa=kappa(alpha, beta),
        candidates={"grid_endpoints": [float(values[0]), float(values[-1])]},
    )


def in_case_i_region(alpha: float, beta: float) -> bool:
    """Region in which the case (i) candidate is expected to win."""
    s = alpha * alpha + beta * beta
    kap = kappa(alpha, beta)
    if kap is None:
        return False
    edge = 1.0 + beta * beta / (alpha * alpha)
    return (s < 1 and s < kap) or (s > edge and s > kap)


def in_case_ii_region(alpha: float, beta: float) -> bool:
    """Region in which the case (ii) candidate is expected to win."""
    s = alpha * alpha + beta * beta
    edge = 1.0 + beta * beta / (alpha * alpha)
    if 1 <= s <= edge:
        return True
    kap = kappa(alpha, beta)
    if kap is None:
        return False
    return kap <= s <= 1 or edge <= s <= kap


def case_ii_closed_form(alpha: float, beta: float) -> float:
    s = math.sqrt(alpha * alpha + beta * beta)
    return math.log((s + abs(beta)) / abs(alpha))


def case_i_printed(alpha: float, beta: float) -> float | None:
    """|ln(kappa alpha)|, the uncorrected case (i) expression; None if undefined."""
    kap = kappa(alpha, beta)
    if kap is None or kap <= 0:
        return None
    return abs(math.log(kap * abs(alpha)))


def case_i_evaluated(alpha: float, beta: float) -> float | None:
    """|ln(|alpha| sqrt(kappa))|, the value of R at gamma = sqrt(kappa)."""
    kap = kappa(alpha, beta)
    if kap is None or kap <= 0:
        return None
    return abs(math.log(abs(alpha) * math.sqrt(kap)))


def minimize_gamma_analytic(alpha: float, beta: float) -> SqueezeCostResult:
    """Closed-form optimum: evaluate both candidate gammas and keep the cheaper.

    When alpha^2 = 1, kappa is undefined and only the ratio candidate
    ``gamma = sqrt(alpha^2 + beta^2)`` is considered.
    """
    _check(alpha, beta)
    kap = kappa(alpha, beta)
    candidates = {}
    g_ii = math.sqrt(alpha * alpha + beta * beta)
    candidates["ratio_case_ii"] = {"gamma": g_ii, "r": total_squeezing(alpha, beta, g_ii)}
    if kap is not None and kap > 0:
        g_i = math.sqrt(kap)
        candidates["product_case_i"] = {"gamma": g_i, "r": total_squeezing(alpha, beta, g_i)}
    best = min(candidates, key=lambda name: candidates[name]["r"])
    gamma0 = candidates[best]["gamma"]
    candidates["kappa_undefined"] = kap is None
    candidates["printed_case_i"] = case_i_printed(alpha, beta)
    candidates["evaluated_case_i"] = case_i_evaluated(alpha, beta)
    candidates["printed_case_ii"] = case_ii_closed_form(alpha, beta)
    return _result(
        alpha, beta, gamma0, candidates[best]["r"], CaseTag(best),
        kappa=kap, candidates=candidates,
    )
