"""Dealer side: encoding matrices for (k, 2k-1) threshold schemes.

Coordinates of R^n split as X + Y + Z with X = span(f_1),
Y = span(f_2..f_k) and Z = span(f_{k+1}..f_n); the first k columns of an
encoding matrix are therefore the X+Y components of each share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gaussian
from .errors import GenerationFailed, InvalidParam, NoCloningViolation, TooManyDropped
from .matlib import DEFAULT_TOL, Tolerance, as_matrix

MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class ThresholdParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise InvalidParam(f"threshold k must be >= 2, got {self.k}")
        if self.n >= 2 * self.k:
            raise NoCloningViolation(
                f"no threshold scheme exists for n >= 2k (k={self.k}, n={self.n})"
            )
        if self.n < self.k:
            raise InvalidParam(f"need k <= n, got k={self.k}, n={self.n}")

    @classmethod
    def canonical(cls, k: int) -> "ThresholdParams":
        return cls(k, 2 * k - 1)


@dataclass(frozen=True, eq=False)
class EncodingMatrix:
    g: np.ndarray
    k: int
    seed: int | None = None

    def __post_init__(self):
        g = as_matrix(self.g, "g")
        if g.shape != (2 * self.k - 1, 2 * self.k - 1):
            raise InvalidParam(
                f"encoding for k={self.k} must be {2 * self.k - 1}x{2 * self.k - 1}, got {g.shape}"
            )
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def xy(self, rows: Iterable[int]) -> np.ndarray:
        """X+Y components of the given (0-based) share rows."""
        return self.g[list(rows), : self.k]


@dataclass
class ValidationReport:
    k: int
    n: int
    invertible: bool
    any_k_failures: list[tuple[int, ...]] = field(default_factory=list)
    decoder_failures: list[tuple[int, ...]] = field(default_factory=list)
    subsets_checked: int = 0

    @property
    def passed(self) -> bool:
        return self.invertible and not self.any_k_failures and not self.decoder_failures

    def to_dict(self) -> dict:
        # 1-based subsets, as players are numbered in user-facing output
        return {
            "passed": self.passed,
            "invertible": self.invertible,
            "subsets_checked": self.subsets_checked,
            "any_k_failures": [[i + 1 for i in s] for s in self.any_k_failures],
            "decoder_failures": [[i + 1 for i in s] for s in self.decoder_failures],
        }


def _full_rank(m: np.ndarray, rank: int, tol: Tolerance) -> bool:
    s = np.linalg.svd(m, compute_uv=False)
    return s.size >= rank and s[rank - 1] > tol.rank_eps * max(1.0, s[0])


def validate(g, k: int, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    """Exhaustive k-subset check of the encoding conditions.

    For every k-subset S: the X+Y components of the rows in S must be
    linearly independent (any k players can decode), and the X+Y components
    of the k-1 complementary rows must span k-1 dimensions (the decoder's
    orthogonal vector is unique).  The two are checked separately.
    """
    g = as_matrix(g, "g")
    n = g.shape[0]
    if g.shape != (n, n):
        raise InvalidParam(f"g must be square, got {g.shape}")
    report = ValidationReport(k=k, n=n, invertible=_full_rank(g, n, tol))
    everyone = set(range(n))
    for subset in itertools.combinations(range(n), k):
        report.subsets_checked += 1
        if not _full_rank(g[list(subset), :k], k, tol):
            report.any_k_failures.append(subset)
        rest = sorted(everyone - set(subset))
        if rest and not _full_rank(g[rest, :k], len(rest), tol):
            report.decoder_failures.append(subset)
    return report


def random_encoding(params: ThresholdParams, seed: int, tol: Tolerance = DEFAULT_TOL) -> EncodingMatrix:
    """I.i.d. standard-normal encoding for the canonical (k, 2k-1) scheme.

    Deterministic in ``seed``.  A share-discarded (k, n < 2k-1) scheme is
    obtained with :func:`discard_shares` on the result.
    """
    k = params.k
    n = 2 * k - 1
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    for _ in range(MAX_ATTEMPTS):
        if validate(g, k, tol).passed:
            return EncodingMatrix(g, k, seed)
        g = g + 1e-3 * rng.standard_normal((n, n))
    raise GenerationFailed(f"no valid encoding after {MAX_ATTEMPTS} attempts (seed={seed})")


def encode(enc: EncodingMatrix, secret_mean: Sequence[float], a: float) -> gaussian.GaussianState:
    """Dealer output: the point transformation g applied to the product state."""
    st = gaussian.product_state(secret_mean, enc.k, a)
    return gaussian.apply(gaussian.point_transform_symplectic(enc.g), st)


@dataclass(frozen=True, eq=False)
class SchemeView:
    """An encoding together with the set of shares that still exist.

    Dropped shares remain part of the global state but are never handed to a
    player, i.e. they are traced out of everything downstream.
    """

    enc: EncodingMatrix
    accessible: tuple[int, ...]

    @property
    def k(self) -> int:
        return self.enc.k

    @property
    def n(self) -> int:
        return len(self.accessible)

    @property
    def dropped(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.enc.n) if i not in self.accessible)

    def collaborator_subsets(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(self.accessible, self.k))


def discard_shares(enc: EncodingMatrix | SchemeView, drop: Iterable[int]) -> SchemeView:
    """Derive a (k, n') scheme by discarding shares (0-based indices)."""
    view = enc if isinstance(enc, SchemeView) else SchemeView(enc, tuple(range(enc.n)))
    drop = set(drop)
    bad = drop - set(view.accessible)
    if bad:
        raise InvalidParam(f"cannot drop unknown or already dropped shares {sorted(bad)}")
    keep = tuple(i for i in view.accessible if i not in drop)
    if len(keep) < view.k:
        raise TooManyDropped(
            f"{len(keep)} shares left but threshold is k={view.k}"
        )
    return SchemeView(view.enc, keep)


def make_scheme(params: ThresholdParams, seed: int) -> SchemeView:
    """Random (k, n) scheme: canonical encoding with the last 2k-1-n shares dropped."""
    enc = random_encoding(params, seed)
    return discard_shares(enc, range(params.n, enc.n))
