"""Brute-force numerical oracles, independent of the closed forms they check.

These work directly on wavefunctions and density-matrix kernels sampled on
uniform grids; the trapezoid rule converges spectrally for the rapidly
decaying Gaussian integrands involved.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .gaussian import GaussianState


def coherent_wavefunction(x: np.ndarray, mean: Sequence[float]) -> np.ndarray:
    """<x|psi> of the coherent state with quadrature means (x0, p0)."""
    x0, p0 = mean
    return np.pi ** -0.25 * np.exp(-0.5 * (x - x0) ** 2 + 1j * p0 * x)


def replicated_kernel(x: np.ndarray, u: float, v: float, a: float,
                      psi: np.ndarray, y: np.ndarray, psi_shift: np.ndarray) -> np.ndarray:
    """rho'(x, x') on the grid, from the convolution and decoherence factors.

    ``psi_shift[i, l] = psi(x_i - y_l)``; the y-integral is a weighted
    outer product so the kernel is never formed as a 3-D tensor.
    """
    dy = y[1] - y[0]
    w = np.exp(-(a * y / v) ** 2) * dy
    conv = (psi_shift * w) @ psi_shift.conj().T
    decoh = np.exp(-(u * (x[:, None] - x[None, :])) ** 2 / (4.0 * a * a))
    return a / (math.sqrt(math.pi) * v) * decoh * conv


def channel_fidelity_quadrature(u: float, v: float, a: float,
                                secret_mean: Sequence[float] = (0.0, 0.0),
                                nx: int = 801, ny: int = 241) -> float:
    """<psi| rho' |psi> by direct quadrature over x, x' and the convolution variable y."""
    if v <= 0:
        raise ValueError("quadrature needs v > 0 (the convolution kernel is a delta at v = 0)")
    sigma_y = v / (a * math.sqrt(2.0))
    half = 10.0 + 10.0 * sigma_y
    x0 = secret_mean[0]
    x = np.linspace(x0 - half, x0 + half, nx)
    if u > 0:
        # resolve the decoherence factor's width 2a/u
        step = min(x[1] - x[0], 0.1 * a / u)
        x = np.arange(x0 - half, x0 + half + step / 2, step)
    dx = x[1] - x[0]
    y = np.linspace(-9.0 * sigma_y, 9.0 * sigma_y, ny)
    psi = coherent_wavefunction(x, secret_mean)
    psi_shift = coherent_wavefunction(x[:, None] - y[None, :], secret_mean)
    rho = replicated_kernel(x, u, v, a, psi, y, psi_shift)
    return float((psi.conj() @ rho @ psi).real * dx * dx)


def wigner(st: GaussianState, xg: np.ndarray, pg: np.ndarray) -> np.ndarray:
    d = np.stack([xg - st.mean[0], pg - st.mean[1]], axis=-1)
    inv = np.linalg.inv(st.cov)
    q = np.einsum("...i,ij,...j->...", d, inv, d)
    return np.exp(-0.5 * q) / (2.0 * np.pi * math.sqrt(np.linalg.det(st.cov)))


def overlap_wigner_quadrature(st1: GaussianState, st2: GaussianState, n: int = 801) -> float:
    """Tr(rho1 rho2) = 2 pi * integral of W1 W2 over phase space (single mode)."""
    centre = 0.5 * (st1.mean + st2.mean)
    spread = math.sqrt(max(np.max(np.diag(st1.cov)), np.max(np.diag(st2.cov))))
    half = 12.0 * spread + 0.5 * float(np.max(np.abs(st1.mean - st2.mean)))
    xs = np.linspace(centre[0] - half, centre[0] + half, n)
    ps = np.linspace(centre[1] - half, centre[1] + half, n)
    xg, pg = np.meshgrid(xs, ps, indexing="ij")
    integrand = wigner(st1, xg, pg) * wigner(st2, xg, pg)
    return float(2.0 * np.pi * integrand.sum() * (xs[1] - xs[0]) * (ps[1] - ps[0]))


def null_vector_cross(rows: np.ndarray) -> np.ndarray:
    """Null vector of a 2x3 matrix via the cross product, normalised, first nonzero entry positive."""
    v = np.cross(rows[0], rows[1])
    v = v / np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    return -v if v[nz[0]] < 0 else v
