import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from cvqss import gaussian
from cvqss.errors import BadIndex, DimensionMismatch, InvalidParam, Singular
from cvqss.gaussian import GaussianState, SymplecticMap
from cvqss.oracles import channel_fidelity_quadrature, overlap_wigner_quadrature


def rotation_map(thetas):
    """Per-mode phase-space rotations; symplectic and passive."""
    n = len(thetas)
    s = np.zeros((2 * n, 2 * n))
    for i, t in enumerate(thetas):
        c, si = math.cos(t), math.sin(t)
        s[i, i], s[i, n + i], s[n + i, i], s[n + i, n + i] = c, si, -si, c
    return SymplecticMap(s)


def random_state(rng, n):
    nu = 0.5 + rng.exponential(1.0, n)
    thermal = GaussianState(rng.normal(size=2 * n), np.diag(np.concatenate([nu, nu])))
    g = rng.normal(size=(n, n)) + 2 * np.eye(n)
    while np.linalg.cond(g) > 20:  # keep cov well conditioned
        g = rng.normal(size=(n, n)) + 2 * np.eye(n)
    s = rotation_map(rng.uniform(0, 2 * np.pi, n)) @ gaussian.point_transform_symplectic(g)
    return gaussian.apply(s, thermal)


def two_mode_squeezed(r):
    c, s = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    cov = np.array([[c, s, 0, 0], [s, c, 0, 0], [0, 0, c, -s], [0, 0, -s, c]])
    return GaussianState(np.zeros(4), cov)


def test_product_state_vacuum():
    st_ = gaussian.product_state((0, 0), 2, 1.0)
    assert st_.modes == 3
    np.testing.assert_array_equal(st_.cov, 0.5 * np.eye(6))


def test_product_state_variances():
    a = math.e
    st_ = gaussian.product_state((1, 0), 2, a)
    n = 3
    assert st_.cov[1, 1] == pytest.approx(a * a / 2)
    assert st_.cov[2, 2] == pytest.approx(1 / (2 * a * a))
    assert st_.cov[n + 1, n + 1] == pytest.approx(1 / (2 * a * a))
    assert st_.cov[n + 2, n + 2] == pytest.approx(a * a / 2)
    assert st_.mean[0] == 1 and np.all(st_.mean[1:] == 0)
    np.testing.assert_array_equal(st_.cov, np.diag(np.diag(st_.cov)))


@pytest.mark.parametrize("a, k", [(-1.0, 2), (0.0, 2), (1.0, 1)])
def test_product_state_invalid(a, k):
    with pytest.raises(InvalidParam):
        gaussian.product_state((0, 0), k, a)


def test_point_transform_identity():
    np.testing.assert_array_equal(gaussian.point_transform_symplectic(np.eye(3)).s, np.eye(6))


def test_point_transform_single_mode_squeeze():
    g = np.diag([2.0, 1.0, 1.0])
    out = gaussian.apply(gaussian.point_transform_symplectic(g), GaussianState.vacuum(3))
    assert out.cov[0, 0] == pytest.approx(4 * 0.5)
    assert out.cov[3, 3] == pytest.approx(0.25 * 0.5)


def test_point_transform_singular():
    with pytest.raises(Singular):
        gaussian.point_transform_symplectic([[1.0, 2.0], [2.0, 4.0]])


def test_orthogonal_point_transform_is_passive():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    smap = gaussian.point_transform_symplectic(q)
    assert np.max(np.abs(smap.s @ smap.s.T - np.eye(10))) < 1e-12
    assert smap.symplectic_error() < 1e-12
    out = gaussian.apply(smap, GaussianState.vacuum(5))
    assert np.trace(out.cov) == pytest.approx(5.0, abs=1e-12)


@given(arrays(np.float64, (4, 4), elements=st.floats(-3, 3)))
def test_point_transform_symplectic_invariant(g):
    if abs(np.linalg.det(g)) < 1e-3:
        return
    assert gaussian.point_transform_symplectic(g).symplectic_error() <= 1e-10


def test_apply_identity_and_composition():
    rng = np.random.default_rng(0)
    st_ = random_state(rng, 3)
    assert gaussian.apply(SymplecticMap(np.eye(6)), st_).allclose(st_, atol=0)
    s1 = gaussian.point_transform_symplectic(rng.normal(size=(3, 3)) + 2 * np.eye(3))
    s2 = rotation_map([0.3, 1.1, -0.4])
    two_step = gaussian.apply(s2, gaussian.apply(s1, st_))
    assert two_step.allclose(gaussian.apply(s2 @ s1, st_), atol=1e-12)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        gaussian.apply(SymplecticMap(np.eye(4)), GaussianState.vacuum(3))


def test_apply_preserves_physicality_thousand_states():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        st_ = random_state(rng, n)
        g = rng.normal(size=(n, n)) + 1.5 * np.eye(n)
        if np.linalg.cond(g) > 50:
            continue
        smap = rotation_map(rng.uniform(0, 6, n)) @ gaussian.point_transform_symplectic(g)
        out = gaussian.apply(smap, st_)
        assert out.is_physical()
        np.testing.assert_allclose(out.symplectic_eigenvalues(), st_.symplectic_eigenvalues(), rtol=1e-8)


def test_reduce_all_and_single():
    st_ = gaussian.product_state((1.5, -0.5), 2, 2.0)
    assert gaussian.reduce(st_, [0, 1, 2]).allclose(st_, atol=0)
    assert gaussian.reduce(st_, [0]).allclose(GaussianState.coherent((1.5, -0.5)), atol=0)


def test_reduce_two_mode_squeezed_is_thermal():
    r = 0.7
    red = gaussian.reduce(two_mode_squeezed(r), [0])
    np.testing.assert_allclose(red.cov, 0.5 * math.cosh(2 * r) * np.eye(2), atol=1e-15)
    assert red.symplectic_eigenvalues()[0] == pytest.approx(0.5 * math.cosh(2 * r))
    assert red.symplectic_eigenvalues()[0] > 0.5


@pytest.mark.parametrize("keep", [[], [3], [0, 0]])
def test_reduce_bad_index(keep):
    with pytest.raises(BadIndex):
        gaussian.reduce(GaussianState.vacuum(3), keep)


def test_reduce_commutes_with_block_map():
    rng = np.random.default_rng(5)
    st_ = random_state(rng, 4)
    g = np.eye(4)
    g[:2, :2] = [[1.3, 0.4], [-0.2, 0.9]]
    g[2:, 2:] = [[0.7, 0.1], [0.5, 1.6]]
    smap = gaussian.point_transform_symplectic(g)
    lhs = gaussian.reduce(gaussian.apply(smap, st_), [0, 1])
    rhs = gaussian.apply(gaussian.point_transform_symplectic(g[:2, :2]), gaussian.reduce(st_, [0, 1]))
    assert lhs.allclose(rhs, atol=1e-12)


def test_overlap_self_coherent():
    assert gaussian.overlap_with_coherent(GaussianState.coherent((1.2, -3)), (1.2, -3)) == pytest.approx(1.0, abs=1e-15)


def test_overlap_vacuum_displaced():
    f = gaussian.overlap_with_coherent(GaussianState.vacuum(1), (math.sqrt(2), 0))
    assert f == pytest.approx(math.exp(-1), abs=1e-15)
    q = overlap_wigner_quadrature(GaussianState.vacuum(1), GaussianState.coherent((math.sqrt(2), 0)))
    assert q == pytest.approx(math.exp(-1), abs=1e-10)


def test_overlap_doubled_x_variance_matches_kernel_quadrature():
    # doubled x-variance = position convolution with v/a = 1 and no decoherence (u = 0)
    st_ = GaussianState([0.4, 0.2], np.diag([1.0, 0.5]))
    f = gaussian.overlap_with_coherent(st_, (0.4, 0.2))
    assert 0 < f < 1
    assert f == pytest.approx(channel_fidelity_quadrature(0.0, 1.0, 1.0, (0.4, 0.2)), abs=1e-8)


def test_overlap_requires_single_mode():
    with pytest.raises(DimensionMismatch):
        gaussian.overlap_with_coherent(GaussianState.vacuum(2), (0, 0))


def test_overlap_against_wigner_quadrature():
    rng = np.random.default_rng(9)
    for _ in range(5):
        s1, s2 = random_state(rng, 1), random_state(rng, 1)
        assert gaussian.overlap(s1, s2) == pytest.approx(overlap_wigner_quadrature(s1, s2), abs=1e-8)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.2, 3))
def test_overlap_translation_symmetry(x0, p0, dx, dp, var):
    st_ = GaussianState([x0, p0], np.diag([var, 0.25 / var + 0.1]))
    shifted = GaussianState([x0 + dx, p0 + dp], st_.cov)
    assert gaussian.overlap_with_coherent(st_, (0.3, -0.2)) == pytest.approx(
        gaussian.overlap_with_coherent(shifted, (0.3 + dx, -0.2 + dp)), abs=1e-12
    )


def test_state_validation():
    with pytest.raises(DimensionMismatch):
        GaussianState(np.zeros(3), np.eye(3))
    with pytest.raises(InvalidParam):
        GaussianState(np.zeros(2), [[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(InvalidParam):
        GaussianState([np.nan, 0.0], np.eye(2))
