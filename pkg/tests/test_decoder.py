import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvqss import decoder, gaussian
from cvqss.errors import BadSubset, InvalidParam, RankDeficient, Singular
from cvqss.matlib import ortho_error
from cvqss.oracles import null_vector_cross
from cvqss.scheme import EncodingMatrix, ThresholdParams, discard_shares, random_encoding

from conftest import subsets


def test_split_identity():
    sp = decoder.split(EncodingMatrix(np.eye(5), 3), (0, 1, 2))
    np.testing.assert_array_equal(sp.kappa, np.eye(3))
    np.testing.assert_array_equal(sp.lam, np.zeros((3, 2)))
    assert sp.others == (3, 4)


def test_split_xi_rows():
    al, be, g1, g2 = 0.7, 1.3, 0.4, -0.2
    g = [[1.0, 0.0, g1], [al, be, g2], [0.3, -1.1, 0.5]]
    sp = decoder.split(EncodingMatrix(g, 2), (0, 1))
    np.testing.assert_array_equal(sp.kappa, [[1, 0], [al, be]])
    np.testing.assert_array_equal(sp.lam, [[g1], [g2]])


def test_split_reassembles_rows(golden3):
    for s in subsets(golden3):
        sp = decoder.split(golden3, s)
        np.testing.assert_array_equal(np.hstack([sp.kappa, sp.lam]), golden3.g[list(s)])
        np.testing.assert_array_equal(np.hstack([sp.zeta_adv, sp.gamma_adv]), golden3.g[list(sp.others)])


def test_split_permutation_relabels(golden3):
    a = decoder.split(golden3, (0, 2, 4))
    b = decoder.split(golden3, (4, 0, 2))
    np.testing.assert_array_equal(b.kappa, a.kappa[[2, 0, 1]])
    np.testing.assert_array_equal(b.zeta_adv, a.zeta_adv)


@pytest.mark.parametrize("bad", [(0,), (0, 0), (0, 5), (0, 1, 2)])
def test_split_bad_subsets(golden2, bad):
    with pytest.raises(BadSubset):
        decoder.split(golden2, bad)


def test_split_rejects_discarded_share(golden3):
    view = discard_shares(golden3, [4])
    with pytest.raises(BadSubset):
        decoder.split(view, (0, 1, 4))


def test_build_T_identity_block():
    # collaborators {1,2}, adversary X+Y component (0,1): v = (1,0), T row 1 = (1,0)
    g = [[1.0, 0.0, 0.5], [0.0, 1.0, 0.3], [0.0, 1.0, 0.7]]
    b = decoder.build_T(decoder.split(EncodingMatrix(g, 2), (0, 1)))
    np.testing.assert_allclose(b.v, [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(b.T[0], [1.0, 0.0], atol=1e-15)
    assert b.beta == 0.0
    np.testing.assert_allclose(b.T @ [[1, 0], [0, 1]], b.T)


def test_build_T_degenerate_beta_needs_one_squeezer():
    g = [[1.0, 0.0, 0.5], [0.0, 1.0, 0.3], [0.0, 1.0, 0.7]]
    p = decoder.plan(EncodingMatrix(g, 2), (0, 1))
    assert p.squeezer_count() <= 1


def test_build_T_rejects_zero_gamma(golden2):
    sp = decoder.split(golden2, (0, 1))
    for bad in (0.0, math.inf, math.nan):
        with pytest.raises(InvalidParam):
            decoder.build_T(sp, bad)


def test_build_T_rank_deficient_adversary():
    g = np.eye(5)
    g[3, :3] = g[4, :3] = [0.0, 1.0, 1.0]
    g[4, 3:] = [2.0, 2.0]
    with pytest.raises(RankDeficient):
        decoder.build_T(decoder.split(EncodingMatrix(g, 3), (0, 1, 2)))


def test_build_T_alpha_zero_is_singular():
    # adversary X+Y part (1,0) forces v = (0,1); collaborator kappa = I gives a = e1, alpha = 0
    g = [[1.0, 0.0, 0.5], [0.0, 1.0, 0.3], [1.0, 0.0, 0.7]]
    with pytest.raises(Singular):
        decoder.build_T(decoder.split(EncodingMatrix(g, 2), (0, 1)))


def test_null_vector_matches_cross_oracle(golden3):
    for s in subsets(golden3):
        sp = decoder.split(golden3, s)
        b = decoder.build_T(sp)
        cross = null_vector_cross(sp.zeta_adv)
        assert abs(abs(b.v @ cross) - 1.0) <= 1e-12


def test_factor_identity_no_squeezers():
    p = decoder.factor(np.eye(3), 1.0, 0.0, 1.0, np.eye(3))
    assert p.r1 == pytest.approx(0.0, abs=1e-15) and p.r2 == pytest.approx(0.0, abs=1e-15)
    assert p.squeezer_count() == 0


def test_factor_ln3():
    W = np.eye(2)
    T = decoder.middle_factor(0.6, 0.8, 1.0, 2) @ W
    p = decoder.factor(T, 0.6, 0.8, 1.0, W)
    assert p.r1 == pytest.approx(0.5 * math.log(1.8), abs=1e-14)
    assert p.r2 == pytest.approx(0.5 * math.log(0.2), abs=1e-14)
    assert p.total_squeezing == pytest.approx(math.log(3), abs=1e-14)
    assert p.reconstruction_error() <= 1e-15


def test_factor_singular_block():
    with pytest.raises(Singular):
        decoder.factor(np.eye(2), 0.0, 1.0, 1.0, np.eye(2))


def test_plan_to_dict_one_based(golden2):
    d = decoder.plan(golden2, (1, 2)).to_dict()
    assert d["collaborators"] == [2, 3]
    assert list(d) == ["collaborators", "gamma_free", "alpha", "beta", "r1", "r2", "Z", "X2"]


def test_hundred_random_plans_reconstruct():
    rng = np.random.default_rng(100)
    for _ in range(100):
        k = int(rng.integers(2, 6))
        enc = random_encoding(ThresholdParams.canonical(k), int(rng.integers(2**31)))
        s = tuple(sorted(rng.choice(enc.n, k, replace=False)))
        gamma = None if rng.random() < 0.5 else float(rng.uniform(0.1, 5))
        p = decoder.plan(enc, s, gamma)
        assert p.reconstruction_error() <= 1e-10
        assert p.orthogonality_error() <= 1e-10
        assert p.squeezer_count() <= 2
        assert abs(np.linalg.det(p.X2)) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60)
@given(st.integers(2, 5), st.integers(0, 10_000), st.data())
def test_xi_invariants(k, seed, data):
    enc = random_encoding(ThresholdParams.canonical(k), seed)
    s = data.draw(st.sampled_from(subsets(enc)))
    sp = decoder.split(enc, s)
    b = decoder.build_T(sp)
    xi = decoder.xi_system(sp, b)
    assert xi.check()
    # Y-part and Z-part columns stay where they were
    assert xi.xi.shape == (enc.n, enc.n)
    assert ortho_error(b.W) <= 1e-12


def test_gamma_override_is_used(golden3):
    p = decoder.plan(golden3, (0, 1, 3), gamma_free=2.5)
    assert p.gamma_free == 2.5
    assert p.reconstruction_error() <= 1e-10


def test_default_gamma_is_cost_optimum(golden3):
    from cvqss.cost import minimize_gamma_analytic

    for s in subsets(golden3):
        p = decoder.plan(golden3, s)
        best = minimize_gamma_analytic(p.alpha, p.beta)
        assert p.total_squeezing == pytest.approx(best.r_min, abs=1e-12)


def test_decoding_map_embeds_T():
    T = np.array([[1.0, 2.0], [3.0, 4.0]])
    m = decoder.decoding_map(4, (3, 1), T)
    assert m[3, 3] == 1.0 and m[3, 1] == 2.0 and m[1, 3] == 3.0 and m[1, 1] == 4.0
    assert m[0, 0] == m[2, 2] == 1.0


def test_replicate_perfect_limit_k2(golden2):
    mean = (1.0, -0.5)
    for s in subsets(golden2):
        replica, _ = decoder.replicate(golden2, s, mean, math.exp(6))
        assert gaussian.overlap_with_coherent(replica, mean) >= 1 - 1e-4


def test_replicate_permutation_invariant(golden3):
    mean = (0.7, 0.2)
    for s in subsets(golden3):
        ref, _ = decoder.replicate(golden3, s, mean, 2.0)
        for perm in itertools.permutations(s):
            if perm[0] != s[0]:
                continue
            st_, _ = decoder.replicate(golden3, perm, mean, 2.0)
            assert st_.allclose(ref, atol=1e-9)


def test_replicate_output_mode_is_first_collaborator(golden3):
    # relabeling which collaborator receives the secret leaves the replica unchanged
    mean = (0.7, 0.2)
    a, _ = decoder.replicate(golden3, (0, 2, 3), mean, 2.0)
    b, _ = decoder.replicate(golden3, (3, 0, 2), mean, 2.0)
    assert a.allclose(b, atol=1e-9)
