import math

import numpy as np
import pytest

import ppdecomp as ppd
from ppdecomp import (BootstrapConfig, BootstrapInfeasible, DimensionMismatch,
                      InvalidInput, ProductSpectrum, decompose,
                      decompose_multiview, individual_basis, joint_basis,
                      joint_rank, principal_spectrum, product_spectrum,
                      subspace_distance, theorem1_intervals, theorem2_bounds,
                      true_epsilons, truth_oracle)
from conftest import angled_pair, projector, qr_basis

LIGHT_BOOT = BootstrapConfig(replicates=12, seed=17)


# ---------------------------------------------------------------------------
# brute-force oracles on small ambient dimensions (full projector arithmetic)

def bf_epsilons(u1, u2, u1_hat, u2_hat):
    p1, p2 = projector(u1), projector(u2)
    q1, q2 = projector(u1_hat), projector(u2_hat)
    r = q1 @ q2 - p1 @ p2
    return np.linalg.norm(p1 @ r @ p2, 2), np.linalg.norm(r, 2)


def bf_epsilons_delta_form(u1, u2, u1_hat, u2_hat):
    # The delta combination from the cluster-bound proofs, with
    # delta_k = P_hat_k - P_k; must agree with the operator-difference form.
    p1, p2 = projector(u1), projector(u2)
    d1 = projector(u1_hat) - p1
    d2 = projector(u2_hat) - p2
    eps1 = np.linalg.norm(p1 @ (d1 + d2 + d1 @ d2) @ p2, 2)
    eps2 = np.linalg.norm(p1 @ d2 + d1 @ p2 + d1 @ d2, 2)
    return eps1, eps2


def bf_principal_spectrum(u1, u2):
    s = np.linalg.svd(projector(u1) @ projector(u2), compute_uv=False)
    return s[: min(u1.shape[1], u2.shape[1])]


def bf_theorem2(joint_t, inds_t, view_hats, joint_hat):
    x1 = np.hstack([joint_t, inds_t[0]])
    x2 = np.hstack([joint_t, inds_t[1]])
    p1, p2 = projector(x1), projector(x2)
    q1, q2 = projector(view_hats[0]), projector(view_hats[1])
    r_joint = q1 @ q2 - p1 @ p2
    sym = np.linalg.norm(r_joint + r_joint.T, 2)
    tau = np.linalg.norm(projector(inds_t[0]) @ projector(inds_t[1]), 2)
    n = joint_t.shape[0]
    pj, pj_hat = projector(joint_t), projector(joint_hat)
    bounds = []
    for p, q in ((p1, q1), (p2, q2)):
        r_ind = (np.eye(n) - pj_hat) @ q - (np.eye(n) - pj) @ p
        bounds.append(2.0 * np.linalg.norm(r_ind, 2))
    return sym / (1.0 - tau), tuple(bounds), tau


def small_instance(seed):
    rng = np.random.default_rng(seed)
    n = 12
    q = qr_basis(n, 9, rng)
    joint, i1, i2 = q[:, :2], q[:, 2:4], q[:, 4:6]
    # estimates: perturbed versions of the true view bases
    hats = []
    for ind in (i1, i2):
        x = np.hstack([joint, ind])
        hats.append(np.linalg.qr(x + 0.3 * rng.standard_normal(x.shape))[0])
    return joint, (i1, i2), hats


# ---------------------------------------------------------------------------
# product spectrum and rank counting

def test_product_spectrum_identical_views():
    u = qr_basis(10, 3, np.random.default_rng(0))
    spec = product_spectrum(u, u, 0.1, 0.25)
    assert np.allclose(spec.values, 1.0, atol=1e-10)
    assert spec.noise_threshold == pytest.approx(0.5)
    assert spec.bootstrap_threshold == pytest.approx(0.9)


def test_product_spectrum_orthogonal_views():
    q = qr_basis(10, 6, np.random.default_rng(1))
    spec = product_spectrum(q[:, :3], q[:, 3:], 0.0, 0.0)
    assert np.allclose(spec.values, 0.0, atol=1e-10)
    assert spec.bootstrap_threshold < 1.0  # capped just below one


def test_joint_rank_counts_strictly_above_both_thresholds():
    spec = ProductSpectrum(values=np.array([1.0, 1.0, 0.6, 0.1]),
                           bootstrap_threshold=0.7, noise_threshold=0.8)
    assert joint_rank(spec) == 2
    low = ProductSpectrum(values=np.array([0.5, 0.2]),
                          bootstrap_threshold=0.9, noise_threshold=0.6)
    assert joint_rank(low) == 0


# ---------------------------------------------------------------------------
# joint and individual bases

def test_joint_basis_identical_views_spans_them():
    u = qr_basis(15, 4, np.random.default_rng(2))
    j = joint_basis(u, u, 4)
    assert subspace_distance(j, u) <= 1e-8


def test_joint_basis_rank_zero_is_empty():
    u = qr_basis(15, 4, np.random.default_rng(3))
    assert joint_basis(u, u, 0).shape == (15, 0)


def test_joint_basis_rejects_excessive_rank():
    u = qr_basis(15, 4, np.random.default_rng(4))
    with pytest.raises(InvalidInput):
        joint_basis(u, u, 5)


def test_joint_basis_recovers_planted_joint_noiseless():
    rng = np.random.default_rng(5)
    q = qr_basis(20, 8, rng)
    joint, i1, i2 = q[:, :2], q[:, 2:5], q[:, 5:8]
    u1 = np.hstack([joint, i1])
    u2 = np.hstack([joint, i2])
    j = joint_basis(u1, u2, 2)
    assert subspace_distance(j, joint) <= 1e-8


def test_individual_basis_with_empty_joint_spans_view():
    u = qr_basis(12, 5, np.random.default_rng(6))
    ind = individual_basis(u, np.zeros((12, 0)), 5, 0)
    assert subspace_distance(ind, u) <= 1e-10


def test_individual_basis_rank_equal_joint_is_empty():
    u = qr_basis(12, 3, np.random.default_rng(7))
    assert individual_basis(u, u, 3, 3).shape == (12, 0)


def test_individual_basis_recovers_planted_individual_noiseless():
    rng = np.random.default_rng(8)
    q = qr_basis(20, 8, rng)
    joint, i1 = q[:, :3], q[:, 3:6]
    u1 = np.hstack([joint, i1])
    ind = individual_basis(u1, joint, 6, 3)
    assert subspace_distance(ind, i1) <= 1e-8
    assert np.max(np.abs(joint.T @ ind)) <= 1e-10


# ---------------------------------------------------------------------------
# oracle quantities

def test_true_epsilons_zero_perturbation():
    u1 = qr_basis(9, 3, np.random.default_rng(9))
    u2 = qr_basis(9, 4, np.random.default_rng(10))
    eps1, eps2 = true_epsilons(u1, u2, u1, u2)
    assert eps1 <= 1e-12 and eps2 <= 1e-12


def test_true_epsilons_missed_joint_direction():
    # A joint direction entirely absent from one estimate forces eps1 = 1.
    q = qr_basis(10, 4, np.random.default_rng(11))
    joint = q[:, :2]
    off = q[:, 2:]
    eps1, _ = true_epsilons(joint, joint, off, joint)
    assert eps1 == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_epsilons_match_brute_force(seed):
    joint, inds, hats = small_instance(seed)
    u1 = np.hstack([joint, inds[0]])
    u2 = np.hstack([joint, inds[1]])
    got = true_epsilons(u1, u2, hats[0], hats[1])
    want = bf_epsilons(u1, u2, hats[0], hats[1])
    want_delta = bf_epsilons_delta_form(u1, u2, hats[0], hats[1])
    assert got[0] == pytest.approx(want[0], abs=1e-10)
    assert got[1] == pytest.approx(want[1], abs=1e-10)
    assert want[0] == pytest.approx(want_delta[0], abs=1e-10)
    assert want[1] == pytest.approx(want_delta[1], abs=1e-10)
    spec = principal_spectrum(hats[0], hats[1])
    assert np.allclose(spec, bf_principal_spectrum(hats[0], hats[1]), atol=1e-10)


def test_theorem1_intervals_noiseless_collapse():
    rng = np.random.default_rng(12)
    i1, i2 = angled_pair(16, 3, 3, 40.0, rng)
    joint = np.linalg.qr(
        (np.eye(16) - projector(np.hstack([i1, i2]))) @ rng.standard_normal((16, 2)))[0]
    ivals = theorem1_intervals(joint, (i1, i2), 0.0, 0.0)
    assert ivals[0] == (1.0, 1.0)
    assert ivals[1][0] == pytest.approx(math.cos(math.radians(40.0)), abs=1e-8)
    assert ivals[1][1] == pytest.approx(math.cos(math.radians(40.0)), abs=1e-8)
    assert ivals[2] == (0.0, 0.0)


def test_theorem1_intervals_degenerate_epsilon():
    rng = np.random.default_rng(13)
    i1, i2 = angled_pair(16, 3, 3, 40.0, rng)
    joint = qr_basis(16, 2, rng)
    ivals = theorem1_intervals(joint, (i1, i2), 1.2, 0.4)
    assert ivals[0] == (0.0, 1.0)


def test_truth_oracle_orthogonal_individuals():
    rng = np.random.default_rng(14)
    q = qr_basis(20, 8, rng)
    oracle = truth_oracle(q[:, :2], (q[:, 2:5], q[:, 5:8]), 0.1, 0.2)
    assert oracle.nonorth_rank == 0
    assert oracle.tau_max == 0.0 and oracle.tau_min == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_theorem2_matches_brute_force(seed):
    joint, inds, hats = small_instance(seed)
    j_hat = joint_basis(hats[0], hats[1], 2)
    ind_hats = [individual_basis(hats[k], j_hat, 4, 2) for k in range(2)]
    rep = theorem2_bounds(joint, inds, hats, j_hat, ind_hats)
    want_joint, want_inds, want_tau = bf_theorem2(joint, inds, hats, j_hat)
    assert rep.joint_bound == pytest.approx(want_joint, abs=1e-10)
    assert rep.individual_bounds[0] == pytest.approx(want_inds[0], abs=1e-10)
    assert rep.individual_bounds[1] == pytest.approx(want_inds[1], abs=1e-10)
    assert rep.tau_max == pytest.approx(want_tau, abs=1e-10)


def test_theorem2_zero_perturbation():
    rng = np.random.default_rng(15)
    q = qr_basis(14, 6, rng)
    joint, i1, i2 = q[:, :2], q[:, 2:4], q[:, 4:6]
    hats = [np.hstack([joint, i1]), np.hstack([joint, i2])]
    rep = theorem2_bounds(joint, (i1, i2), hats, joint, [i1, i2])
    assert rep.joint_bound <= 1e-10
    assert max(rep.individual_bounds) <= 1e-10
    assert rep.joint_distance <= 1e-10
    assert rep.hypothesis_ok


# ---------------------------------------------------------------------------
# full decomposition

def _noiseless_pair(seed, joint_rank=3, angle=90.0):
    cfg = ppd.SimConfig(n=30, dims=(35, 40), joint_rank=joint_rank,
                        individual_ranks=(3, 2), angle_deg=angle, snr=np.inf,
                        seed=seed)
    return ppd.generate(cfg)


def test_decompose_duplicated_noiseless_view():
    rng = np.random.default_rng(16)
    y = qr_basis(20, 3, rng) @ np.diag([3.0, 2.0, 1.0]) @ qr_basis(25, 3, rng).T
    res = decompose(y, y.copy(), ranks=(3, 3), bootstrap=LIGHT_BOOT)
    assert res.joint_rank == 3
    assert res.individuals[0].shape == (20, 0)
    assert res.individuals[1].shape == (20, 0)


def test_decompose_orthogonal_noiseless_views():
    rng = np.random.default_rng(17)
    q = qr_basis(20, 6, rng)
    y1 = q[:, :3] @ rng.standard_normal((3, 25))
    y2 = q[:, 3:] @ rng.standard_normal((3, 25))
    res = decompose(y1, y2, ranks=(3, 3), bootstrap=LIGHT_BOOT)
    assert res.joint_rank == 0
    assert res.individuals[0].shape[1] == 3


def test_decompose_noiseless_recovers_planted_structure():
    views, truth = _noiseless_pair(seed=18, angle=50.0)
    res = decompose(views[0], views[1], ranks=(6, 5), bootstrap=LIGHT_BOOT)
    assert res.joint_rank == 3
    assert subspace_distance(res.joint, truth.joint) <= 1e-8
    assert subspace_distance(res.individuals[0], truth.individuals[0]) <= 1e-8
    assert subspace_distance(res.individuals[1], truth.individuals[1]) <= 1e-8


def test_decompose_order_invariance():
    cfg = ppd.SimConfig(n=50, dims=(80, 100), joint_rank=4, individual_ranks=(5, 4),
                        angle_deg=30.0, snr=2.0, seed=19)
    views, _ = ppd.generate(cfg)
    boot = BootstrapConfig(replicates=25, seed=23)
    fwd = decompose(views[0], views[1], ranks=(9, 8), bootstrap=boot)
    rev = decompose(views[1], views[0], ranks=(8, 9), bootstrap=boot)
    assert fwd.joint_rank == rev.joint_rank
    assert fwd.epsilon1_hat == rev.epsilon1_hat
    assert subspace_distance(fwd.joint, rev.joint) <= 1e-8


def test_decompose_result_invariants():
    cfg = ppd.SimConfig(n=50, dims=(80, 100), joint_rank=4, individual_ranks=(5, 4),
                        angle_deg=90.0, snr=2.0, seed=20)
    views, _ = ppd.generate(cfg)
    res = decompose(views[0], views[1], bootstrap=BootstrapConfig(replicates=25, seed=3))
    assert res.joint.shape[1] == res.joint_rank
    for k in range(2):
        ind = res.individuals[k]
        assert ind.shape[1] == res.marginal_ranks[k] - res.joint_rank
        if res.joint_rank and ind.shape[1]:
            assert np.max(np.abs(res.joint.T @ ind)) <= 1e-6
    assert np.all(res.spectrum.values >= 0.0) and np.all(res.spectrum.values <= 1.0)
    assert 0.0 <= res.spectrum.bootstrap_threshold <= 1.0
    assert 0.0 <= res.spectrum.noise_threshold <= 1.0


def test_decompose_row_count_mismatch():
    with pytest.raises(DimensionMismatch):
        decompose(np.ones((10, 4)), np.ones((9, 4)))


def test_decompose_infeasible_ranks_error():
    rng = np.random.default_rng(21)
    y1 = rng.standard_normal((10, 20))
    y2 = rng.standard_normal((10, 22))
    with pytest.raises(BootstrapInfeasible):
        decompose(y1, y2, ranks=(6, 6), bootstrap=LIGHT_BOOT)


def test_decompose_zero_rank_views_still_well_formed():
    res = decompose(np.zeros((8, 10)), np.zeros((8, 12)), bootstrap=LIGHT_BOOT)
    assert res.joint_rank == 0
    assert res.marginal_ranks == (0, 0)
    assert res.joint.shape == (8, 0)
    assert res.spectrum.values.size == 0


# ---------------------------------------------------------------------------
# multi-view

def test_multiview_two_views_consistent_with_decompose():
    cfg = ppd.SimConfig(n=40, dims=(50, 60), joint_rank=3, individual_ranks=(3, 3),
                        angle_deg=45.0, snr=2.0, seed=22)
    views, _ = ppd.generate(cfg)
    boot = BootstrapConfig(replicates=20, seed=31)
    a = decompose(views[0], views[1], ranks=(6, 6), bootstrap=boot)
    b = decompose_multiview(views, ranks=(6, 6), bootstrap=boot)
    assert a.joint_rank == b.joint_rank
    assert a.epsilon1_hat == b.epsilon1_hat
    assert subspace_distance(a.joint, b.joint) <= 1e-10


def test_multiview_min_pairwise_rule():
    # Views 1 and 2 share a 3-dim subspace, view 3 only 2 of those directions;
    # the pairwise joint ranks are (3, 2, 2), so the common rank must be 2.
    rng = np.random.default_rng(23)
    q = qr_basis(24, 9, rng)
    shared, extras = q[:, :3], q[:, 3:]
    def view(cols, p, s):
        return np.hstack([shared[:, :cols[0]], extras[:, cols[1]:cols[2]]]) @ \
               qr_basis(p, cols[0] + cols[2] - cols[1], rng).T * s
    y1 = view((3, 0, 2), 30, 1.7)
    y2 = view((3, 2, 4), 32, 1.3)
    y3 = view((2, 4, 6), 34, 1.1)
    res = decompose_multiview([y1, y2, y3], ranks=(5, 5, 4), bootstrap=LIGHT_BOOT)
    assert res.joint_rank == 2
    assert subspace_distance(res.joint, shared[:, :2]) <= 1e-8


def test_multiview_noiseless_three_views():
    cfg = ppd.SimConfig(n=35, dims=(40, 45, 50), joint_rank=3,
                        individual_ranks=(4, 3, 3), angle_deg=90.0, snr=np.inf,
                        seed=24)
    views, truth = ppd.generate(cfg)
    res = decompose_multiview(views, ranks=cfg.marginal_ranks, bootstrap=LIGHT_BOOT)
    assert res.joint_rank == 3
    assert subspace_distance(res.joint, truth.joint) <= 1e-8
    for k in range(3):
        assert subspace_distance(res.individuals[k], truth.individuals[k]) <= 1e-8


def test_multiview_pairwise_joint_product_close_to_permutation():
    cfg = ppd.SimConfig(n=35, dims=(40, 45, 50), joint_rank=3,
                        individual_ranks=(4, 3, 3), angle_deg=90.0, snr=2.0,
                        seed=25)
    views, _ = ppd.generate(cfg)
    boot = BootstrapConfig(replicates=15, seed=5)
    perm = decompose_multiview(views, ranks=cfg.marginal_ranks, bootstrap=boot)
    pair = decompose_multiview(views, ranks=cfg.marginal_ranks, bootstrap=boot,
                               joint_product="pairwise")
    assert perm.joint_rank == pair.joint_rank
    assert subspace_distance(perm.joint, pair.joint) <= 0.2


def test_multiview_permutation_guard_for_many_views():
    views = [np.ones((6, 4)) for _ in range(6)]
    with pytest.raises(InvalidInput):
        decompose_multiview(views, ranks=(1,) * 6, bootstrap=LIGHT_BOOT)


def test_multiview_needs_two_views():
    with pytest.raises(InvalidInput):
        decompose_multiview([np.ones((5, 3))])


def test_joint_rank_recovered_at_high_snr_monte_carlo():
    # True marginal ranks, SNR 2, orthogonal individuals: the threshold pair
    # should isolate the four joint directions in nearly every draw.
    hits = 0
    for seed in range(50):
        cfg = ppd.SimConfig(n=50, dims=(80, 100), joint_rank=4,
                            individual_ranks=(5, 4), angle_deg=90.0, snr=2.0,
                            seed=seed)
        views, _ = ppd.generate(cfg)
        res = decompose(views[0], views[1], ranks=cfg.marginal_ranks,
                        bootstrap=BootstrapConfig(replicates=40, seed=seed + 900))
        hits += res.joint_rank == 4
    assert hits >= 45
