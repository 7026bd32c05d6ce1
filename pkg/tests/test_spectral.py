import math

import numpy as np
import pytest

import tsurf
from tsurf import solve_entropy, spectral_radius, truncated_scc, v_weights
from tsurf.spectral import weight_matrix


def test_complete3_entropy_is_log3(C3):
    est = solve_entropy(C3, cutoffs=[1.0])
    assert est.converged
    assert abs(est.h - math.log(3)) < 1e-10


def test_complete_m_entropy_is_log_m():
    for m in (2, 5, 11):
        G = tsurf.complete_graph(m)
        assert abs(solve_entropy(G, cutoffs=[1.0]).h - math.log(m)) < 1e-9


def test_complete3_weights_uniform(C3):
    ids, w = v_weights(C3, cutoff=1.0)
    assert len(ids) == 3
    assert np.allclose(w, 1 / 3, atol=1e-12)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)


def test_spectral_radius_against_dense_eig():
    rng = np.random.default_rng(5)
    for n in (4, 17, 40):
        A = rng.random((n, n))
        res = spectral_radius(A, tol=1e-13)
        dense = max(abs(np.linalg.eigvals(A)))
        assert res.lam == pytest.approx(dense, rel=1e-9)
        # left/right vectors: Av = lam v, normalized u.v = 1, sum v = 1
        assert np.allclose(A @ res.v, res.lam * res.v, atol=1e-9 * res.lam)
        assert res.u @ res.v == pytest.approx(1.0, abs=1e-10)
        assert res.v.sum() == pytest.approx(1.0, abs=1e-12)


def test_spectral_radius_periodic_matrix():
    # 2-cycle: plain power iteration would oscillate, the shift must not
    A = np.array([[0.0, 2.0], [0.5, 0.0]])
    res = spectral_radius(A)
    assert res.lam == pytest.approx(1.0, abs=1e-11)


def test_single_loop_has_no_growth():
    # lambda(sigma) = e^{-sigma} never exceeds 1, so there is no bracket:
    # a one-cycle graph carries zero entropy and the solver says so
    G = tsurf.complete_graph(1)
    with pytest.raises(tsurf.BracketFailure):
        solve_entropy(G, cutoffs=[1.0])


def test_lambda_decreasing_in_sigma(G9):
    W = weight_matrix(G9, 2.0)
    lams = [spectral_radius(W.at(s)).lam for s in (2.0, 2.5, 3.0)]
    assert lams[0] > lams[1] > lams[2]


def test_ladder_monotone_and_value(G9):
    est = solve_entropy(G9, cutoffs=[2.0, 2.5, 3.0])
    hs = [p["h"] for p in est.per_cutoff]
    assert hs == sorted(hs)
    # full budget-9 graph (48 connections)
    assert est.h == pytest.approx(2.5123875940855984, abs=1e-9)
    assert est.per_cutoff[-1]["scc_size"] == 48


def test_scc_covers_everything_on_lshape(G9):
    ids = truncated_scc(G9)
    assert len(ids) == 48


def test_empty_scc_below_shortest_length(G9):
    with pytest.raises(tsurf.EmptySCC):
        truncated_scc(G9, 0.5)


def test_entropy_halves_under_doubling(lshape, G9):
    S2 = tsurf.scale_surface(lshape, 2)
    H = tsurf.build_concat_graph(S2, 36)
    h1 = solve_entropy(G9, cutoffs=[3.0]).h
    h2 = solve_entropy(H, cutoffs=[6.0]).h
    assert h2 == pytest.approx(h1 / 2, abs=1e-9)


def test_weight_symmetry_classes(G9):
    # connections with the same length play symmetric roles on this surface
    ids, w = v_weights(G9)
    lens = G9.lengths[ids]
    for L in np.unique(lens):
        grp = w[lens == L]
        assert np.allclose(grp, grp[0], rtol=1e-10)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)


def test_v_weight_audit_matches_bulk(G9):
    ids, w = v_weights(G9)
    # the audited single-saddle path runs the finite-difference cross-check
    s0 = int(ids[0])
    assert tsurf.v_weight(G9, s0) == pytest.approx(w[0], rel=1e-9)


def test_report_fields(G9):
    est = solve_entropy(G9, cutoffs=[2.0, 3.0])
    rep = est.report()
    assert rep["converged"] is True
    assert rep["cutoff"] == 3.0
    assert len(rep["per_cutoff"]) == 2
    assert rep["tail_estimate"] >= 0.0
