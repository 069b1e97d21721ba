import numpy as np
import pytest

from conftest import small_instance
from lp_oracle import dual_certificate_lp, l1_min_lp, nullspace_min_lp, weighted_l1_min_lp

from nonisocs.sampling import SeedSpec, derive_stream
from nonisocs.sensing import gen_gaussian_matrix
from nonisocs.signals import GaussianAmplitude, gen_sparse_signal, squared_error
from nonisocs.solver import (
    SolverConfig,
    basis_pursuit,
    min_over_nullspace,
    weighted_basis_pursuit,
)


def test_zero_measurements(rng):
    A = gen_gaussian_matrix(6, 12, rng)
    rep = basis_pursuit(A, np.zeros(6))
    assert np.array_equal(rep.solution, np.zeros(12))
    assert rep.objective == 0.0
    assert rep.converged


def test_square_invertible_unique_feasible(rng):
    A = gen_gaussian_matrix(8, 8, rng)
    y = rng.standard_normal(8)
    rep = basis_pursuit(A, y)
    assert np.allclose(rep.solution, np.linalg.solve(A, y), atol=1e-6)


def test_one_sparse_recovery_matches_lp_oracle():
    A, signal, y = small_instance(101, 8, 16, 1)
    rep = basis_pursuit(A, y)
    assert squared_error(signal.densify(), rep.solution) <= 1e-12
    _, lp_obj = l1_min_lp(A, y)
    assert abs(rep.objective - lp_obj) <= 1e-6 * (1.0 + lp_obj)


def test_length_mismatch_rejected(rng):
    A = gen_gaussian_matrix(4, 8, rng)
    with pytest.raises(ValueError):
        basis_pursuit(A, np.zeros(5))


def test_rank_deficient_raises():
    A = np.ones((3, 6))
    with pytest.raises(np.linalg.LinAlgError):
        basis_pursuit(A, np.ones(3))


def test_oracle_equivalence_batch():
    # 100 random small instances against the LP objective
    for i in range(100):
        rng = derive_stream(SeedSpec(1000 + i))
        m = int(rng.integers(4, 13))
        n = int(rng.integers(max(m + 1, 8), 25))
        k = int(rng.integers(1, max(2, m // 2)))
        A, _, y = small_instance(2000 + i, m, n, k)
        rep = basis_pursuit(A, y)
        _, lp_obj = l1_min_lp(A, y)
        assert abs(rep.objective - lp_obj) <= 1e-6 * (1.0 + lp_obj)
        if rep.converged:
            assert rep.feasibility_gap <= 1e-8 * (1.0 + np.linalg.norm(y))


def test_scale_invariance():
    A, _, y = small_instance(7, 10, 20, 3)
    base = basis_pursuit(A, y).solution
    for alpha in (0.1, 10.0):
        scaled = basis_pursuit(alpha * A, alpha * y).solution
        assert np.allclose(scaled, base, atol=1e-6)


def test_dual_certificate_on_polished_solution():
    from nonisocs.signals import ConstantModulus

    A, signal, y = small_instance(21, 10, 24, 3, model=ConstantModulus(1.0))
    rep = basis_pursuit(A, y)
    assert rep.polished
    S = np.flatnonzero(rep.solution)
    signs = np.sign(rep.solution[S])
    nu, _ = dual_certificate_lp(A, S, signs)
    corr = A.T @ nu
    assert np.max(np.abs(corr)) <= 1.0 + 1e-6
    assert np.max(np.abs(corr[S] - signs)) <= 1e-6


def test_weighted_all_ones_reduces_to_plain():
    A, _, y = small_instance(31, 8, 18, 2)
    plain = basis_pursuit(A, y)
    weighted = weighted_basis_pursuit(A, y, np.ones(18))
    assert np.allclose(weighted.solution, plain.solution, atol=1e-8)


def test_weighted_constant_weights_same_minimizer():
    A, _, y = small_instance(32, 8, 18, 2)
    w1 = weighted_basis_pursuit(A, y, np.ones(18))
    wc = weighted_basis_pursuit(A, y, np.full(18, 5.0))
    assert np.allclose(wc.solution, w1.solution, atol=1e-7)


def test_weighted_huge_offsupport_penalty_restricts_support(rng):
    m, n = 10, 20
    A = gen_gaussian_matrix(m, n, rng)
    L = np.array([2, 5, 11, 17])
    xL = rng.standard_normal(L.size)
    y = A[:, L] @ xL
    weights = np.full(n, 1e6)
    weights[L] = 1.0
    rep = weighted_basis_pursuit(A, y, weights)
    # least-squares fit on L is the reference
    ref = np.zeros(n)
    ref[L], *_ = np.linalg.lstsq(A[:, L], y, rcond=None)
    off = np.delete(np.abs(rep.solution), L)
    assert np.max(off) <= 1e-5 * np.max(np.abs(rep.solution))
    assert np.allclose(rep.solution[L], ref[L], atol=1e-6)


def test_weighted_matches_lp_oracle(rng):
    for i in range(20):
        stream = derive_stream(SeedSpec(4000 + i))
        A = gen_gaussian_matrix(8, 16, stream)
        signal = gen_sparse_signal(16, 3, GaussianAmplitude(1.0), stream)
        y = A @ signal.densify()
        weights = np.exp(stream.standard_normal(16) * 0.5)
        rep = weighted_basis_pursuit(A, y, weights)
        _, lp_obj = weighted_l1_min_lp(A, y, weights)
        assert abs(rep.objective - lp_obj) <= 1e-6 * (1.0 + lp_obj)


def test_weighted_change_of_variables_identity():
    A, _, y = small_instance(33, 8, 16, 2)
    weights = np.linspace(0.5, 2.0, 16)
    rep = weighted_basis_pursuit(A, y, weights)
    inner = basis_pursuit(A / weights[np.newaxis, :], y)
    assert np.allclose(rep.solution, inner.solution / weights, atol=1e-7)


def test_weighted_rejects_nonpositive_weights(rng):
    A = gen_gaussian_matrix(4, 8, rng)
    with pytest.raises(ValueError):
        weighted_basis_pursuit(A, np.zeros(4), np.concatenate([np.ones(7), [0.0]]))


def test_nullspace_trivial_case(rng):
    A = gen_gaussian_matrix(6, 6, rng)
    K = np.array([0, 2, 4])
    xK = np.array([1.0, -2.0, 0.5])
    value = min_over_nullspace(A, xK, K, 2.0)
    assert abs(value - 3.5) <= 1e-9


def test_nullspace_never_exceeds_xK_norm(rng):
    for i in range(10):
        stream = derive_stream(SeedSpec(5000 + i))
        A = gen_gaussian_matrix(5, 10, stream)
        K = np.sort(stream.choice(10, size=3, replace=False))
        xK = stream.standard_normal(3)
        value = min_over_nullspace(A, xK, K, 1.5)
        assert value <= np.sum(np.abs(xK)) + 1e-12


def test_nullspace_dense_support_drops_below(rng):
    # |K| = m on a wide matrix: condition fails, minimum strictly below
    stream = derive_stream(SeedSpec(77))
    A = gen_gaussian_matrix(4, 8, stream)
    K = np.array([0, 1, 2, 3])
    xK = stream.standard_normal(4) + np.sign(stream.standard_normal(4))
    value = min_over_nullspace(A, xK, K, 3.0)
    lp = nullspace_min_lp(A, xK, K, 3.0)
    assert abs(value - lp) <= 1e-6 * (1.0 + abs(lp))
    assert value < np.sum(np.abs(xK)) - 1e-3


def test_nullspace_matches_lp_oracle_batch():
    for i in range(15):
        stream = derive_stream(SeedSpec(6000 + i))
        m = int(stream.integers(4, 9))
        n = int(stream.integers(m + 2, 17))
        A = gen_gaussian_matrix(m, n, stream)
        ksz = int(stream.integers(1, m + 1))
        K = np.sort(stream.choice(n, size=ksz, replace=False))
        xK = stream.standard_normal(ksz)
        C = float(1.0 + stream.uniform(0.1, 3.0))
        value = min_over_nullspace(A, xK, K, C)
        lp = nullspace_min_lp(A, xK, K, C)
        assert abs(value - lp) <= 1e-6 * (1.0 + abs(lp))


def test_nullspace_rejects_bad_C(rng):
    A = gen_gaussian_matrix(4, 8, rng)
    with pytest.raises(ValueError):
        min_over_nullspace(A, np.ones(2), np.array([0, 1]), 1.0)


def test_nonconvergence_reported_not_raised():
    A, _, y = small_instance(55, 10, 20, 3)
    rep = basis_pursuit(A, y, SolverConfig(max_iters=3, polish=False))
    assert not rep.converged


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tol_abs=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)
    with pytest.raises(ValueError):
        SolverConfig(penalty=-1.0)
