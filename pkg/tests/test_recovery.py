import math

import numpy as np
import pytest

from incoherent import (
    ConstructionParams,
    InfeasibleError,
    InvalidParameterError,
    SensingMatrix,
    SparseSignal,
    brute_force_l0,
    cap_measure_exact,
    coherence,
    construct,
    monte_carlo_cap,
    omp,
    recovery_experiment,
    ric_brute_force,
)
from incoherent.recovery import random_sparse_signal
from incoherent.rng import make_generator


def random_unit(rng, m, n):
    return SensingMatrix.from_columns(rng.standard_normal((m, n)))


def test_sparse_signal_validation():
    x = SparseSignal(5, (2, 4), (1.5, -2.0))
    assert np.array_equal(x.to_dense(), [0, 1.5, 0, -2.0, 0])
    for support, values in [((3, 2), (1, 1)), ((0,), (1,)), ((6,), (1,)), ((1,), (0.0,)), ((1, 2), (1,))]:
        with pytest.raises(InvalidParameterError):
            SparseSignal(5, support, values)


def test_omp_identity():
    b = np.zeros(6)
    b[2] = 5.0
    r = omp(np.eye(6), b, 1)
    assert r.recovered_support == (3,)
    assert r.coefficients == (5.0,)
    assert r.residual_norm == 0.0


def test_omp_zero_signal():
    a = random_unit(np.random.default_rng(0), 5, 8)
    r = omp(a, np.zeros(5), 2)
    assert r.recovered_support == ()
    assert r.residual_norm == 0.0


def test_omp_validation():
    a = np.eye(3)
    with pytest.raises(InvalidParameterError):
        omp(a, np.zeros(3), 4)
    with pytest.raises(InvalidParameterError):
        omp(a, np.zeros(2), 1)
    with pytest.raises(InvalidParameterError):
        omp(a, np.array([np.inf, 0, 0]), 1)


def test_omp_recovers_under_coherence_condition():
    a, _ = construct(ConstructionParams(N=200, s=2, m=180, seed=1))
    rng = make_generator(123)
    for _ in range(50):
        x = random_sparse_signal(rng, 200, 2)
        b = a.entries @ x.to_dense()
        r = omp(a, b, 2, reference=x)
        assert r.support_correct
        assert r.max_coefficient_error <= 1e-8
        assert r.residual_norm <= 1e-10 * np.linalg.norm(b)


def test_omp_flags_degenerate_selection():
    col = np.array([1.0, 0.0, 0.0])
    a = np.column_stack([col, col, [0, 1.0, 0]])
    # b equals the duplicated column: OMP stops after one pick, no degeneracy
    r = omp(a, col, 2)
    assert r.recovered_support in ((1,), (2,))
    assert not r.degenerate


def test_brute_force_l0_examples():
    a = np.eye(4)
    assert brute_force_l0(a, np.zeros(4), 2).support == ()
    x = brute_force_l0(a, np.array([0, 2.0, 0, 0]), 2)
    assert x.support == (2,) and x.values == (2.0,)


def test_brute_force_l0_guards_and_infeasible():
    with pytest.raises(InvalidParameterError):
        brute_force_l0(np.eye(21), np.zeros(21), 1)
    with pytest.raises(InvalidParameterError):
        brute_force_l0(np.eye(4), np.zeros(4), 4)
    with pytest.raises(InfeasibleError):
        brute_force_l0(np.eye(4), np.ones(4), 2)


def test_brute_force_l0_recovers_two_sparse():
    # random 6 x 10 matrices essentially never reach mu < 1/3, so take constructed 9 x 10 ones
    rng = np.random.default_rng(2024)
    found = 0
    for seed in range(60):
        a, _ = construct(ConstructionParams(N=10, s=2, m=9, seed=seed, threshold=0.3, budget=2_000))
        if a is None:
            continue
        assert coherence(a) < 1 / 3
        x = random_sparse_signal(rng, 10, 2)
        got = brute_force_l0(a, a.entries @ x.to_dense(), 3)
        assert got.support == x.support
        assert np.allclose(got.values, x.values, atol=1e-9, rtol=0)
        found += 1
    assert found >= 10


def test_ric_identity():
    for s in (1, 2, 3):
        assert ric_brute_force(np.eye(6), s).delta == pytest.approx(0.0, abs=1e-14)


def test_ric_duplicate_columns():
    a = SensingMatrix(np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))
    r = ric_brute_force(a, 2)
    assert r.delta == pytest.approx(1.0, abs=1e-12)
    assert r.argmin_support == (1, 2)


@pytest.mark.parametrize("seed", range(10))
def test_ric_two_equals_coherence(seed):
    rng = np.random.default_rng(seed)
    a = random_unit(rng, int(rng.integers(2, 9)), int(rng.integers(3, 12)))
    r = ric_brute_force(a, 2)
    assert r.delta == pytest.approx(coherence(a), abs=1e-10)
    assert len(r.argmax_support) == 2


@pytest.mark.parametrize("seed", range(5))
def test_ric_monotone_in_s(seed):
    a = random_unit(np.random.default_rng(seed), 5, 9)
    deltas = [ric_brute_force(a, s).delta for s in (1, 2, 3)]
    assert deltas[0] == pytest.approx(0.0, abs=1e-12)
    assert deltas[0] <= deltas[1] + 1e-12 <= deltas[2] + 2e-12


def test_ric_guard_reports_count():
    with pytest.raises(InvalidParameterError, match="supports"):
        ric_brute_force(np.eye(40), 8)


def test_ric_chunking_does_not_change_result():
    a = random_unit(np.random.default_rng(8), 6, 12)
    assert ric_brute_force(a, 3, chunk=7) == ric_brute_force(a, 3)


def test_recovery_experiment_identity():
    summary = recovery_experiment(SensingMatrix(np.eye(8)), 3, 40, seed=1)
    assert summary["success_rate"] == 1.0
    assert summary["condition_held"]


def test_recovery_experiment_constructed_matrix():
    a, _ = construct(ConstructionParams(N=200, s=2, m=180, seed=1))
    summary = recovery_experiment(a, 2, 500, seed=5)
    assert summary["success_rate"] == 1.0
    assert summary["worst_coeff_error"] <= 1e-8
    assert summary["condition_held"]
    assert set(summary) >= {"matrix_sha256", "s", "trials", "seed", "success_rate", "worst_coeff_error", "condition_held"}


def test_recovery_experiment_duplicate_pair_fails():
    rng = np.random.default_rng(3)
    cols = rng.standard_normal((6, 8))
    cols[:, 1] = cols[:, 0]
    a = SensingMatrix.from_columns(cols)
    summary = recovery_experiment(a, 2, 30, seed=9, support=(1, 2))
    assert summary["success_rate"] == 0.0
    assert not summary["condition_held"]


def test_recovery_experiment_independent_of_threads():
    a, _ = construct(ConstructionParams(N=100, s=2, seed=4))
    one = recovery_experiment(a, 3, 60, seed=11, threads=1)
    four = recovery_experiment(a, 3, 60, seed=11, threads=4)
    assert one == four


def test_recovery_experiment_reads_thread_env(monkeypatch):
    monkeypatch.setenv("INCOHERENT_THREADS", "zero")
    with pytest.raises(InvalidParameterError):
        recovery_experiment(np.eye(3), 1, 2, seed=0)
    monkeypatch.setenv("INCOHERENT_THREADS", "3")
    assert recovery_experiment(np.eye(3), 1, 5, seed=0)["success_rate"] == 1.0


def test_oracles_agree_on_small_instances():
    # omp and exhaustive l0 agree whenever mu < 1/3 and b is 2-sparse
    rng = np.random.default_rng(77)
    checked = 0
    while checked < 100:
        m, n = int(rng.integers(5, 9)), int(rng.integers(6, 13))
        a, r = construct(ConstructionParams(N=n, s=2, m=m, seed=int(rng.integers(2**32)), budget=200))
        if a is None or coherence(a) >= 1 / 3:
            continue
        x = random_sparse_signal(rng, n, 2)
        b = a.entries @ x.to_dense()
        l0 = brute_force_l0(a, b, 2)
        assert l0.support == x.support
        assert np.allclose(l0.values, x.values, atol=1e-9, rtol=0)
        assert omp(a, b, 2).recovered_support == l0.support
        checked += 1


def test_monte_carlo_cap_small_cap_is_zero():
    est, se = monte_carlo_cap(200, 0.9, 10**5, seed=1)
    assert est == 0.0 and se == 0.0


def test_monte_carlo_cap_dimension_three():
    est, se = monte_carlo_cap(3, 0.5, 10**6, seed=7)
    assert abs(est - 0.5) <= 3 * 0.0005
    assert se == pytest.approx(0.0005, rel=1e-2)


def test_monte_carlo_cap_deterministic_and_validated():
    assert monte_carlo_cap(5, 0.3, 5000, seed=3) == monte_carlo_cap(5, 0.3, 5000, seed=3)
    with pytest.raises(InvalidParameterError):
        monte_carlo_cap(5, 0.3, 999, seed=3)


@pytest.mark.parametrize("m, t", [(2, 0.3), (4, 0.6), (10, 0.2), (30, 0.4), (50, 0.25)])
def test_monte_carlo_matches_exact(m, t):
    # null-hypothesis standard error; four of them gives a per-case false-failure rate near 6e-5
    n = 2 * 10**5
    est, _ = monte_carlo_cap(m, t, n, seed=m)
    p = cap_measure_exact(m, t)
    assert abs(est - p) <= 4 * math.sqrt(p * (1 - p) / n)
