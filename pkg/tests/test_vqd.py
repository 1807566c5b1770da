import numpy as np
import pytest

from bcsvqd.bcs import BcsParams, build_qubit_hamiltonian
from bcsvqd.circuit import bind_parameters, build_hardware_efficient_ansatz
from bcsvqd.optimizers import CobylaConfig, SpsaConfig
from bcsvqd.pauli import PauliSum, beta_bound, eigh
from bcsvqd.simulator import expectation_exact, run_statevector
from bcsvqd.vqd import (
    DeflationError,
    DeflationState,
    estimate_gap,
    gap_run,
    solve_spectrum,
    summarize,
    vqd_cost,
    vqe_cost,
)

HQ = build_qubit_hamiltonian(BcsParams((3.0, 3.0), 1.0))
ANSATZ1 = build_hardware_efficient_ansatz(2, 1)
ANSATZ3 = build_hardware_efficient_ansatz(2, 3)
GROUND_PARAMS = np.array([np.pi, 0, 0, 0])
EXCITED_PARAMS = np.array([-np.pi / 2, 0, np.pi, 0])


def test_vqe_trivial():
    z = PauliSum([(1.0, "Z")])
    assert vqe_cost(np.zeros(2), z, build_hardware_efficient_ansatz(1, 1), shots=0) == 1.0


def test_hand_built_states_are_eigenstates():
    vals, vecs = eigh(HQ)
    for params, k in ((GROUND_PARAMS, 0), (EXCITED_PARAMS, 1)):
        psi = run_statevector(bind_parameters(ANSATZ1, params)).amplitudes
        assert abs(np.vdot(vecs[:, k], psi)) ** 2 == pytest.approx(1.0, abs=1e-12)
        assert vqe_cost(params, HQ, ANSATZ1, shots=0) == pytest.approx(vals[k], abs=1e-12)


def test_vqe_variational_bound_under_sampling():
    rng = np.random.default_rng(0)
    for _ in range(20):
        theta = rng.uniform(0, 2 * np.pi, 12)
        assert vqe_cost(theta, HQ, ANSATZ3, shots=10_000, rng=rng) >= -3 - 3 * 0.05


def test_vqe_minimum_reaches_ground_energy():
    best = min(
        solve_spectrum(HQ, ANSATZ3, CobylaConfig(), k_states=1, shots=0, rng_seed=s).energies[0]
        for s in range(5)
    )
    assert best == pytest.approx(-3.0, abs=0.02)
    assert best >= -3.0 - 1e-12


def test_vqd_empty_deflation_is_vqe():
    theta = np.random.default_rng(1).uniform(0, 6, 12)
    assert vqd_cost(theta, HQ, ANSATZ3, DeflationState(), shots=0) == vqe_cost(theta, HQ, ANSATZ3, shots=0)
    assert vqd_cost(theta, HQ, ANSATZ3, DeflationState(), shots=500, rng=4) == vqe_cost(
        theta, HQ, ANSATZ3, shots=500, rng=4
    )


@pytest.mark.parametrize("method", ["swap", "dswap", "transition"])
def test_vqd_self_and_orthogonal_overlap(method):
    beta = beta_bound(HQ)
    state = DeflationState()
    state.add(GROUND_PARAMS, -3.0, beta)
    assert vqd_cost(GROUND_PARAMS, HQ, ANSATZ1, state, method, shots=0) == pytest.approx(-3.0 + beta, abs=1e-9)
    assert vqd_cost(EXCITED_PARAMS, HQ, ANSATZ1, state, method, shots=0) == pytest.approx(-1.0, abs=1e-9)


def test_penalty_nonnegative():
    rng = np.random.default_rng(2)
    state = DeflationState()
    state.add(rng.uniform(0, 6, 12), 0.0, beta_bound(HQ))
    for s in range(20):
        theta = rng.uniform(0, 6, 12)
        assert vqd_cost(theta, HQ, ANSATZ3, state, shots=200, rng=s) >= vqe_cost(theta, HQ, ANSATZ3, shots=200, rng=s)


def test_deflation_state_rejects_bad_beta():
    with pytest.raises(ValueError):
        DeflationState().add(np.zeros(2), 0.0, 0.0)


def test_solve_spectrum_two_level():
    z = PauliSum([(1.0, "Z")])
    res = solve_spectrum(z, build_hardware_efficient_ansatz(1, 1), k_states=2, shots=0, rng_seed=0)
    assert np.allclose(res.sorted_energies(), [-1.0, 1.0], atol=1e-3)
    with pytest.raises(ValueError):
        solve_spectrum(z, build_hardware_efficient_ansatz(1, 1), k_states=3)


def test_solve_spectrum_success_rate():
    hits = 0
    for s in range(50):
        res = solve_spectrum(HQ, ANSATZ3, CobylaConfig(), k_states=3, shots=0, rng_seed=s)
        hits += np.allclose(res.sorted_energies(), [-3, -1, 1], atol=0.05)
    assert hits >= 40


def test_solve_spectrum_reports_penalty_free_energies():
    res = solve_spectrum(HQ, ANSATZ3, k_states=2, shots=0, rng_seed=7)
    for energy, params in zip(res.energies, res.params):
        psi = run_statevector(bind_parameters(ANSATZ3, params))
        assert energy == pytest.approx(expectation_exact(psi, HQ), abs=1e-12)
    assert len(res.energies) == len(res.params) == len(res.evaluations) == 2


def test_solve_spectrum_seed_determinism():
    cfg = dict(optimizer=SpsaConfig(max_iter=30), k_states=2, shots=500)
    a = solve_spectrum(HQ, ANSATZ1, rng_seed=3, **cfg)
    b = solve_spectrum(HQ, ANSATZ1, rng_seed=3, **cfg)
    c = solve_spectrum(HQ, ANSATZ1, rng_seed=4, **cfg)
    assert a.energies == b.energies and all(np.array_equal(x, y) for x, y in zip(a.params, b.params))
    assert a.energies != c.energies


def test_solve_spectrum_partial_results_on_failure(monkeypatch):
    import bcsvqd.vqd as vqd_module

    original = vqd_module.expectation_sampled
    calls = {"n": 0}

    def flaky(*args, **kwargs):
        calls["n"] += 1
        return np.nan if calls["n"] > 60 else original(*args, **kwargs)

    monkeypatch.setattr(vqd_module, "expectation_sampled", flaky)
    with pytest.raises(DeflationError) as err:
        solve_spectrum(HQ, ANSATZ1, CobylaConfig(max_iter=20), k_states=3, shots=0)
    assert len(err.value.partial.energies) >= 1


def test_gap_run_sorts_and_offsets():
    rec = gap_run(HQ, 1, run=2, seed=10, offset=5.0, ansatz=ANSATZ3, shots=0)
    assert rec.seed == 12 and rec.run == 2
    assert len(rec.energies) == 3
    s = np.sort(rec.energies)
    assert rec.gap == pytest.approx(s[2] - s[1])
    assert min(rec.energies) >= 5.0 - 3.0 - 1e-9


def test_estimate_gap_statistics():
    est = estimate_gap(HQ, 1, runs=4, seed=0, ansatz=ANSATZ3, shots=0)
    assert est.mean == pytest.approx(est.gaps.mean())
    assert est.std == pytest.approx(est.gaps.std(ddof=1))
    assert [r.seed for r in est.records] == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        estimate_gap(HQ, 1, runs=1, ansatz=ANSATZ3)
    with pytest.raises(RuntimeError):
        summarize(est.records[:1])


def test_degenerate_gap_at_zero_coupling():
    H0 = build_qubit_hamiltonian(BcsParams((3.0, 3.0), 0.0))
    est = estimate_gap(H0, 1, runs=6, seed=0, ansatz=ANSATZ3, shots=10_000)
    assert abs(est.mean) <= max(est.std, 0.05)
