"""Unit tests for the exchange-coupling dynamics core."""

import numpy as np
import pytest

from entmap.measure import PrepSpec, prepare_input
from entmap.qcore import (
    INPUT_IDS,
    PSI1,
    PSI2,
    PSI3,
    PSI4,
    HamiltonianParams,
    PureState,
    TwoQubitUnitary,
    analytic_concurrence_sq,
    bell_spectrum,
    concurrence_sq_exact,
    evolve,
    imperfect_prep_concurrence_sq,
    input_combination,
    negativity_sq,
    oracle_evolve,
    propagator,
    series_propagator,
    state_vector,
)

H_REF = HamiltonianParams(1.2, 0.6, 1.4)


def random_hamiltonian(rng, scale=2.0):
    c1, c2, c3 = rng.uniform(-scale, scale, size=3)
    return HamiltonianParams(float(c1), float(c2), float(c3))


def random_state(rng):
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    return PureState.normalized(amps)


def test_bell_spectrum_reference_values():
    spec = bell_spectrum(H_REF)
    np.testing.assert_allclose(spec.as_array(), [2.0, 0.8, 0.4, -3.2], atol=1e-14)


def test_bell_spectrum_is_traceless():
    rng = np.random.default_rng(3)
    for _ in range(25):
        h = random_hamiltonian(rng)
        assert abs(bell_spectrum(h).as_array().sum()) < 1e-12


def test_hamiltonian_matrix_matches_spectrum():
    """The dense matrix and the Bell eigenvalues describe the same operator."""
    rng = np.random.default_rng(4)
    for _ in range(10):
        h = random_hamiltonian(rng)
        eigs = np.sort(np.linalg.eigvalsh(h.matrix()))
        np.testing.assert_allclose(eigs, np.sort(bell_spectrum(h).as_array()), atol=1e-12)


def test_hamiltonian_params_rejects_non_finite():
    with pytest.raises(ValueError):
        HamiltonianParams(np.nan, 0.0, 0.0)
    with pytest.raises(ValueError):
        HamiltonianParams(0.0, np.inf, 0.0)


def test_pure_state_requires_normalization():
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        PureState.normalized(np.zeros(4))


def test_computational_labels():
    np.testing.assert_array_equal(
        state_vector(PureState.computational("10")), [0.0, 0.0, 1.0, 0.0]
    )
    with pytest.raises(ValueError):
        PureState.computational("2")


def test_unitary_construction_rejects_non_unitary():
    with pytest.raises(ValueError):
        TwoQubitUnitary(np.eye(4) * 1.5)


def test_propagator_identity_at_t0():
    u = propagator(H_REF, 0.0)
    np.testing.assert_allclose(u.matrix, np.eye(4), atol=1e-14)


def test_propagator_is_unitary_and_composes():
    rng = np.random.default_rng(5)
    for _ in range(10):
        h = random_hamiltonian(rng)
        t1, t2 = rng.uniform(-5, 5, size=2)
        u12 = propagator(h, float(t1 + t2)).matrix
        u1u2 = propagator(h, float(t1)).matrix @ propagator(h, float(t2)).matrix
        np.testing.assert_allclose(u12, u1u2, atol=1e-12)


def test_evolve_psi1_closed_form():
    """|00> mixes only with |11>, at the rate set by c1 - c2."""
    w = 1.2 - 0.6
    for t in np.linspace(-4.0, 4.0, 17):
        got = state_vector(evolve(H_REF, PureState.computational("00"), float(t)))
        phase = np.exp(-1j * 1.4 * t)
        want = phase * np.array([np.cos(w * t), 0.0, 0.0, -1j * np.sin(w * t)])
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_series_propagator_identity_at_t0():
    np.testing.assert_allclose(series_propagator(H_REF, 0.0), np.eye(4), atol=1e-15)


def test_series_propagator_stays_unitary_at_long_times():
    rng = np.random.default_rng(6)
    for _ in range(10):
        h = random_hamiltonian(rng, scale=5.0)
        t = float(rng.uniform(-80, 80))
        u = series_propagator(h, t)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-10)


def test_evolve_matches_series_oracle():
    """Bell-basis evolution against the power-series propagator."""
    rng = np.random.default_rng(7)
    for _ in range(30):
        h = random_hamiltonian(rng)
        psi0 = random_state(rng)
        t = float(rng.uniform(-50, 50))
        fast = state_vector(evolve(h, psi0, t))
        slow = state_vector(oracle_evolve(h, psi0, t))
        np.testing.assert_allclose(fast, slow, atol=1e-9)


def test_concurrence_product_states_zero():
    assert concurrence_sq_exact(PureState.computational("00")) == 0.0
    assert concurrence_sq_exact(PureState.computational("01")) == 0.0
    plus_plus = PureState.normalized([1.0, 1.0, 1.0, 1.0])
    assert concurrence_sq_exact(plus_plus) < 1e-15


def test_concurrence_bell_state_is_one():
    bell = PureState.normalized([0.0, 1.0, 1.0, 0.0])
    assert concurrence_sq_exact(bell) == pytest.approx(1.0, abs=1e-12)


def test_concurrence_range_and_phase_invariance():
    rng = np.random.default_rng(8)
    for _ in range(50):
        psi = random_state(rng)
        c2 = concurrence_sq_exact(psi)
        assert 0.0 <= c2 <= 1.0
        rotated = PureState(np.exp(1j * rng.uniform(0, 2 * np.pi)) * psi.amplitudes)
        assert concurrence_sq_exact(rotated) == pytest.approx(c2, abs=1e-12)


def test_negativity_relation_for_pure_states():
    """For two-qubit pure states, 4 * negativity^2 equals the squared concurrence."""
    rng = np.random.default_rng(9)
    for _ in range(25):
        psi = random_state(rng)
        np.testing.assert_allclose(
            4.0 * negativity_sq(psi), concurrence_sq_exact(psi), atol=1e-10
        )


def test_input_combination_reference_values():
    assert input_combination(PSI1, H_REF) == pytest.approx(0.6)
    assert input_combination(PSI2, H_REF) == pytest.approx(1.8)
    assert input_combination(PSI3, H_REF) == pytest.approx(-0.8)
    assert input_combination(PSI4, H_REF) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        input_combination("psi5", H_REF)


def test_analytic_concurrence_psi2_rate():
    t = np.linspace(0.0, 5.0, 101)
    np.testing.assert_allclose(
        analytic_concurrence_sq(PSI2, H_REF, t), np.sin(3.6 * t) ** 2, atol=1e-14
    )


def test_analytic_matches_exact_dynamics():
    """Evolved-state concurrence agrees with the closed form for every input."""
    rng = np.random.default_rng(10)
    for _ in range(20):
        h = random_hamiltonian(rng)
        for input_id in INPUT_IDS:
            for t in rng.uniform(0.0, 8.0, size=5):
                psi0 = _ideal_input(input_id)
                got = concurrence_sq_exact(evolve(h, psi0, float(t)))
                want = analytic_concurrence_sq(input_id, h, float(t))
                assert got == pytest.approx(want, abs=1e-10)


def _ideal_input(input_id):
    table = {
        PSI1: [1.0, 0.0, 0.0, 0.0],
        PSI2: [0.0, 1.0, 0.0, 0.0],
        PSI3: [0.5, 0.5, 0.5, 0.5],
        PSI4: [0.5, -0.5, 0.5, -0.5],
    }
    return PureState(np.array(table[input_id], dtype=complex))


def test_imperfect_prep_reduces_to_ideal_at_eta_zero():
    t = np.linspace(0.1, 6.0, 50)
    np.testing.assert_array_equal(
        imperfect_prep_concurrence_sq(H_REF, 0.0, t),
        analytic_concurrence_sq(PSI1, H_REF, t),
    )


def test_imperfect_prep_first_order_error_scales_as_eta_sq():
    """The truncation error of the first-order curve shrinks quadratically."""
    rng = np.random.default_rng(11)
    t = np.linspace(0.05, 20.0, 400)
    for _ in range(5):
        h = random_hamiltonian(rng)
        worst = {}
        for eta in (0.02, 0.04):
            psi0 = prepare_input(PrepSpec(PSI1, eta))
            exact = np.array(
                [concurrence_sq_exact(evolve(h, psi0, float(tt))) for tt in t]
            )
            curve = imperfect_prep_concurrence_sq(h, eta, t)
            worst[eta] = float(np.abs(exact - curve).max())
        # doubling eta should roughly quadruple the truncation error
        assert worst[0.04] <= 6.0 * worst[0.02] + 1e-12
        assert worst[0.02] < 10.0 * 0.02**2


def test_imperfect_prep_rejects_bad_eta():
    with pytest.raises(ValueError):
        imperfect_prep_concurrence_sq(H_REF, -0.01, 1.0)
    with pytest.raises(ValueError):
        imperfect_prep_concurrence_sq(H_REF, 1.0, 1.0)


def test_evolve_rejects_non_finite_time():
    with pytest.raises(ValueError):
        evolve(H_REF, PureState.computational("00"), np.nan)
