import numpy as np
import pytest

from wverify import fock, witness


def test_w_state_amplitudes():
    w = witness.w_state(4)
    space = w.space
    for mode in range(4):
        assert abs(w.amplitudes[space.single_photon_index(mode)] - 0.5) < 1e-12
    assert abs(w.amplitudes[0]) == 0.0


def test_four_mode_sign_patterns():
    basis = witness.witness_basis(4)
    expected = 0.5 * np.array(
        [
            [1, 1, 1, 1],
            [1, -1, -1, 1],
            [1, 1, -1, -1],
            [1, -1, 1, -1],
        ]
    )
    assert np.allclose(basis.mode_amplitudes, expected)
    assert basis.convention == "hadamard4"


def test_phase_pi_flips_second_ket():
    basis = witness.witness_basis(4, phases=[np.pi, 0.0, 0.0])
    assert abs(basis.mode_amplitudes[0, 1] + 0.5) < 1e-12
    assert abs(basis.mode_amplitudes[0, 0] - 0.5) < 1e-12


def test_orthonormal_and_balanced_across_n_and_phases():
    rng = np.random.default_rng(11)
    for n in range(2, 9):
        for _ in range(5):
            phases = rng.uniform(0, 2 * np.pi, n - 1)
            basis = witness.witness_basis(n, phases=phases)
            U = basis.mode_amplitudes
            assert np.allclose(U @ U.conj().T, np.eye(n), atol=1e-12)
            assert np.allclose(np.abs(U), 1 / np.sqrt(n), atol=1e-12)


def test_single_ket_variance_is_three_quarters():
    space = witness.single_photon_space(4)
    ket = fock.basis_state(space, (1, 0, 0, 0))
    res = witness.variance(ket)
    assert abs(res.delta - 0.75) < 1e-12
    assert np.allclose(res.overlaps, 0.25)


def test_w_state_variance_is_zero():
    res = witness.variance(witness.w_state(4))
    assert res.delta < 1e-14
    assert abs(res.overlaps[0] - 1.0) < 1e-12


def test_maximally_mixed_block_variance():
    res = witness.variance(np.eye(4) / 4)
    assert abs(res.delta - 0.75) < 1e-12


def test_werner_block_oracle():
    # p |w1><w1| + (1-p) I/4 on the block: overlaps ((1+3p)/4, (1-p)/4 x3)
    w1 = witness.witness_basis(4).mode_amplitudes[0]
    for p in np.linspace(0, 1, 7):
        block = p * np.outer(w1, w1.conj()) + (1 - p) * np.eye(4) / 4
        res = witness.variance(block)
        assert abs(res.delta - (0.75 - 0.75 * p * p)) < 1e-12


def test_overlaps_complete_for_random_blocks():
    rng = np.random.default_rng(5)
    for n in (3, 4, 6):
        basis = witness.witness_basis(n)
        for _ in range(20):
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            block = g @ g.conj().T
            block /= np.trace(block).real
            res = witness.variance(block, basis)
            assert abs(res.overlaps.sum() - 1.0) < 1e-10
            assert -1e-12 <= res.delta <= 1 - 1 / n + 1e-12


def test_variance_rejects_leaky_state():
    space = fock.FockSpace(4, per_mode_cutoff=2, total_cutoff=2)
    psi = fock.pure_from_terms(space, {(0, 0, 0, 0): 1.0, (1, 0, 0, 0): 1.0})
    with pytest.raises(ValueError, match="outside the single-excitation"):
        witness.variance(psi)


def test_variance_of_full_state_and_vacuum_error():
    space = fock.FockSpace(4, per_mode_cutoff=2, total_cutoff=2)
    w_full = fock.pure_from_terms(
        space,
        {(1, 0, 0, 0): 0.5, (0, 1, 0, 0): 0.5, (0, 0, 1, 0): 0.5, (0, 0, 0, 1): 0.5},
    )
    rho = fock.mix([(0.9, fock.vacuum_state(space)), (0.1, w_full)])
    prof, res = witness.variance_of_full_state(rho)
    assert abs(prof.q - 0.1) < 1e-12
    assert res.delta < 1e-12
    with pytest.raises(ValueError, match="q = 0"):
        witness.variance_of_full_state(fock.vacuum_state(space))


def test_phase_covariance():
    # shifting mode phases of the state is undone by shifting basis phases
    rng = np.random.default_rng(23)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    block = g @ g.conj().T
    block /= np.trace(block).real
    base = witness.variance(block).delta
    theta = rng.uniform(0, 2 * np.pi, 3)
    d = np.concatenate([[1.0], np.exp(1j * theta)])
    shifted = np.diag(d) @ block @ np.diag(d).conj()
    res = witness.variance(shifted, witness.witness_basis(4, phases=theta))
    assert abs(res.delta - base) < 1e-12


def test_optimize_phases_recovers_construction():
    target = np.array([0.3, 1.1, 2.0])
    w1 = witness.witness_basis(4, phases=target).mode_amplitudes[0]
    block = np.outer(w1, w1.conj())
    opt = witness.optimize_phases(block, seed=1)
    assert opt.delta < 1e-9
    # zeros of the landscape sit at the target up to the sign-pattern shifts
    shifts = np.array(
        [[0, 0, 0], [np.pi, np.pi, 0], [0, np.pi, np.pi], [np.pi, 0, np.pi]]
    )
    diffs = np.abs(np.exp(1j * (opt.phases - target - shifts)) - 1).max(axis=1)
    assert diffs.min() < 1e-4


def test_optimize_phases_flat_for_maximally_mixed():
    opt = witness.optimize_phases(np.eye(4) / 4, seed=2, restarts=6)
    assert abs(opt.delta - 0.75) < 1e-10


def test_variance_with_projectors_matches_orthonormal_case():
    rng = np.random.default_rng(9)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    block = g @ g.conj().T
    block /= np.trace(block).real
    basis = witness.witness_basis(4)
    a = witness.variance(block, basis).delta
    b = witness.variance_with_projectors(block, list(basis.mode_amplitudes)).delta
    assert abs(a - b) < 1e-12
