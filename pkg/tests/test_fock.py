import json

import numpy as np
import pytest

from wverify import fock


def test_basis_size_and_order_four_modes():
    space = fock.FockSpace(4, per_mode_cutoff=2, total_cutoff=2)
    # 1 vacuum + 4 single + (6 pairs + 4 doubles) = 15
    assert space.dim == 15
    assert space.basis[0] == (0, 0, 0, 0)
    # single-excitation sector ordered by the mode carrying the photon
    assert space.basis[1:5] == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert all(sum(occ) == 2 for occ in space.basis[5:])
    for mode in range(4):
        assert space.single_photon_index(mode) == 1 + mode


def test_basis_respects_per_mode_cutoff():
    space = fock.FockSpace(4, per_mode_cutoff=1, total_cutoff=4)
    assert space.dim == 16
    assert all(max(occ) <= 1 for occ in space.basis)


def test_make_pure_normalizes():
    space = fock.FockSpace(1, per_mode_cutoff=2, total_cutoff=2)
    psi = fock.make_pure(space, [3.0, 4.0j, 0.0])
    assert abs(psi.norm - 1.0) < 1e-12
    assert abs(psi.amplitudes[0] - 0.6) < 1e-12
    assert abs(psi.amplitudes[1] - 0.8j) < 1e-12
    with pytest.raises(ValueError):
        fock.make_pure(space, [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        fock.make_pure(space, [1.0, 0.0])


def test_tensor_of_four_balanced_superpositions():
    one = fock.FockSpace(1, per_mode_cutoff=1, total_cutoff=1)
    plus = fock.make_pure(one, [1.0, 1.0])
    prod = fock.tensor_all([plus, plus, plus, plus])
    assert prod.space.mode_count == 4
    assert prod.space.dim == 16
    assert np.allclose(prod.amplitudes, 0.25)


def test_tensor_truncation_guard():
    one = fock.FockSpace(1, per_mode_cutoff=1, total_cutoff=1)
    plus = fock.make_pure(one, [1.0, 1.0])
    with pytest.raises(ValueError, match="loses weight"):
        fock.tensor(fock.tensor(plus, plus), fock.tensor(plus, plus), total_cutoff=2)
    # negligible weight above the cap passes and renormalizes
    eps = fock.make_pure(one, [1.0, 1e-8])
    out = fock.tensor(fock.tensor(eps, eps), fock.tensor(eps, eps), total_cutoff=2)
    assert abs(out.norm - 1.0) < 1e-12


def test_profile_of_equal_weight_product():
    one = fock.FockSpace(1, per_mode_cutoff=1, total_cutoff=1)
    plus = fock.make_pure(one, [1.0, 1.0])
    prod = fock.tensor_all([plus] * 4)
    prof = fock.excitation_profile(prod)
    assert abs(prof.p - 1 / 16) < 1e-12
    assert abs(prof.q - 4 / 16) < 1e-12
    assert abs(prof.r - 11 / 16) < 1e-12
    # the one-photon block is the symmetric single-photon state
    block = fock.one_photon_block(prod)
    assert np.allclose(block, 0.25)


def test_profile_drops_cross_sector_coherence():
    space = fock.FockSpace(4, per_mode_cutoff=2, total_cutoff=2)
    psi = fock.pure_from_terms(space, {(0, 0, 0, 0): 1.0, (1, 0, 0, 0): 1.0})
    prof = fock.excitation_profile(psi)
    assert abs(prof.p - 0.5) < 1e-12
    assert abs(prof.q - 0.5) < 1e-12
    assert prof.r == 0.0
    mat = prof.rho_one.matrix
    assert abs(mat[1, 1] - 1.0) < 1e-12
    # nothing outside the single-excitation sector
    assert abs(np.trace(mat).real - 1.0) < 1e-12
    assert np.abs(mat[0, :]).max() == 0.0


def test_profile_vacuum_has_no_block():
    space = fock.FockSpace(4, per_mode_cutoff=2, total_cutoff=2)
    prof = fock.excitation_profile(fock.vacuum_state(space))
    assert prof.p == 1.0 and prof.q == 0.0
    assert prof.rho_one is None
    with pytest.raises(ValueError, match="single-excitation"):
        fock.one_photon_block(fock.vacuum_state(space))


def test_mix_validates_weights_and_space():
    space = fock.FockSpace(2, per_mode_cutoff=1, total_cutoff=1)
    a = fock.basis_state(space, (1, 0))
    b = fock.basis_state(space, (0, 1))
    rho = fock.mix([(0.25, a), (0.75, b)])
    assert abs(rho.matrix[1, 1].real - 0.25) < 1e-12
    assert abs(rho.matrix[2, 2].real - 0.75) < 1e-12
    with pytest.raises(ValueError, match="sum to"):
        fock.mix([(0.5, a), (0.2, b)])
    other = fock.FockSpace(2, per_mode_cutoff=2, total_cutoff=2)
    with pytest.raises(ValueError, match="different"):
        fock.mix([(0.5, a), (0.5, fock.vacuum_state(other))])


def test_density_matrix_validation():
    space = fock.FockSpace(1, per_mode_cutoff=1, total_cutoff=1)
    with pytest.raises(ValueError, match="Hermitian"):
        fock.DensityMatrix(space, np.array([[0.5, 0.1], [0.3, 0.5]], dtype=complex))
    with pytest.raises(ValueError, match="trace"):
        fock.DensityMatrix(space, np.eye(2, dtype=complex))
    with pytest.raises(ValueError, match="eigenvalue"):
        fock.DensityMatrix(space, np.array([[1.2, 0], [0, -0.2]], dtype=complex))


def test_snapshot_round_trip_pure(tmp_path):
    space = fock.FockSpace(4, per_mode_cutoff=2, total_cutoff=2)
    rng = np.random.default_rng(7)
    psi = fock.make_pure(space, rng.standard_normal(15) + 1j * rng.standard_normal(15))
    path = tmp_path / "state.json"
    fock.save_state(psi, path)
    loaded = fock.load_state(path)
    assert isinstance(loaded, fock.PureState)
    assert np.array_equal(loaded.amplitudes, psi.amplitudes)  # bit-for-bit
    # and a second save is byte-identical
    path2 = tmp_path / "state2.json"
    fock.save_state(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_snapshot_round_trip_density(tmp_path):
    space = fock.FockSpace(2, per_mode_cutoff=1, total_cutoff=2)
    rng = np.random.default_rng(3)
    a = fock.make_pure(space, rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim))
    b = fock.make_pure(space, rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim))
    rho = fock.mix([(0.3, a), (0.7, b)])
    path = tmp_path / "rho.json"
    fock.save_state(rho, path, extra={"family": {"tag": "demo"}})
    doc = fock.read_snapshot(path)
    assert doc["family"] == {"tag": "demo"}
    loaded = fock.load_state(path)
    assert np.array_equal(loaded.matrix, rho.matrix)


def test_snapshot_rejects_foreign_format(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"format": "something-else"}))
    with pytest.raises(ValueError, match="snapshot"):
        fock.load_state(path)
