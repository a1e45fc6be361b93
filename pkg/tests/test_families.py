import numpy as np
import pytest

from wverify import families, fock, witness
from wverify.families import ClassTag


def test_fully_separable_small_epsilon_profile():
    pt = families.fully_separable([0.1, 0.1, 0.1, 0.1])
    p_expected = 1.01**-4
    assert abs(pt.profile.p - p_expected) < 1e-12
    assert abs(pt.profile.q - 4 * 0.01 * p_expected) < 1e-12


def test_fully_separable_unit_epsilon_profile():
    pt = families.fully_separable([1.0, 1.0, 1.0, 1.0])
    assert abs(pt.profile.p - 1 / 16) < 1e-12
    assert abs(pt.profile.q - 1 / 4) < 1e-12
    assert abs(pt.profile.r - 11 / 16) < 1e-12
    # equal amplitudes point straight at the symmetric state
    assert pt.delta < 1e-12


def test_fs_boundary_solo_tilde_branch_is_five_twelfths():
    # eps = 0 leaves mode 1 empty; the one-photon block equals that of
    # |0> x (three-mode symmetric state), so delta = 5/12
    pt = families.boundary_family_fs(0.0, 0.5)
    assert abs(pt.delta - 5 / 12) < 1e-12
    # and the r -> 0 branch (eps_tilde = 0) pins a single ket: delta = 3/4
    pt0 = families.boundary_family_fs(0.7, 0.0)
    assert abs(pt0.delta - 3 / 4) < 1e-12


def test_closed_forms_match_built_states():
    rng = np.random.default_rng(17)
    for tag in families.UNENTANGLED_TAGS:
        for _ in range(10):
            params = 0.5 * (rng.standard_normal(4) + 1j * rng.standard_normal(4))
            structure = int(rng.integers(3)) if tag is ClassTag.BISEP_2X2 else int(rng.integers(4))
            pt = families.family_point(tag, params, structure)
            prof, res = witness.variance_of_full_state(pt.state)
            assert abs(prof.p - pt.profile.p) < 1e-10
            assert abs(prof.q - pt.profile.q) < 1e-10
            assert abs(prof.r - pt.profile.r) < 1e-10
            assert abs(res.delta - pt.delta) < 1e-10


def test_bisep_2x2_closed_form_delta():
    for eps, eps_t in [(0.4, 0.1), (1.0, 0.3), (0.2, 0.2)]:
        pt = families.bisep_2x2(eps, eps_t)
        u, v = eps**2, eps_t**2
        assert abs(pt.delta - (0.5 - 2 * u * v / (u + v) ** 2)) < 1e-12
        p = 1 / ((1 + 2 * u) * (1 + 2 * v))
        assert abs(pt.profile.p - p) < 1e-12
        assert abs(pt.profile.q - 2 * (u + v) * p) < 1e-12
        assert abs(pt.profile.r - 4 * u * v * p) < 1e-12


def test_bisep_1x3_profile_and_zero_point():
    eps, eps_t = 0.3, 0.2
    pt = families.bisep_1x3(eps, eps_t)
    u, v = eps**2, eps_t**2
    p = 1 / ((1 + v) * (1 + 3 * u))
    assert abs(pt.profile.p - p) < 1e-12
    assert abs(pt.profile.q - (v + 3 * u) * p) < 1e-12
    assert abs(pt.profile.r - 3 * u * v * p) < 1e-12
    # equal amplitudes give the symmetric state: delta = 0
    assert families.bisep_1x3(0.25, 0.25).delta < 1e-12


def test_partitions_and_solo_modes_cover_all_arrangements():
    pt = families.bisep_2x2([0.5, 0.0], [0.0, 0.0], partition=1)
    # modes (0, 2) entangled: photon amplitude sits on mode 0
    block = fock.one_photon_block(pt.state)
    assert abs(block[0, 0] - 1.0) < 1e-12
    pt13 = families.bisep_1x3([0.0, 0.0, 0.0], 0.4, solo_mode=2)
    block13 = fock.one_photon_block(pt13.state)
    assert abs(block13[2, 2] - 1.0) < 1e-12


def test_werner_like_curve():
    for p in np.linspace(0.0, 1.0, 11):
        rho = families.werner_like(p)
        res = witness.variance(rho)
        assert abs(res.delta - (0.75 - 0.75 * p * p)) < 1e-12
    diluted = families.werner_like(0.8, q=0.1)
    prof, res = witness.variance_of_full_state(diluted)
    assert abs(prof.q - 0.1) < 1e-12
    assert prof.r == 0.0
    assert abs(res.delta - (0.75 - 0.75 * 0.64)) < 1e-12


def test_random_family_point_hits_target_q():
    rng = np.random.default_rng(31)
    for tag in families.UNENTANGLED_TAGS:
        for q in (0.1, 0.4, 0.9):
            pt = families.random_family_point(tag, q, rng)
            assert abs(pt.profile.q - q) < 1e-9
            assert pt.profile.r >= 0.0
            assert 0.0 <= pt.delta <= 0.75 + 1e-12


def test_random_family_point_rejects_bad_q():
    rng = np.random.default_rng(1)
    with pytest.raises(ValueError):
        families.random_family_point(ClassTag.FULLY_SEPARABLE, 1.5, rng)


def test_random_mixture_profile_and_mixing_bound():
    rng = np.random.default_rng(43)
    for tag in families.UNENTANGLED_TAGS:
        rho, points, weights = families.random_mixture(tag, 0.2, rng)
        assert abs(weights.sum() - 1.0) < 1e-12
        prof, res = witness.variance_of_full_state(rho)
        assert abs(prof.q - 0.2) < 1e-9
        # q delta of the mixture dominates the weighted component sum
        bound = sum(
            w * pt.profile.q * pt.delta for w, pt in zip(weights[1:], points)
        )
        assert prof.q * res.delta >= bound - 1e-10


def test_family_point_snapshot_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    pt = families.random_family_point(ClassTag.BISEP_1X3, 0.3, rng)
    path = tmp_path / "point.json"
    families.save_family_point(pt, path)
    loaded = families.load_family_point(path)
    assert loaded.tag == pt.tag
    assert loaded.structure == pt.structure
    assert np.allclose(loaded.parameters, pt.parameters)
    assert abs(loaded.delta - pt.delta) < 1e-12
    assert abs(loaded.profile.q - pt.profile.q) < 1e-12
