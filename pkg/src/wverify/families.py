"""Generators for the separability classes of four-mode single-photon states.

Three unentangled (or partially entangled) classes are modeled:

  * fully separable: a product over all four modes,
  * bisep 2x2: a product of two-mode factors, each factor arbitrary,
  * bisep 1x3: one mode in a product with an arbitrary state of the rest.

Each class has a two-parameter boundary family, which realizes its extremal
variance at fixed sector weights (q, r):

  fully separable   (|0> + eps|1>) (|0> + eps_t|1>)^x3
  bisep 2x2         (|00> + eps(|10> + |01>)) x (|00> + eps_t(|10> + |01>))
  bisep 1x3         (|0> + eps_t|1>) x (|000> + eps(|100> + |010> + |001>))

All generators keep at most one photon per mode; adding doubly excited
per-mode components only moves weight into the multi-photon sector without
changing the one-photon block, so it never lowers a class boundary.

Scaling every parameter by a common factor leaves the one-photon direction
(and hence the variance) unchanged while sweeping the sector weights; random
sampling uses that to hit a target q by one-dimensional root-finding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from . import fock, witness
from .fock import DensityMatrix, ExcitationProfile, FockSpace, PureState

MODES = 4

Q_MATCH_TOL = 1e-9

# partitions of four modes into two pairs, and solo-mode choices
PARTITIONS_2X2: Tuple[Tuple[Tuple[int, int], Tuple[int, int]], ...] = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


class ClassTag(enum.Enum):
    """Separability classes, weakest entanglement first."""

    FULLY_SEPARABLE = "fully_separable"
    BISEP_2X2 = "bisep_2x2"
    BISEP_1X3 = "bisep_1x3"
    FOUR_MODE_ENTANGLED = "four_mode_entangled"


# short names accepted on the command line and used in CSV output
TAG_BY_TOKEN = {
    "fs": ClassTag.FULLY_SEPARABLE,
    "bisep22": ClassTag.BISEP_2X2,
    "bisep13": ClassTag.BISEP_1X3,
}
TOKEN_BY_TAG = {tag: token for token, tag in TAG_BY_TOKEN.items()}

UNENTANGLED_TAGS = (ClassTag.FULLY_SEPARABLE, ClassTag.BISEP_2X2, ClassTag.BISEP_1X3)


def family_space() -> FockSpace:
    """Common space for four-mode family states (exact products)."""
    return FockSpace(MODES, per_mode_cutoff=1, total_cutoff=MODES)


# =========================================================================
# Family point
# =========================================================================

@dataclass
class FamilyPoint:
    """A pure state of one class with its sector weights and variance.

    parameters holds the raw family knobs (complex), structure the partition
    or solo-mode choice where one applies.  The state vector is built lazily;
    profile and delta come from closed forms on the parameters.
    """

    tag: ClassTag
    parameters: np.ndarray
    structure: Optional[int]
    profile: ExcitationProfile
    delta: float
    _state: Optional[PureState] = field(default=None, repr=False)

    @property
    def state(self) -> PureState:
        if self._state is None:
            self._state = build_state(self.tag, self.parameters, self.structure)
            _check_profile(self._state, self.profile)
        return self._state


def _check_profile(state: PureState, prof: ExcitationProfile) -> None:
    built = fock.excitation_profile(state)
    if abs(built.q - prof.q) > 1e-9 or abs(built.r - prof.r) > 1e-9:
        raise AssertionError("built state disagrees with closed-form profile")


# =========================================================================
# Closed forms: one-photon direction and sector weights
# =========================================================================

def _one_photon_direction(tag: ClassTag, params: np.ndarray, structure: Optional[int]) -> np.ndarray:
    """Unnormalized one-photon amplitudes by mode."""
    alpha = np.zeros(MODES, dtype=complex)
    if tag is ClassTag.FULLY_SEPARABLE:
        alpha[:] = params
    elif tag is ClassTag.BISEP_2X2:
        (i, j), (k, l) = PARTITIONS_2X2[structure]
        alpha[i], alpha[j] = params[0], params[1]
        alpha[k], alpha[l] = params[2], params[3]
    elif tag is ClassTag.BISEP_1X3:
        solo = structure
        rest = [m for m in range(MODES) if m != solo]
        alpha[solo] = params[0]
        for m, a in zip(rest, params[1:]):
            alpha[m] = a
    else:
        raise ValueError(f"no generator for {tag}")
    return alpha


def _factor_weights(tag: ClassTag, params: np.ndarray) -> np.ndarray:
    """Summed |parameter|^2 per product factor."""
    t = np.abs(np.asarray(params)) ** 2
    if tag is ClassTag.FULLY_SEPARABLE:
        return t
    if tag is ClassTag.BISEP_2X2:
        return np.array([t[0] + t[1], t[2] + t[3]])
    if tag is ClassTag.BISEP_1X3:
        return np.array([t[0], t[1] + t[2] + t[3]])
    raise ValueError(f"no generator for {tag}")


def _profile_from_weights(weights: np.ndarray) -> ExcitationProfile:
    p = float(1.0 / np.prod(1.0 + weights))
    q = float(p * weights.sum())
    r = max(1.0 - p - q, 0.0)
    return ExcitationProfile(p=p, q=q, r=r, rho_one=None)


def family_point(
    tag: ClassTag, parameters: Sequence[complex], structure: Optional[int] = None
) -> FamilyPoint:
    """Assemble a FamilyPoint from raw class parameters."""
    params = np.asarray(parameters, dtype=complex)
    expected = MODES
    if params.shape != (expected,):
        raise ValueError(f"{tag.value} takes {expected} parameters")
    if tag is ClassTag.BISEP_2X2:
        structure = 0 if structure is None else structure
        if not 0 <= structure < len(PARTITIONS_2X2):
            raise ValueError("partition index out of range")
    elif tag is ClassTag.BISEP_1X3:
        structure = 0 if structure is None else structure
        if not 0 <= structure < MODES:
            raise ValueError("solo mode out of range")
    else:
        structure = None
    prof = _profile_from_weights(_factor_weights(tag, params))
    alpha = _one_photon_direction(tag, params, structure)
    norm = np.linalg.norm(alpha)
    if norm > 0:
        ahat = alpha / norm
        delta = witness.variance(np.outer(ahat, ahat.conj())).delta
    else:
        delta = float("nan")
    return FamilyPoint(tag=tag, parameters=params, structure=structure, profile=prof, delta=delta)


# =========================================================================
# State construction
# =========================================================================

def _mode_factor(eps: complex) -> PureState:
    space = FockSpace(1, per_mode_cutoff=1, total_cutoff=1)
    return fock.make_pure(space, [1.0, eps])


def build_state(tag: ClassTag, params: np.ndarray, structure: Optional[int]) -> PureState:
    """Exact product state for the given class parameters."""
    if tag is ClassTag.FULLY_SEPARABLE:
        psi = fock.tensor_all([_mode_factor(e) for e in params])
    elif tag is ClassTag.BISEP_2X2:
        pair_space = FockSpace(2, per_mode_cutoff=1, total_cutoff=1)
        fa = fock.pure_from_terms(pair_space, {(0, 0): 1.0, (1, 0): params[0], (0, 1): params[1]})
        fb = fock.pure_from_terms(pair_space, {(0, 0): 1.0, (1, 0): params[2], (0, 1): params[3]})
        psi = fock.tensor(fa, fb)
        psi = _permute_to(psi, _partition_order(structure))
    elif tag is ClassTag.BISEP_1X3:
        solo = structure
        triple_space = FockSpace(3, per_mode_cutoff=1, total_cutoff=1)
        ft = fock.pure_from_terms(
            triple_space,
            {(0, 0, 0): 1.0, (1, 0, 0): params[1], (0, 1, 0): params[2], (0, 0, 1): params[3]},
        )
        psi = fock.tensor(_mode_factor(params[0]), ft)
        order = [solo] + [m for m in range(MODES) if m != solo]
        psi = _permute_to(psi, order)
    else:
        raise ValueError(f"no generator for {tag}")
    return fock.embed_state(psi, family_space())


def _partition_order(structure: int) -> List[int]:
    (i, j), (k, l) = PARTITIONS_2X2[structure]
    return [i, j, k, l]


def _permute_to(state: PureState, target_modes: Sequence[int]) -> PureState:
    """Reorder tensor factors: factor f of `state` becomes mode target_modes[f]."""
    space = state.space
    out = np.zeros(space.dim, dtype=complex)
    for i, occ in enumerate(space.basis):
        if state.amplitudes[i] == 0:
            continue
        new_occ = [0] * space.mode_count
        for f, n in enumerate(occ):
            new_occ[target_modes[f]] = n
        out[space.index_of(tuple(new_occ))] = state.amplitudes[i]
    return PureState(space, out)


# =========================================================================
# Named generators
# =========================================================================

def fully_separable(epsilons: Sequence[complex]) -> FamilyPoint:
    """Product state prod_i (|0> + eps_i |1>), one factor per mode."""
    return family_point(ClassTag.FULLY_SEPARABLE, epsilons)


def boundary_family_fs(eps: complex, eps_tilde: complex) -> FamilyPoint:
    """(|0> + eps|1>) on mode 1, (|0> + eps_t|1>) on each of modes 2..4."""
    return family_point(ClassTag.FULLY_SEPARABLE, [eps, eps_tilde, eps_tilde, eps_tilde])


def bisep_2x2(
    eps: Union[complex, Sequence[complex]],
    eps_tilde: Union[complex, Sequence[complex]],
    partition: int = 0,
) -> FamilyPoint:
    """Product of two-mode factors (|00> + e1|10> + e2|01>).

    Scalars reproduce the boundary family (equal amplitudes inside each
    factor); sequences of two give the general factor.
    """
    pa = [eps, eps] if np.isscalar(eps) else list(eps)
    pb = [eps_tilde, eps_tilde] if np.isscalar(eps_tilde) else list(eps_tilde)
    if len(pa) != 2 or len(pb) != 2:
        raise ValueError("each two-mode factor takes two amplitudes")
    return family_point(ClassTag.BISEP_2X2, pa + pb, structure=partition)


def bisep_1x3(
    eps: Union[complex, Sequence[complex]],
    eps_tilde: complex,
    solo_mode: int = 0,
) -> FamilyPoint:
    """(|0> + eps_t|1>) on the solo mode, single-photon amplitudes eps on the rest."""
    pe = [eps, eps, eps] if np.isscalar(eps) else list(eps)
    if len(pe) != 3:
        raise ValueError("the three-mode factor takes three amplitudes")
    return family_point(ClassTag.BISEP_1X3, [eps_tilde] + pe, structure=solo_mode)


def werner_like(p: float, q: float = 1.0) -> DensityMatrix:
    """Mix of the symmetric single-photon state with the maximally mixed block.

    p |w><w| + (1-p) * (mixed one-photon block), optionally diluted with
    vacuum so the one-photon weight becomes q.  The variance of the block is
    3/4 - 3 p^2 / 4.
    """
    if not 0.0 <= p <= 1.0 or not 0.0 < q <= 1.0:
        raise ValueError("p must be in [0, 1] and q in (0, 1]")
    space = witness.single_photon_space(MODES)
    w = witness.w_state(MODES)
    parts: List[Tuple[float, fock.StateLike]] = [(q * p, w)]
    for mode in range(MODES):
        ket = fock.basis_state(space, tuple(1 if m == mode else 0 for m in range(MODES)))
        parts.append((q * (1.0 - p) / MODES, ket))
    if q < 1.0:
        parts.append((1.0 - q, fock.vacuum_state(space)))
    return fock.mix(parts)


# =========================================================================
# Random sampling
# =========================================================================

RADIUS_RANGE = (1e-3, 1e1)


def _random_parameters(rng: np.random.Generator) -> np.ndarray:
    lo, hi = np.log(RADIUS_RANGE[0]), np.log(RADIUS_RANGE[1])
    radii = np.exp(rng.uniform(lo, hi, MODES))
    phases = rng.uniform(0.0, 2 * np.pi, MODES)
    return radii * np.exp(1j * phases)


def _q_of_log_scale(weights: np.ndarray, log_x: float) -> float:
    x = np.exp(log_x)
    return float(x * weights.sum() / np.prod(1.0 + x * weights))


def _solve_scale(weights: np.ndarray, q_target: float, rng: np.random.Generator) -> Optional[float]:
    """Scale factor s with q(s^2 * weights) = q_target, or None if unattainable.

    q as a function of the common scale rises from 0 to a single peak and
    falls back (or saturates monotonically when only one factor is active).
    When both sides of the peak cross the target, one of the two roots is
    picked at random so samples populate both the low-r and high-r branch.
    """
    w = weights[weights > 0]
    if w.size == 0:
        return None
    lo, hi = -46.0, 46.0  # log-space brackets, e^46 ~ 1e20

    def slope_sign(log_x):
        u = np.exp(log_x) * w
        return 1.0 - np.sum(u / (1.0 + u))

    roots = []
    if slope_sign(hi) > 0.0:
        # monotone: saturates at q -> 1 for a single active factor
        if _q_of_log_scale(weights, hi) >= q_target:
            roots.append(optimize.brentq(
                lambda lx: _q_of_log_scale(weights, lx) - q_target, lo, hi, xtol=1e-14))
    else:
        peak = optimize.brentq(slope_sign, lo, hi, xtol=1e-12)
        if _q_of_log_scale(weights, peak) < q_target:
            return None
        roots.append(optimize.brentq(
            lambda lx: _q_of_log_scale(weights, lx) - q_target, lo, peak, xtol=1e-14))
        if _q_of_log_scale(weights, hi) < q_target:
            roots.append(optimize.brentq(
                lambda lx: _q_of_log_scale(weights, lx) - q_target, peak, hi, xtol=1e-14))
    if not roots:
        return None
    return float(np.exp(0.5 * roots[rng.integers(len(roots))]))


def random_family_point(
    tag: ClassTag,
    q_target: float,
    rng: np.random.Generator,
    structure: Optional[int] = None,
    max_tries: int = 500,
) -> FamilyPoint:
    """Random class state with one-photon weight q_target (within 1e-9).

    Parameters are drawn with log-uniform radii and uniform phases, then
    rescaled by a common factor solving q(scale) = q_target.  Directions that
    cannot reach the target are redrawn.

    Raises:
        ValueError: q_target outside (0, 1) or no attainable direction found.
    """
    if not 0.0 < q_target < 1.0:
        raise ValueError("q_target must lie strictly between 0 and 1")
    if structure is None:
        if tag is ClassTag.BISEP_2X2:
            structure = int(rng.integers(len(PARTITIONS_2X2)))
        elif tag is ClassTag.BISEP_1X3:
            structure = int(rng.integers(MODES))
    for _ in range(max_tries):
        params = _random_parameters(rng)
        weights = _factor_weights(tag, params)
        scale = _solve_scale(weights, q_target, rng)
        if scale is None:
            continue
        point = family_point(tag, params * scale, structure)
        if abs(point.profile.q - q_target) > Q_MATCH_TOL:
            continue
        return point
    raise ValueError(f"could not reach q = {q_target} for {tag.value} in {max_tries} tries")


def random_mixture(
    tag: ClassTag,
    q_target: float,
    rng: np.random.Generator,
    components: Optional[int] = None,
) -> Tuple[DensityMatrix, List[FamilyPoint], np.ndarray]:
    """Random convex mixture of class states, vacuum-diluted to q_target.

    Component states are drawn at one-photon weights at or above the target
    (each with its own partition where applicable), combined with
    Dirichlet-uniform weights, then mixed with vacuum so the total one-photon
    weight lands exactly on q_target.

    Returns:
        (density matrix, component points, weights) where weights[0] is the
        vacuum share and weights[1:] align with the component list.
    """
    k = int(rng.integers(2, 6)) if components is None else components
    hi = min(0.95, q_target + 0.5 * (1.0 - q_target))
    points = []
    for _ in range(k):
        q_m = float(rng.uniform(q_target, hi)) if hi > q_target else q_target
        points.append(random_family_point(tag, q_m, rng))
    shares = rng.dirichlet(np.ones(k))
    q_mix = float(np.dot(shares, [pt.profile.q for pt in points]))
    vac_share = 1.0 - q_target / q_mix
    if vac_share < -1e-12:
        raise ValueError("component draw fell below the target q")
    vac_share = max(vac_share, 0.0)
    space = family_space()
    parts: List[Tuple[float, fock.StateLike]] = [(vac_share, fock.vacuum_state(space))]
    parts.extend(((1.0 - vac_share) * s, pt.state) for s, pt in zip(shares, points))
    rho = fock.mix(parts)
    weights = np.concatenate([[vac_share], (1.0 - vac_share) * shares])
    return rho, points, weights


# =========================================================================
# Serialization
# =========================================================================

def family_block(point: FamilyPoint) -> dict:
    return {
        "family": {
            "tag": point.tag.value,
            "parameters": [[float(z.real), float(z.imag)] for z in point.parameters],
            "structure": point.structure,
        }
    }


def save_family_point(point: FamilyPoint, path) -> None:
    fock.save_state(point.state, path, extra=family_block(point))


def load_family_point(path) -> FamilyPoint:
    doc = fock.read_snapshot(path)
    if "family" not in doc:
        raise ValueError("snapshot has no family block")
    fam = doc["family"]
    params = [complex(re, im) for re, im in fam["parameters"]]
    point = family_point(ClassTag(fam["tag"]), params, fam.get("structure"))
    stored = fock.state_from_dict(doc)
    if not isinstance(stored, PureState):
        raise ValueError("family snapshots hold pure states")
    if abs(abs(stored.overlap(point.state)) - 1.0) > 1e-9:
        raise ValueError("stored state does not match the family parameters")
    return point
