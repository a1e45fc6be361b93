"""Truncated multimode Fock space with dense state representations.

A space is fixed by the number of modes, a per-mode occupation cutoff and a
cutoff on the total excitation number.  Basis states are occupation tuples,
ordered by ascending total excitation (vacuum first); inside each sector,
tuples with excitations in lower-numbered modes come first (descending
lexicographic order).  With that convention the single-excitation sector at
index offset 1 is ordered by the mode carrying the photon: |1000>, |0100>,
|0010>, |0001> for four modes.

States are dense complex vectors (pure) or matrices (density operators) over
that basis.  The excitation profile of a density operator collects the weights
of the 0-, 1- and >=2-photon sectors and the normalized single-excitation
block; coherences between different sectors are dropped, since photon-counting
detection at the outputs is insensitive to them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
TRUNCATION_TOL = 1e-12

# Sector weights below this are treated as empty when normalizing blocks.
SECTOR_EMPTY_TOL = 1e-14


# =========================================================================
# Space
# =========================================================================

@dataclass(frozen=True)
class FockSpace:
    """Truncated bosonic Fock space on a fixed number of modes.

    Args:
        mode_count: number of modes (>= 1).
        per_mode_cutoff: largest occupation allowed in a single mode.
        total_cutoff: largest total excitation number kept in the basis.
    """

    mode_count: int
    per_mode_cutoff: int = 2
    total_cutoff: int = 2
    _basis: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _index: Dict[Tuple[int, ...], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be >= 1")
        if self.per_mode_cutoff < 0 or self.total_cutoff < 0:
            raise ValueError("cutoffs must be non-negative")
        occs = itertools.product(range(self.per_mode_cutoff + 1), repeat=self.mode_count)
        kept = [occ for occ in occs if sum(occ) <= self.total_cutoff]
        # vacuum first, then by total excitation; lower-numbered-mode
        # excitations lead inside each sector
        kept.sort(key=lambda occ: (sum(occ), tuple(-n for n in occ)))
        object.__setattr__(self, "_basis", tuple(kept))
        object.__setattr__(self, "_index", {occ: i for i, occ in enumerate(kept)})

    @property
    def dim(self) -> int:
        return len(self._basis)

    @property
    def basis(self) -> Tuple[Tuple[int, ...], ...]:
        return self._basis

    def index_of(self, occupation: Sequence[int]) -> int:
        """Basis index of an occupation tuple."""
        key = tuple(int(n) for n in occupation)
        if key not in self._index:
            raise ValueError(f"occupation {key} not in this space")
        return self._index[key]

    def sector_indices(self, excitation: int) -> np.ndarray:
        """Indices of all basis states with the given total excitation."""
        return np.array(
            [i for i, occ in enumerate(self._basis) if sum(occ) == excitation],
            dtype=int,
        )

    def single_photon_index(self, mode: int) -> int:
        """Index of the basis state with exactly one photon, in `mode`."""
        if not 0 <= mode < self.mode_count:
            raise ValueError(f"mode {mode} out of range")
        occ = tuple(1 if m == mode else 0 for m in range(self.mode_count))
        return self.index_of(occ)

    def compatible_with(self, other: "FockSpace") -> bool:
        return (
            self.mode_count == other.mode_count
            and self.per_mode_cutoff == other.per_mode_cutoff
            and self.total_cutoff == other.total_cutoff
        )


# =========================================================================
# States
# =========================================================================

@dataclass(frozen=True)
class PureState:
    """Normalized state vector over a FockSpace basis."""

    space: FockSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.dim,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({self.space.dim},)"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "PureState") -> complex:
        """<self|other>."""
        _require_same_space(self.space, other.space)
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator on a FockSpace.

    Validated on construction: hermiticity and trace to 1e-12, eigenvalues
    above -1e-10.
    """

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        d = self.space.dim
        if mat.shape != (d, d):
            raise ValueError(f"matrix has shape {mat.shape}, expected ({d}, {d})")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr!r}, not 1 within 1e-12")
        if np.min(np.linalg.eigvalsh(mat)) < EIGENVALUE_FLOOR:
            raise ValueError("matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class ExcitationProfile:
    """Sector weights of a state and its normalized single-excitation block.

    p, q and r are the weights of the vacuum, one-photon and multi-photon
    (>= 2) sectors; they sum to 1.  rho_one is the one-photon block,
    renormalized to unit trace, kept as a full-space DensityMatrix supported
    on the single-excitation sector; it is None when q vanishes.
    """

    p: float
    q: float
    r: float
    rho_one: Optional[DensityMatrix]

    def __post_init__(self):
        for name, w in (("p", self.p), ("q", self.q), ("r", self.r)):
            if w < -1e-12:
                raise ValueError(f"sector weight {name} = {w} is negative")
        if abs(self.p + self.q + self.r - 1.0) > 1e-10:
            raise ValueError("sector weights do not sum to 1")


StateLike = Union[PureState, DensityMatrix]


def _require_same_space(a: FockSpace, b: FockSpace) -> None:
    if not a.compatible_with(b):
        raise ValueError("states live on different Fock spaces")


# =========================================================================
# Constructors
# =========================================================================

def make_pure(space: FockSpace, amplitudes: Sequence[complex]) -> PureState:
    """Build a PureState, normalizing the given amplitude vector.

    Raises:
        ValueError: wrong length, or vanishing norm.
    """
    amps = np.asarray(amplitudes, dtype=complex)
    if amps.shape != (space.dim,):
        raise ValueError(f"expected {space.dim} amplitudes, got {amps.shape}")
    norm = np.linalg.norm(amps)
    if norm < 1e-14:
        raise ValueError("cannot normalize a zero vector")
    return PureState(space, amps / norm)


def pure_from_terms(space: FockSpace, terms: Dict[Tuple[int, ...], complex]) -> PureState:
    """Build a normalized PureState from {occupation tuple: amplitude}."""
    amps = np.zeros(space.dim, dtype=complex)
    for occ, amp in terms.items():
        amps[space.index_of(occ)] = amp
    return make_pure(space, amps)


def basis_state(space: FockSpace, occupation: Sequence[int]) -> PureState:
    """The basis ket for one occupation tuple."""
    amps = np.zeros(space.dim, dtype=complex)
    amps[space.index_of(occupation)] = 1.0
    return PureState(space, amps)


def vacuum_state(space: FockSpace) -> PureState:
    return basis_state(space, (0,) * space.mode_count)


def from_pure(state: PureState) -> DensityMatrix:
    """|psi><psi| as a DensityMatrix."""
    v = state.amplitudes
    n2 = np.vdot(v, v).real
    if abs(n2 - 1.0) > 1e-12:
        v = v / np.sqrt(n2)
    return DensityMatrix(state.space, np.outer(v, v.conj()))


def as_density(state: StateLike) -> DensityMatrix:
    return state if isinstance(state, DensityMatrix) else from_pure(state)


# =========================================================================
# Composition
# =========================================================================

def tensor(a: PureState, b: PureState, total_cutoff: Optional[int] = None) -> PureState:
    """Tensor product of two pure states.

    The result lives on a space with the combined mode count.  By default the
    total cutoff is the sum of the factors' cutoffs, so the product is exact.
    If a smaller `total_cutoff` is requested, components above it are dropped
    only when their combined weight is below 1e-12; otherwise this errors to
    avoid silently corrupting the state.
    """
    sa, sb = a.space, b.space
    out_total = sa.total_cutoff + sb.total_cutoff if total_cutoff is None else total_cutoff
    out_space = FockSpace(
        sa.mode_count + sb.mode_count,
        per_mode_cutoff=max(sa.per_mode_cutoff, sb.per_mode_cutoff),
        total_cutoff=out_total,
    )
    amps = np.zeros(out_space.dim, dtype=complex)
    lost = 0.0
    for i, occ_a in enumerate(sa.basis):
        va = a.amplitudes[i]
        if va == 0:
            continue
        for j, occ_b in enumerate(sb.basis):
            vb = b.amplitudes[j]
            if vb == 0:
                continue
            occ = occ_a + occ_b
            if sum(occ) > out_total:
                lost += abs(va * vb) ** 2
                continue
            amps[out_space.index_of(occ)] += va * vb
    if lost > TRUNCATION_TOL:
        raise ValueError(
            f"tensor product loses weight {lost:.3e} above the total cutoff "
            f"{out_total} (limit {TRUNCATION_TOL:.0e})"
        )
    return make_pure(out_space, amps)


def tensor_all(states: Sequence[PureState], total_cutoff: Optional[int] = None) -> PureState:
    """Left-to-right tensor product of several pure states."""
    if not states:
        raise ValueError("need at least one state")
    out = states[0]
    for nxt in states[1:-1]:
        out = tensor(out, nxt)
    if len(states) > 1:
        out = tensor(out, states[-1], total_cutoff=total_cutoff)
    return out


def embed_state(state: PureState, space: FockSpace) -> PureState:
    """Re-express a pure state on a larger space with the same mode count.

    Every occupied basis state of the source must exist in the target.
    """
    if state.space.mode_count != space.mode_count:
        raise ValueError("embedding cannot change the mode count")
    amps = np.zeros(space.dim, dtype=complex)
    for i, occ in enumerate(state.space.basis):
        a = state.amplitudes[i]
        if a == 0:
            continue
        amps[space.index_of(occ)] = a
    return PureState(space, amps)


def mix(components: Iterable[Tuple[float, StateLike]]) -> DensityMatrix:
    """Convex mixture sum_m w_m rho_m.

    Weights must be non-negative and sum to 1 within 1e-12; all components
    must share one space.
    """
    components = list(components)
    if not components:
        raise ValueError("need at least one component")
    weights = np.array([w for w, _ in components], dtype=float)
    if np.any(weights < -1e-14):
        raise ValueError("mixture weights must be non-negative")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError(f"mixture weights sum to {weights.sum()!r}, not 1")
    space = components[0][1].space
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for w, state in components:
        _require_same_space(space, state.space)
        out += w * as_density(state).matrix
    return DensityMatrix(space, out)


# =========================================================================
# Excitation profile
# =========================================================================

def excitation_profile(rho: StateLike) -> ExcitationProfile:
    """Sector weights (p, q, r) and the normalized one-photon block.

    r collects everything with two or more excitations.  Coherences between
    sectors are discarded: the detection scheme counts photons at the outputs,
    which cannot distinguish states differing only in such coherences.
    """
    dm = as_density(rho)
    space = dm.space
    totals = np.array([sum(occ) for occ in space.basis])
    diag = np.real(np.diag(dm.matrix))
    p = float(diag[totals == 0].sum())
    q = float(diag[totals == 1].sum())
    r = float(diag[totals >= 2].sum())
    rho_one = None
    if q > SECTOR_EMPTY_TOL:
        one = space.sector_indices(1)
        block = np.zeros_like(dm.matrix)
        block[np.ix_(one, one)] = dm.matrix[np.ix_(one, one)] / q
        rho_one = DensityMatrix(space, block)
    return ExcitationProfile(p=p, q=q, r=r, rho_one=rho_one)


def one_photon_block(rho: StateLike, normalize: bool = True) -> np.ndarray:
    """Single-excitation block as an N x N matrix indexed by mode.

    Entry (l, m) is <1_l| rho |1_m>; with `normalize` the block is scaled to
    unit trace.  Raises when the block is (numerically) empty and
    normalization was requested.
    """
    dm = as_density(rho)
    space = dm.space
    idx = [space.single_photon_index(m) for m in range(space.mode_count)]
    block = dm.matrix[np.ix_(idx, idx)].copy()
    if normalize:
        tr = np.trace(block).real
        if tr < SECTOR_EMPTY_TOL:
            raise ValueError("state has no single-excitation weight")
        block /= tr
    return block


# =========================================================================
# Snapshot files
# =========================================================================
#
# JSON layout ("wverify-state", version 1):
#   kind            "pure" | "density"
#   mode_count, per_mode_cutoff, total_cutoff
#   basis           explicit occupation tuples, in storage order
#   amplitudes      [[re, im], ...]                  (pure)
#   matrix          [[[re, im], ...], ...]           (density)
# plus optional extra blocks (e.g. "family") passed through verbatim.
# Floats are written with repr-level precision, so a load after a save
# reproduces every amplitude bit-for-bit.

SNAPSHOT_FORMAT = "wverify-state"
SNAPSHOT_VERSION = 1


def _c2pair(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _pair2c(pair: Sequence[float]) -> complex:
    return complex(pair[0], pair[1])


def snapshot_dict(state: StateLike, extra: Optional[dict] = None) -> dict:
    """Serializable dict for a pure state or density matrix."""
    space = state.space
    doc = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "mode_count": space.mode_count,
        "per_mode_cutoff": space.per_mode_cutoff,
        "total_cutoff": space.total_cutoff,
        "basis": [list(occ) for occ in space.basis],
    }
    if isinstance(state, PureState):
        doc["kind"] = "pure"
        doc["amplitudes"] = [_c2pair(z) for z in state.amplitudes]
    else:
        doc["kind"] = "density"
        doc["matrix"] = [[_c2pair(z) for z in row] for row in state.matrix]
    if extra:
        doc.update(extra)
    return doc


def state_from_dict(doc: dict) -> StateLike:
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise ValueError("not a wverify state snapshot")
    space = FockSpace(
        doc["mode_count"],
        per_mode_cutoff=doc["per_mode_cutoff"],
        total_cutoff=doc["total_cutoff"],
    )
    stored = [tuple(occ) for occ in doc["basis"]]
    if stored != list(space.basis):
        raise ValueError("basis ordering in file does not match this space")
    if doc["kind"] == "pure":
        amps = np.array([_pair2c(pair) for pair in doc["amplitudes"]])
        return PureState(space, amps)
    if doc["kind"] == "density":
        mat = np.array([[_pair2c(z) for z in row] for row in doc["matrix"]])
        return DensityMatrix(space, mat)
    raise ValueError(f"unknown snapshot kind {doc['kind']!r}")


def save_state(state: StateLike, path, extra: Optional[dict] = None) -> None:
    with open(path, "w") as fh:
        json.dump(snapshot_dict(state, extra), fh, indent=1)
        fh.write("\n")


def read_snapshot(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def load_state(path) -> StateLike:
    return state_from_dict(read_snapshot(path))
