"""Single-excitation witness basis and the projector-variance measure.

The witness observables are projectors onto an orthonormal basis of the
one-photon sector.  For four modes the basis follows the real sign
convention

    |w_1> = (|1000> + |0100> + |0010> + |0001>) / 2
    |w_2> = (|1000> - |0100> - |0010> + |0001>) / 2
    |w_3> = (|1000> + |0100> - |0010> - |0001>) / 2
    |w_4> = (|1000> - |0100> + |0010> - |0001>) / 2

optionally with free phases e^(i phi_k) attached to the kets of modes
2..N; for other mode counts the rows of the unitary DFT matrix are used.
The figure of merit is the summed projector variance

    delta(rho) = sum_i [<M_i> - <M_i>^2],   M_i = |w_i><w_i|,

which for an orthonormal basis reduces to 1 - sum_i <w_i|rho|w_i>^2.  It
vanishes only on the basis states themselves and reaches 1 - 1/N on the
maximally mixed one-photon state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from .fock import (
    DensityMatrix,
    FockSpace,
    PureState,
    StateLike,
    as_density,
    excitation_profile,
    make_pure,
    one_photon_block,
)

SUPPORT_LEAKAGE_TOL = 1e-10

_HADAMARD4_SIGNS = np.array(
    [
        [1, 1, 1, 1],
        [1, -1, -1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
    ],
    dtype=float,
)


def single_photon_space(mode_count: int) -> FockSpace:
    """Smallest space holding the one-photon sector of `mode_count` modes."""
    return FockSpace(mode_count, per_mode_cutoff=1, total_cutoff=1)


def w_state(mode_count: int = 4) -> PureState:
    """Symmetric single-photon state (|10..0> + ... + |0..01>) / sqrt(N)."""
    if mode_count < 2:
        raise ValueError("need at least two modes")
    space = single_photon_space(mode_count)
    amps = np.zeros(space.dim, dtype=complex)
    for mode in range(mode_count):
        amps[space.single_photon_index(mode)] = 1.0
    return make_pure(space, amps)


@dataclass(frozen=True)
class WitnessBasis:
    """Orthonormal single-photon basis used as witness projectors.

    mode_amplitudes[i, k] is the amplitude of basis state i on the ket with
    the photon in mode k; states holds the same vectors as PureStates on the
    minimal one-photon space.
    """

    mode_amplitudes: np.ndarray
    phases: np.ndarray
    convention: str

    @property
    def mode_count(self) -> int:
        return self.mode_amplitudes.shape[0]

    @property
    def states(self) -> Tuple[PureState, ...]:
        space = single_photon_space(self.mode_count)
        out = []
        for row in self.mode_amplitudes:
            amps = np.zeros(space.dim, dtype=complex)
            for mode, a in enumerate(row):
                amps[space.single_photon_index(mode)] = a
            out.append(PureState(space, amps))
        return tuple(out)


def witness_basis(
    mode_count: int = 4,
    phases: Optional[Sequence[float]] = None,
    convention: str = "auto",
) -> WitnessBasis:
    """Build the witness basis for `mode_count` modes.

    Args:
        mode_count: number of modes N (>= 2).
        phases: N-1 free phases, applied to the kets of modes 2..N; defaults
            to all zero.
        convention: "auto" (sign patterns above for N=4, DFT otherwise),
            "hadamard4" (N=4 only) or "dft".

    Returns:
        WitnessBasis whose rows are orthonormal and balanced: every amplitude
        has magnitude 1/sqrt(N).
    """
    if mode_count < 2:
        raise ValueError("need at least two modes")
    phi = np.zeros(mode_count - 1) if phases is None else np.asarray(phases, dtype=float)
    if phi.shape != (mode_count - 1,):
        raise ValueError(f"expected {mode_count - 1} phases, got shape {phi.shape}")
    if convention == "auto":
        convention = "hadamard4" if mode_count == 4 else "dft"
    if convention == "hadamard4":
        if mode_count != 4:
            raise ValueError("the hadamard4 convention is only defined for 4 modes")
        base = _HADAMARD4_SIGNS.astype(complex) / 2.0
    elif convention == "dft":
        j = np.arange(mode_count)
        base = np.exp(2j * np.pi * np.outer(j, j) / mode_count) / np.sqrt(mode_count)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    mode_phase = np.ones(mode_count, dtype=complex)
    mode_phase[1:] = np.exp(1j * phi)
    amps = base * mode_phase[np.newaxis, :]
    return WitnessBasis(mode_amplitudes=amps, phases=np.mod(phi, 2 * np.pi), convention=convention)


# =========================================================================
# Variance measure
# =========================================================================

@dataclass(frozen=True)
class VarianceResult:
    delta: float
    overlaps: np.ndarray


BlockLike = Union[StateLike, np.ndarray]


def _as_block(rho_one: BlockLike, mode_count: Optional[int] = None) -> np.ndarray:
    """Coerce input to a unit-trace one-photon block indexed by mode.

    Full-space states must be supported on the single-excitation sector
    (leakage above 1e-10 is an error); raw matrices must be square,
    Hermitian and unit trace.
    """
    if isinstance(rho_one, np.ndarray):
        block = np.asarray(rho_one, dtype=complex)
        if block.ndim != 2 or block.shape[0] != block.shape[1]:
            raise ValueError("one-photon block must be a square matrix")
        if np.max(np.abs(block - block.conj().T)) > 1e-10:
            raise ValueError("one-photon block is not Hermitian")
    else:
        dm = as_density(rho_one)
        totals = np.array([sum(occ) for occ in dm.space.basis])
        leakage = float(np.real(np.diag(dm.matrix))[totals != 1].sum())
        if leakage > SUPPORT_LEAKAGE_TOL:
            raise ValueError(
                f"state has weight {leakage:.3e} outside the single-excitation "
                "sector; pass it through excitation_profile first"
            )
        block = one_photon_block(dm, normalize=False)
    tr = np.trace(block).real
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"one-photon block has trace {tr!r}, not 1")
    if mode_count is not None and block.shape[0] != mode_count:
        raise ValueError(
            f"block is {block.shape[0]}-mode but the basis has {mode_count} modes"
        )
    return block


def variance(rho_one: BlockLike, basis: Optional[WitnessBasis] = None) -> VarianceResult:
    """Summed projector variance of a one-photon state in a witness basis.

    Args:
        rho_one: one-photon state; a full-space PureState/DensityMatrix
            supported on the single-excitation sector, or a raw N x N block
            indexed by mode.
        basis: witness basis; defaults to the zero-phase basis for the
            state's mode count.

    Returns:
        VarianceResult with delta = 1 - sum_i overlaps_i^2 and the individual
        overlaps <w_i|rho|w_i>.
    """
    block = _as_block(rho_one, None if basis is None else basis.mode_count)
    if basis is None:
        basis = witness_basis(block.shape[0])
    U = basis.mode_amplitudes
    overlaps = np.einsum("ik,kl,il->i", U.conj(), block, U).real
    total = overlaps.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"witness overlaps sum to {total!r}; basis is not complete")
    delta = 1.0 - float(np.sum(overlaps**2))
    if delta < 0.0:
        if delta < -1e-12:
            raise ValueError(f"variance came out negative: {delta!r}")
        delta = 0.0
    return VarianceResult(delta=delta, overlaps=overlaps)


def variance_with_projectors(rho_one: BlockLike, states: Sequence[np.ndarray]) -> VarianceResult:
    """Summed projector variance for an arbitrary set of unit vectors.

    Used when hardware imperfections make the effective projectors
    non-orthogonal: delta = sum_k (x_k - x_k^2) with x_k = |<s_k|psi>|^2
    expectation.  Coincides with `variance` when the states form an
    orthonormal basis.
    """
    block = _as_block(rho_one)
    xs = []
    for s in states:
        v = np.asarray(s, dtype=complex)
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-9:
            raise ValueError("projector states must be normalized")
        xs.append(float(np.real(np.vdot(v, block @ v))))
    xs = np.array(xs)
    delta = float(np.sum(xs - xs**2))
    return VarianceResult(delta=max(delta, 0.0), overlaps=xs)


def variance_of_full_state(rho: StateLike, basis: Optional[WitnessBasis] = None):
    """Profile a full state and evaluate the variance of its one-photon block.

    Returns:
        (ExcitationProfile, VarianceResult)

    Raises:
        ValueError: when the state has no single-excitation weight, in which
            case the measure is undefined.
    """
    prof = excitation_profile(rho)
    if prof.rho_one is None:
        raise ValueError(
            "state has no single-excitation weight (q = 0); the variance "
            "measure is undefined"
        )
    return prof, variance(prof.rho_one, basis)


# =========================================================================
# Phase optimization
# =========================================================================

@dataclass(frozen=True)
class PhaseOptimum:
    phases: np.ndarray
    delta: float
    overlaps: np.ndarray


def optimize_phases(
    rho_one: BlockLike,
    convention: str = "auto",
    seed: int = 0,
    restarts: int = 24,
) -> PhaseOptimum:
    """Minimize the variance over the N-1 free basis phases.

    Multistart local minimization (Nelder-Mead on the phase torus) from
    seeded random starting points; with the default number of restarts the
    landscape for N up to ~8 is covered well beyond the 1e-6 accuracy
    the callers rely on.
    """
    block = _as_block(rho_one)
    n = block.shape[0]
    rng = np.random.default_rng(seed)

    def objective(phi: np.ndarray) -> float:
        basis = witness_basis(n, phases=phi, convention=convention)
        U = basis.mode_amplitudes
        overlaps = np.einsum("ik,kl,il->i", U.conj(), block, U).real
        return 1.0 - float(np.sum(overlaps**2))

    best_phi = np.zeros(n - 1)
    best_val = objective(best_phi)
    for _ in range(restarts):
        start = rng.uniform(0.0, 2 * np.pi, size=n - 1)
        res = optimize.minimize(
            objective,
            start,
            method="Nelder-Mead",
            options=dict(xatol=1e-9, fatol=1e-12, maxiter=8000, maxfev=8000),
        )
        if res.fun < best_val:
            best_val = float(res.fun)
            best_phi = np.asarray(res.x, dtype=float)
    phases = np.mod(best_phi, 2 * np.pi)
    result = variance(block, witness_basis(n, phases=phases, convention=convention))
    return PhaseOptimum(phases=phases, delta=result.delta, overlaps=result.overlaps)
