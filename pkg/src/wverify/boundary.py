"""Minimum-variance boundary curves of the separability classes.

For fixed sector weights (q, r) each class has a smallest reachable
variance.  At r = 0 the minima are the constants 3/4 (fully separable),
1/2 (bisep 2x2) and 5/12 (bisep 1x3); as r grows every class can push the
variance down to zero.  The boundary curves are obtained by solving the two
profile constraints for the two-parameter boundary families exactly (the
constraint system reduces to polynomial root enumeration, covering every
branch) and taking the branch minimum; the bisep 2x2 curve also has the
closed form

    delta_min = 1/2 - 2 r p / q^2,   p = 1 - q - r,  clamped at 0.

Beyond the zero-variance threshold every class reaches zero exactly: mix a
zero-variance family state of higher one-photon weight with vacuum and with
multi-photon product states, which changes (q, r) but not the one-photon
block.  The curves are therefore clamped to zero past the threshold.

Mixtures of fully separable states can undercut the pure curve where it is
not convex; the certification boundary for that class is the lower convex
envelope of the pure curve (with its zero tail).

The scaled variable R = 8 r p / (3 q^2) linearizes the thresholds: the
zero-variance loci sit at R = 2/3 (bisep 2x2) and R = 1/2 (bisep 1x3)
independent of q, and for fully separable states at
R = 1 + q/(6p) + q^2/(96 p^2), close to R = 1 at small q.

Everything here also runs with a replacement projector set (hardware
conditions); then the symmetric boundary families are no longer provably
extremal, so the scan minimizes over the full class parameterization,
including every partition arrangement.
"""

from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from . import families, witness
from .families import PARTITIONS_2X2, ClassTag

MODES = 4

DOMINANCE_TOL = 1e-6

#: class minima of the variance at r = 0
MINIMUM_AT_ZERO_R: Dict[ClassTag, float] = {
    ClassTag.FULLY_SEPARABLE: 3.0 / 4.0,
    ClassTag.BISEP_2X2: 1.0 / 2.0,
    ClassTag.BISEP_1X3: 5.0 / 12.0,
}

#: R value at which each class first reaches zero variance (small-q limit
#: for the fully separable class, exact for the biseparable ones)
R_CONDITION: Dict[ClassTag, float] = {
    ClassTag.FULLY_SEPARABLE: 1.0,
    ClassTag.BISEP_2X2: 2.0 / 3.0,
    ClassTag.BISEP_1X3: 1.0 / 2.0,
}


class CurveMethod(enum.Enum):
    PURE_SCAN = "PureScan"
    CONVEX_ENVELOPE = "ConvexEnvelope"
    ANALYTIC = "Analytic"


@dataclass(frozen=True)
class BoundaryCurve:
    tag: ClassTag
    q: float
    method: CurveMethod
    r: np.ndarray
    delta: np.ndarray
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def value_at(self, r: float) -> float:
        """Piecewise-linear evaluation; exact on envelope segments."""
        return float(np.interp(r, self.r, self.delta, right=self.delta[-1]))


# =========================================================================
# Scaled variable and thresholds
# =========================================================================

def scaled_r(q: float, r: float) -> float:
    """R = 8 r p / (3 q^2) with p = 1 - q - r."""
    if q <= 0.0:
        raise ValueError("R is undefined at q = 0")
    p = 1.0 - q - r
    if p < 0.0:
        raise ValueError(f"q + r = {q + r} exceeds 1")
    return 8.0 * r * p / (3.0 * q * q)


def zero_variance_residual(tag: ClassTag, q: float, r: float) -> float:
    """Residual of the class's exact zero-variance relation at (q, r)."""
    R = scaled_r(q, r)
    if tag is ClassTag.BISEP_2X2:
        return R - 2.0 / 3.0
    if tag is ClassTag.BISEP_1X3:
        return R - 0.5
    if tag is ClassTag.FULLY_SEPARABLE:
        p = 1.0 - q - r
        return R - (1.0 + q / (6.0 * p) + q * q / (96.0 * p * p))
    raise ValueError(f"no zero-variance relation for {tag}")


def _small_root_of_rp(q: float, target: float) -> float:
    """Smaller root of r (1 - q - r) = target, if it exists."""
    disc = (1.0 - q) ** 2 - 4.0 * target
    if disc < 0.0:
        raise ValueError(f"no zero-variance point at q = {q}")
    return 0.5 * ((1.0 - q) - math.sqrt(disc))


def zero_variance_threshold(tag: ClassTag, q: float) -> float:
    """Smallest r at which the class reaches variance zero, at fixed q.

    Solved from the exact zero-variance family of each class with
    p = 1 - q - r eliminated.  For the fully separable class the family
    (|0> + eps|1>)^x4 is parameterized by t = |eps|^2 and the small-t branch
    of q(t) = 4t / (1+t)^4 is inverted; its r equals the root of the
    relation R = 1 + q/(6p) + q^2/(96 p^2).
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly between 0 and 1")
    if tag is ClassTag.BISEP_2X2:
        return _small_root_of_rp(q, q * q / 4.0)
    if tag is ClassTag.BISEP_1X3:
        return _small_root_of_rp(q, 3.0 * q * q / 16.0)
    if tag is ClassTag.FULLY_SEPARABLE:
        # q(t) peaks at t = 1/3 with value 27/64
        if q > 27.0 / 64.0:
            raise ValueError(f"no zero-variance point at q = {q}")
        t = optimize.brentq(
            lambda t: 4.0 * t / (1.0 + t) ** 4 - q, 0.0, 1.0 / 3.0, xtol=1e-16, rtol=8.9e-16
        )
        p = (1.0 + t) ** -4
        return p * t * t * (6.0 + 4.0 * t + t * t)
    raise ValueError(f"no zero-variance threshold for {tag}")


def necessary_r_limit(tag: ClassTag, q: float) -> float:
    """Largest r compatible with the class's R condition (R < R_cond).

    Solves R(q, r) = R_cond with p eliminated.  For the biseparable classes
    this coincides with the zero-variance threshold; for the fully separable
    class the R < 1 condition is the small-q approximation of the exact
    relation and its root sits slightly below the exact threshold.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly between 0 and 1")
    return _small_root_of_rp(q, 3.0 * q * q * R_CONDITION[tag] / 8.0)


# =========================================================================
# Closed form for bisep 2x2
# =========================================================================

def analytic_min_22(q: float, r: float) -> float:
    """Closed-form bisep 2x2 minimum: 1/2 - 2 r p / q^2, clamped at 0."""
    if q <= 0.0:
        raise ValueError("undefined at q = 0")
    p = 1.0 - q - r
    if p < 0.0 or r < 0.0:
        raise ValueError(f"(q, r) = ({q}, {r}) is not a valid profile")
    return max(0.5 - 2.0 * r * p / (q * q), 0.0)


# =========================================================================
# General-N biseparable bound
# =========================================================================

def general_n_bisep_bound(n: int) -> float:
    """Minimum variance of (N-1)-mode-entangled biseparable states: (2N-3)/(N(N-1))."""
    if n < 2:
        raise ValueError("need at least two modes")
    return (2.0 * n - 3.0) / (n * (n - 1.0))


def verify_general_n(n: int, seed: int = 0, restarts: int = 24) -> Tuple[float, float]:
    """Numeric minimum over biseparable single-excitation states vs the formula.

    Minimizes the variance in the N-mode DFT witness basis over states with
    one mode in vacuum and an arbitrary single-photon state on the rest.

    Returns:
        (numeric minimum, formula value)
    """
    basis = witness.witness_basis(n, convention="dft")
    U = basis.mode_amplitudes
    rng = np.random.default_rng(seed)
    m = n - 1

    def objective(x: np.ndarray) -> float:
        b = x[:m] + 1j * x[m:]
        norm = np.linalg.norm(b)
        if norm < 1e-12:
            return 1.0
        alpha = np.zeros(n, dtype=complex)
        alpha[1:] = b / norm
        ov = np.abs(U.conj() @ alpha) ** 2
        return 1.0 - float(np.sum(ov**2))

    best = math.inf
    for _ in range(restarts):
        res = optimize.minimize(
            objective,
            rng.standard_normal(2 * m),
            method="Nelder-Mead",
            options=dict(xatol=1e-10, fatol=1e-13, maxiter=40000, maxfev=40000),
        )
        best = min(best, float(res.fun))
    return best, general_n_bisep_bound(n)


# =========================================================================
# Branch enumeration for the ideal boundary families
# =========================================================================

def _ideal_delta(alpha: np.ndarray) -> float:
    a = alpha / np.linalg.norm(alpha)
    return witness.variance(np.outer(a, a.conj())).delta


def _fs_branch_alphas(q: float, r: float) -> List[np.ndarray]:
    """(|0>+eps|1>)(|0>+eps_t|1>)^x3 branches at fixed (q, r).

    With u = eps^2, v = eps_t^2 and p = 1 - q - r the constraints reduce to
    u = S - 3v, (1 + u)(1 + v)^3 = 1/p with S = q/p: a quartic in v.
    """
    p = 1.0 - q - r
    S = q / p
    coeffs = [-3.0, S - 8.0, 3.0 * S - 6.0, 3.0 * S, S + 1.0 - 1.0 / p]
    out = []
    for root in np.roots(coeffs):
        if abs(root.imag) > 1e-9:
            continue
        v = float(root.real)
        if v < -1e-12 or v > S / 3.0 + 1e-12:
            continue
        v = max(v, 0.0)
        u = max(S - 3.0 * v, 0.0)
        if abs((1.0 + u) * (1.0 + v) ** 3 * p - 1.0) > 1e-7:
            continue
        out.append(np.array([math.sqrt(u), math.sqrt(v), math.sqrt(v), math.sqrt(v)]))
    return out


def _22_branch_alphas(q: float, r: float) -> List[np.ndarray]:
    p = 1.0 - q - r
    S = q / (2.0 * p)
    P = r / (4.0 * p)
    disc = S * S - 4.0 * P
    if disc < -1e-14:
        return []
    sq = math.sqrt(max(disc, 0.0))
    u, v = 0.5 * (S + sq), max(0.5 * (S - sq), 0.0)
    return [np.array([math.sqrt(u), math.sqrt(u), math.sqrt(v), math.sqrt(v)])]


def _13_branch_alphas(q: float, r: float) -> List[np.ndarray]:
    p = 1.0 - q - r
    S = q / p
    prod = r / p
    disc = S * S - 4.0 * prod
    if disc < -1e-14:
        return []
    sq = math.sqrt(max(disc, 0.0))
    a, b = 0.5 * (S + sq), max(0.5 * (S - sq), 0.0)
    out = []
    for tilde_sq, triple_total in ((a, b), (b, a)):
        u = triple_total / 3.0
        out.append(
            np.array([math.sqrt(tilde_sq), math.sqrt(u), math.sqrt(u), math.sqrt(u)])
        )
    return out


_BRANCHES: Dict[ClassTag, Callable[[float, float], List[np.ndarray]]] = {
    ClassTag.FULLY_SEPARABLE: _fs_branch_alphas,
    ClassTag.BISEP_2X2: _22_branch_alphas,
    ClassTag.BISEP_1X3: _13_branch_alphas,
}


def _validate_qr(q: float, r: float) -> None:
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly between 0 and 1")
    if r < 0.0 or q + r > 1.0:
        raise ValueError(f"(q, r) = ({q}, {r}) is not a valid profile")


def pure_boundary_value(tag: ClassTag, q: float, r: float) -> float:
    """Minimum variance over the class at fixed (q, r), ideal projectors.

    Branch minimum of the boundary family below the zero-variance threshold;
    exactly 0 at and beyond it (reached by mixtures that add multi-photon
    product weight without touching the one-photon block).
    """
    _validate_qr(q, r)
    if r == 0.0:
        values = [_ideal_delta(a) for a in _BRANCHES[tag](q, 0.0)]
        return min(values)
    try:
        threshold = zero_variance_threshold(tag, q)
    except ValueError:
        threshold = math.inf
    if r >= threshold - 1e-15:
        return 0.0
    alphas = _BRANCHES[tag](q, r)
    if not alphas:
        raise ValueError(f"no boundary-family state at (q, r) = ({q}, {r})")
    return min(_ideal_delta(a) for a in alphas)


# =========================================================================
# Full-parameterization scan (hardware projector sets)
# =========================================================================

def _structures(tag: ClassTag) -> Sequence[Optional[int]]:
    if tag is ClassTag.BISEP_2X2:
        return range(len(PARTITIONS_2X2))
    if tag is ClassTag.BISEP_1X3:
        return range(MODES)
    return (None,)


def _projector_delta(alpha: np.ndarray, states: Sequence[np.ndarray]) -> float:
    a = alpha / np.linalg.norm(alpha)
    xs = np.array([abs(np.vdot(s, a)) ** 2 for s in states])
    return float(np.sum(xs - xs**2))


def scan_minimum(
    tag: ClassTag,
    q: float,
    r: float,
    projectors: Sequence[np.ndarray],
    rng: np.random.Generator,
    restarts: int = 20,
) -> float:
    """Constrained minimum of the projector variance over the whole class.

    Minimizes over all complex family parameters and every partition
    arrangement, with the two profile constraints enforced by SLSQP.  Used
    when the projector set is not the ideal witness basis, where the
    symmetric boundary families need not be extremal.
    """
    _validate_qr(q, r)
    p = 1.0 - q - r
    inv_p = 1.0 / p
    sum_t = q / p
    best = math.inf
    for structure in _structures(tag):

        def params_of(y: np.ndarray) -> np.ndarray:
            return y[0::2] + 1j * y[1::2]

        def c_product(y: np.ndarray) -> float:
            g = families._factor_weights(tag, params_of(y))
            return float(np.prod(1.0 + g) - inv_p)

        def c_sum(y: np.ndarray) -> float:
            return float(np.sum(np.abs(params_of(y)) ** 2) - sum_t)

        def objective(y: np.ndarray) -> float:
            alpha = families._one_photon_direction(tag, params_of(y), structure)
            norm = np.linalg.norm(alpha)
            if norm < 1e-12:
                return 1.0
            return _projector_delta(alpha, projectors)

        starts = []
        for branch_alpha in _BRANCHES[tag](q, r):
            y = np.zeros(8)
            y[0::2] = branch_alpha * math.sqrt(sum_t) / max(np.linalg.norm(branch_alpha), 1e-300)
            starts.append(y)
        while len(starts) < restarts:
            y = rng.standard_normal(8)
            amps = params_of(y)
            y *= math.sqrt(sum_t / np.sum(np.abs(amps) ** 2))
            starts.append(y)
        for y0 in starts:
            res = optimize.minimize(
                objective,
                y0,
                method="SLSQP",
                constraints=[
                    {"type": "eq", "fun": c_product},
                    {"type": "eq", "fun": c_sum},
                ],
                options=dict(maxiter=400, ftol=1e-12),
            )
            if not res.success and res.status != 8:  # 8: positive directional derivative
                if abs(c_product(res.x)) > 1e-8 or abs(c_sum(res.x)) > 1e-8:
                    continue
            if abs(c_product(res.x)) <= 1e-8 and abs(c_sum(res.x)) <= 1e-8:
                best = min(best, float(objective(res.x)))
    if not math.isfinite(best):
        raise ValueError(f"no feasible class state found at (q, r) = ({q}, {r})")
    return max(best, 0.0)


def minimum_at_zero_r(tag: ClassTag, seed: int = 0, restarts: int = 24) -> float:
    """Numeric class minimum over single-excitation states (r = 0).

    Free minimization over the class's one-photon support patterns: single
    kets (fully separable), one entangled pair (2x2), one entangled triple
    (1x3); every arrangement is scanned.
    """
    basis = witness.witness_basis(MODES)
    rng = np.random.default_rng(seed)
    if tag is ClassTag.FULLY_SEPARABLE:
        vals = []
        for mode in range(MODES):
            alpha = np.zeros(MODES, dtype=complex)
            alpha[mode] = 1.0
            vals.append(_ideal_delta(alpha))
        return min(vals)
    supports: List[Sequence[int]] = []
    if tag is ClassTag.BISEP_2X2:
        for (i, j), _ in PARTITIONS_2X2:
            supports.append((i, j))
        for _, (k, l) in PARTITIONS_2X2:
            supports.append((k, l))
    elif tag is ClassTag.BISEP_1X3:
        for solo in range(MODES):
            supports.append(tuple(m for m in range(MODES) if m != solo))
    else:
        raise ValueError(f"no generator for {tag}")
    U = basis.mode_amplitudes
    best = math.inf
    for support in supports:
        dim = len(support)

        def objective(x: np.ndarray) -> float:
            b = x[:dim] + 1j * x[dim:]
            norm = np.linalg.norm(b)
            if norm < 1e-12:
                return 1.0
            alpha = np.zeros(MODES, dtype=complex)
            alpha[list(support)] = b / norm
            ov = np.abs(U.conj() @ alpha) ** 2
            return 1.0 - float(np.sum(ov**2))

        for _ in range(restarts):
            res = optimize.minimize(
                objective,
                rng.standard_normal(2 * dim),
                method="Nelder-Mead",
                options=dict(xatol=1e-10, fatol=1e-13, maxiter=20000, maxfev=20000),
            )
            best = min(best, float(res.fun))
    return best


# =========================================================================
# Curves
# =========================================================================

def default_r_grid(tag: ClassTag, q: float, points: int = 200) -> np.ndarray:
    """r = 0 plus a log-spaced sweep reaching past the zero-variance threshold."""
    r0 = zero_variance_threshold(tag, q)
    hi = min(1.25 * r0, 0.999 * (1.0 - q))
    lo = min(1e-5, 5e-3 * r0)
    return np.concatenate([[0.0], np.geomspace(lo, hi, points - 1)])


def min_variance_curve(
    tag: ClassTag,
    q: float,
    r_grid: Optional[Sequence[float]] = None,
    projectors: Optional[Sequence[np.ndarray]] = None,
    seed: int = 0,
    restarts: int = 20,
    verify_samples: int = 10000,
    threads: int = 1,
) -> BoundaryCurve:
    """Minimum-variance curve of a class at fixed q over a grid of r.

    With the ideal witness projectors the per-point minimum comes from exact
    branch enumeration of the boundary-family constraint system and is
    cross-checked against `verify_samples` random class states at the same q
    (an exception reports any sample more than 1e-6 below the curve).  With a
    replacement projector set the per-point minimum is a multistart
    constrained scan over the full class parameterization.

    Grid points with q + r > 1 are rejected; infeasible points beyond the
    pure-family frontier are reported in meta["infeasible_r"] and excluded.
    """
    if r_grid is None:
        r_grid = default_r_grid(tag, q)
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid < 0.0) or np.any(q + r_grid > 1.0):
        raise ValueError("r grid leaves the physical region")
    rs: List[float] = []
    deltas: List[float] = []
    infeasible: List[float] = []
    if projectors is None:
        for r in r_grid:
            try:
                deltas.append(pure_boundary_value(tag, q, float(r)))
                rs.append(float(r))
            except ValueError:
                infeasible.append(float(r))
        curve = BoundaryCurve(
            tag=tag,
            q=q,
            method=CurveMethod.PURE_SCAN,
            r=np.array(rs),
            delta=np.array(deltas),
            seed=seed,
            meta={"infeasible_r": infeasible, "projectors": "ideal"},
        )
        if verify_samples:
            verify_curve_against_samples(curve, samples=verify_samples, seed=seed)
        return curve
    seeds = np.random.SeedSequence(seed).spawn(len(r_grid))

    def worker(item):
        r, ss = item
        rng = np.random.default_rng(ss)
        try:
            return float(r), scan_minimum(tag, q, float(r), projectors, rng, restarts)
        except ValueError:
            return float(r), None

    items = list(zip(r_grid, seeds))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, items))
    else:
        results = [worker(it) for it in items]
    for r, val in results:
        if val is None:
            infeasible.append(r)
        else:
            rs.append(r)
            deltas.append(val)
    return BoundaryCurve(
        tag=tag,
        q=q,
        method=CurveMethod.PURE_SCAN,
        r=np.array(rs),
        delta=np.array(deltas),
        seed=seed,
        meta={"infeasible_r": infeasible, "projectors": "custom"},
    )


def verify_curve_against_samples(curve: BoundaryCurve, samples: int, seed: int) -> None:
    """Check random class states at the curve's q never undercut it.

    Each sample's variance is compared against the exact boundary value at
    the sample's own r.  Raises ValueError on a violation beyond 1e-6.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xB0DA]))
    worst = 0.0
    worst_at = None
    for _ in range(samples):
        pt = families.random_family_point(curve.tag, curve.q, rng)
        bound = pure_boundary_value(curve.tag, curve.q, min(pt.profile.r, 1.0 - curve.q))
        gap = bound - pt.delta
        if gap > worst:
            worst, worst_at = gap, (pt.profile.r, pt.delta, bound)
        if gap > DOMINANCE_TOL:
            raise ValueError(
                f"random {curve.tag.value} state at (q, r) = ({curve.q}, {worst_at[0]:.6g}) "
                f"has variance {worst_at[1]:.6g}, below the curve value {worst_at[2]:.6g}"
            )


def lower_convex_hull(points: np.ndarray) -> np.ndarray:
    """Lower chain of the convex hull of (x, y) points, sorted by x."""
    pts = points[np.lexsort((points[:, 1], points[:, 0]))]
    chain: List[np.ndarray] = []
    for pt in pts:
        while len(chain) >= 2:
            (x1, y1), (x2, y2) = chain[-2], chain[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) < 0.0:
                chain.pop()
            else:
                break
        if chain and abs(chain[-1][0] - pt[0]) < 1e-300:
            continue
        chain.append(pt)
    return np.array(chain)


def convex_envelope(curve: BoundaryCurve) -> BoundaryCurve:
    """Lower convex envelope of a pure-state curve, on the same grid."""
    pts = np.column_stack([curve.r, curve.delta])
    hull = lower_convex_hull(pts)
    env = np.interp(curve.r, hull[:, 0], hull[:, 1])
    env = np.minimum(env, curve.delta)
    return BoundaryCurve(
        tag=curve.tag,
        q=curve.q,
        method=CurveMethod.CONVEX_ENVELOPE,
        r=curve.r.copy(),
        delta=env,
        seed=curve.seed,
        meta=dict(curve.meta),
    )


def class_boundary_curve(
    tag: ClassTag,
    q: float,
    points: int = 200,
    seed: int = 0,
    verify_samples: int = 0,
) -> BoundaryCurve:
    """Certification boundary for a class at fixed q.

    Fully separable: convex envelope of the pure scan (pure curve is not
    convex, so mixtures undercut it).  Bisep 2x2: closed form.  Bisep 1x3:
    pure scan (already convex on the certification range).
    """
    if tag is ClassTag.BISEP_2X2:
        grid = default_r_grid(tag, q, points)
        delta = np.array([analytic_min_22(q, r) for r in grid])
        return BoundaryCurve(
            tag=tag, q=q, method=CurveMethod.ANALYTIC, r=grid, delta=delta, seed=seed
        )
    curve = min_variance_curve(tag, q, seed=seed, verify_samples=verify_samples,
                               r_grid=default_r_grid(tag, q, points))
    if tag is ClassTag.FULLY_SEPARABLE:
        return convex_envelope(curve)
    return curve


# =========================================================================
# R-space views
# =========================================================================

def curve_vs_scaled_r(curve: BoundaryCurve) -> Tuple[np.ndarray, np.ndarray]:
    """Map a curve's r axis to the scaled variable R."""
    R = np.array([scaled_r(curve.q, r) for r in curve.r])
    return R, curve.delta.copy()


def collapse_deviation(curves: Sequence[BoundaryCurve], points: int = 400) -> float:
    """Largest pairwise variance gap between curves on a shared R range."""
    mapped = [curve_vs_scaled_r(c) for c in curves]
    lo = max(R.min() for R, _ in mapped)
    hi = min(R.max() for R, _ in mapped)
    if hi <= lo:
        raise ValueError("curves have no common R range")
    grid = np.linspace(lo, hi, points)
    interped = [np.interp(grid, R, d) for R, d in mapped]
    worst = 0.0
    for i in range(len(interped)):
        for j in range(i + 1, len(interped)):
            worst = max(worst, float(np.max(np.abs(interped[i] - interped[j]))))
    return worst


# =========================================================================
# CSV I/O
# =========================================================================
#
# Column layout: class,q,method,r,R,delta_min with 12 significant digits.

CSV_HEADER = ["class", "q", "method", "r", "R", "delta_min"]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_curves_csv(path, curves: Sequence[BoundaryCurve]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for curve in curves:
            token = families.TOKEN_BY_TAG[curve.tag]
            for r, d in zip(curve.r, curve.delta):
                writer.writerow(
                    [token, _fmt(curve.q), curve.method.value, _fmt(r),
                     _fmt(scaled_r(curve.q, r)), _fmt(d)]
                )


def read_curves_csv(path) -> List[BoundaryCurve]:
    groups: Dict[Tuple[str, str, str], List[Tuple[float, float]]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected curve CSV header {header!r}")
        for token, q, method, r, _R, delta in reader:
            groups.setdefault((token, q, method), []).append((float(r), float(delta)))
    out = []
    for (token, q, method), rows in groups.items():
        rows.sort()
        out.append(
            BoundaryCurve(
                tag=families.TAG_BY_TOKEN[token],
                q=float(q),
                method=CurveMethod(method),
                r=np.array([r for r, _ in rows]),
                delta=np.array([d for _, d in rows]),
            )
        )
    return out
