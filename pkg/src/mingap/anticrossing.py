"""Anti-crossing analysis on top of a spectral sweep.

Computes the overlap families (final levels inside the two lowest
instantaneous vectors, and the solution state across all instantaneous
levels), fits the two-branch hyperbola around the gap minimum, measures
the swap structure under both the four-quantity (Choi) parametrization
and the relaxed solution-based one, and evaluates the identities that tie
the minimum gap to those quantities.

Measured (gamma, epsilon) are the smallest parameters for which the swap
clauses hold on the window; they quantify anti-crossing strength and are
never thresholded here.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

import numpy as np
import scipy.linalg
import scipy.optimize

from .hamiltonian import HamiltonianPair, interpolate
from .spectral import (
    DegeneracyError,
    MinGapResult,
    SpectralSweep,
    degeneracy_tolerance,
    eigendecompose,
    min_gap,
    sweep as spectral_sweep,
    _hdot_apply,
)


class StationarityError(ValueError):
    """The supplied point is not a stationary point of the gap."""


class StepSizeError(ValueError):
    """Finite-difference step too large for the anti-crossing width."""


@dataclass(frozen=True)
class FinalLevelPartition:
    """Basis states grouped into (possibly degenerate) final energy levels,
    ascending in energy."""

    energies: tuple[float, ...]
    members: tuple[tuple[int, ...], ...]
    tol: float

    @property
    def level_count(self) -> int:
        return len(self.energies)

    @property
    def unique_ground_index(self) -> int | None:
        """Basis index of the solution state, or None if the lowest final
        level is degenerate."""
        if len(self.members[0]) == 1:
            return self.members[0][0]
        return None


def partition_final_levels(pair: HamiltonianPair, tol: float | None = None) -> FinalLevelPartition:
    """Single-linkage clustering of the target energies: a new level starts
    wherever consecutive sorted energies are more than ``tol`` apart."""
    values = pair.h1_diag
    if tol is None:
        tol = degeneracy_tolerance(values)
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    order = np.argsort(values, kind="stable")
    groups: list[list[int]] = [[int(order[0])]]
    for idx in order[1:]:
        if values[idx] - values[groups[-1][-1]] > tol:
            groups.append([])
        groups[-1].append(int(idx))
    return FinalLevelPartition(
        energies=tuple(float(np.mean(values[g])) for g in groups),
        members=tuple(tuple(sorted(g)) for g in groups),
        tol=float(tol),
    )


@dataclass(frozen=True)
class PointOverlaps:
    """Overlap families evaluated at a single s."""

    in_ground: np.ndarray
    in_excited: np.ndarray
    solution: np.ndarray | None


@dataclass(frozen=True)
class OverlapSeries:
    """Overlap families over the sweep grid.

    ``in_ground[t, k]`` is the weight of final level k inside the
    instantaneous ground vector (``in_excited`` likewise for the first
    excited vector); ``solution[t, k]`` is the weight of the solution state
    in the k-th instantaneous vector.  All are squared overlaps, so they
    are insensitive to the sweep's sign gauge.
    """

    grid: np.ndarray = field(repr=False)
    in_ground: np.ndarray = field(repr=False)
    in_excited: np.ndarray = field(repr=False)
    solution: np.ndarray | None = field(repr=False)
    partition: FinalLevelPartition
    sweep: SpectralSweep

    def at(self, s: float) -> PointOverlaps:
        """Exact overlap values at an arbitrary s (fresh decomposition)."""
        _, v = eigendecompose(interpolate(self.sweep.pair, s))
        a = np.array([float(np.sum(v[m, 0] ** 2)) for m in self.partition.members])
        b = np.array([float(np.sum(v[m, 1] ** 2)) for m in self.partition.members])
        gs = self.partition.unique_ground_index
        g = v[gs, :] ** 2 if (self.solution is not None and gs is not None) else None
        return PointOverlaps(in_ground=a, in_excited=b, solution=g)


def compute_overlaps(
    sweep: SpectralSweep,
    partition: FinalLevelPartition,
    include_solution: bool | None = None,
) -> OverlapSeries:
    """Evaluate the overlap families on the sweep grid.

    The solution series needs a unique final ground state; with
    ``include_solution=None`` it is simply omitted when the ground level is
    degenerate, while an explicit True then raises.
    """
    gs = partition.unique_ground_index
    if include_solution is None:
        include_solution = gs is not None
    if include_solution and gs is None:
        raise DegeneracyError("solution series needs a unique final ground state")
    t_count = len(sweep.grid)
    levels = partition.level_count
    a = np.empty((t_count, levels))
    b = np.empty((t_count, levels))
    for l, members in enumerate(partition.members):
        sel = list(members)
        a[:, l] = np.sum(sweep.vectors[:, sel, 0] ** 2, axis=1)
        b[:, l] = np.sum(sweep.vectors[:, sel, 1] ** 2, axis=1)
    g = sweep.vectors[:, gs, :] ** 2 if include_solution else None
    return OverlapSeries(
        grid=sweep.grid, in_ground=a, in_excited=b, solution=g,
        partition=partition, sweep=sweep,
    )


# ---------------------------------------------------------------------------
# hyperbola fit


@dataclass(frozen=True)
class WilkinsonFit:
    """Two-branch hyperbola fitted around the gap minimum:

        E_pm(s) = energy_center + slope_mean (s - s*)
                  +- 0.5 sqrt(gap_fit^2 + slope_difference^2 (s - s*)^2)

    ``valid`` requires convergence, a fitted gap within 5% of the measured
    minimum, a small rms residual, and an actual hyperbolic bend inside the
    window (straight non-crossing levels are rejected).
    """

    slope_difference: float
    slope_mean: float
    energy_center: float
    gap_fit: float
    rms_residual: float
    window: tuple[float, float]
    valid: bool


def _gap_value(pair: HamiltonianPair, s: float) -> float:
    w = scipy.linalg.eigvalsh(interpolate(pair, s))
    return float(w[1] - w[0])


def _auto_fit_window(pair: HamiltonianPair, s_star: float, delta_min: float) -> tuple[float, float]:
    """Largest symmetric window on which the gap stays below 3x its minimum."""
    cap = min(s_star, 1.0 - s_star)
    if cap <= 0:
        raise ValueError("gap minimum sits at the boundary; no fit window")
    half = cap * 0.999
    target = 3.0 * delta_min
    for _ in range(200):
        if max(_gap_value(pair, s_star - half), _gap_value(pair, s_star + half)) <= target:
            break
        half /= 1.3
    return (s_star - half, s_star + half)


def wilkinson_fit(
    sweep: SpectralSweep,
    s_star: float,
    window: tuple[float, float] | None = None,
    samples: int = 25,
) -> WilkinsonFit:
    """Least-squares fit of the two lowest levels to the hyperbola branches
    around ``s_star``.  The window defaults to the region where the gap is
    at most three times its minimum; it is resampled at ``samples`` points
    so sharp anti-crossings are resolved below the sweep grid spacing."""
    if samples < 7:
        raise ValueError(f"need at least 7 sample points, got {samples}")
    pair = sweep.pair
    delta_min = _gap_value(pair, s_star)
    if window is None:
        window = _auto_fit_window(pair, s_star, delta_min)
    lo, hi = window
    if not (0.0 <= lo < s_star < hi <= 1.0):
        raise ValueError(f"window {window} must bracket s*={s_star} inside [0, 1]")
    ss = np.linspace(lo, hi, samples)
    e0 = np.empty(samples)
    e1 = np.empty(samples)
    for t, s in enumerate(ss):
        w = scipy.linalg.eigvalsh(interpolate(pair, s))
        e0[t], e1[t] = w[0], w[1]

    mid_lo = (e0[0] + e1[0]) / 2.0
    mid_hi = (e0[-1] + e1[-1]) / 2.0
    slope0 = (mid_hi - mid_lo) / (ss[-1] - ss[0])
    edge_gap = max(e1[-1] - e0[-1], e1[0] - e0[0])
    half_width = max(hi - s_star, s_star - lo)
    a0 = np.sqrt(max(edge_gap**2 - delta_min**2, 0.0)) / half_width
    center0 = (np.interp(s_star, ss, e0) + np.interp(s_star, ss, e1)) / 2.0

    def residuals(x):
        a, b, center, gap = x
        half = 0.5 * np.sqrt(gap * gap + a * a * (ss - s_star) ** 2)
        mid = center + b * (ss - s_star)
        return np.concatenate([mid - half - e0, mid + half - e1])

    out = scipy.optimize.least_squares(
        residuals,
        x0=[a0, slope0, center0, delta_min],
        bounds=([0.0, -np.inf, -np.inf, 0.0], [np.inf, np.inf, np.inf, np.inf]),
    )
    a_fit, b_fit, center_fit, gap_fit = (float(x) for x in out.x)
    rms = float(np.sqrt(np.mean(out.fun**2)))
    scale = max(delta_min, 1e-300)
    # bend test: the asymptote term must actually matter inside the window,
    # which rejects straight non-crossing levels (they fit with A ~ 0)
    valid = bool(
        out.success
        and abs(gap_fit - delta_min) <= 0.05 * scale + 1e-12
        and rms <= 0.05 * scale + 1e-12
        and a_fit * half_width >= 0.2 * delta_min
    )
    return WilkinsonFit(
        slope_difference=a_fit,
        slope_mean=b_fit,
        energy_center=center_fit,
        gap_fit=gap_fit,
        rms_residual=rms,
        window=(float(lo), float(hi)),
        valid=valid,
    )


# ---------------------------------------------------------------------------
# swap measurements


@dataclass(frozen=True)
class SwapMeasurement:
    """Smallest (gamma, epsilon) for which the swap clauses hold on the
    window; ``satisfied`` additionally requires the right monotone
    directions and parameters small enough to be meaningful (< 1/2)."""

    satisfied: bool
    gamma: float
    epsilon: float
    window: tuple[float, float]
    direction_ok: bool

    @property
    def half_width(self) -> float:
        lo, hi = self.window
        return (hi - lo) / 2.0


def _window_indices(grid: np.ndarray, lo: float, hi: float) -> np.ndarray:
    idx = np.nonzero((grid >= lo - 1e-15) & (grid <= hi + 1e-15))[0]
    if len(idx) < 2:
        raise ValueError(f"window ({lo}, {hi}) holds fewer than two grid samples")
    return idx


def _measure_choi_window(series: OverlapSeries, s_star: float, lo: float, hi: float) -> SwapMeasurement:
    idx = _window_indices(series.grid, lo, hi)
    a0 = series.in_ground[idx, 0]
    a1 = series.in_ground[idx, 1]
    b0 = series.in_excited[idx, 0]
    b1 = series.in_excited[idx, 1]
    star = series.at(s_star)
    a0s, a1s = float(star.in_ground[0]), float(star.in_ground[1])
    b0s, b1s = float(star.in_excited[0]), float(star.in_excited[1])

    pair_sum_min = min(
        float(np.min(a0 + a1)), float(np.min(b0 + b1)), a0s + a1s, b0s + b1s
    )
    clause1 = max(0.0, 1.0 - pair_sum_min)
    clause3 = max(
        a0[0], 1.0 - a0[-1], 1.0 - a1[0], a1[-1],
        1.0 - b0[0], b0[-1], b1[0], 1.0 - b1[-1],
    )
    gamma = float(max(clause1, clause3, 0.0))
    epsilon = float(max(abs(a0s - 0.5), abs(a1s - 0.5), abs(b0s - 0.5), abs(b1s - 0.5)))
    direction_ok = bool(a0[-1] > a0[0] and a1[0] > a1[-1] and b0[0] > b0[-1] and b1[-1] > b1[0])
    return SwapMeasurement(
        satisfied=bool(direction_ok and gamma < 0.5 and epsilon < 0.5),
        gamma=gamma,
        epsilon=epsilon,
        window=(float(lo), float(hi)),
        direction_ok=direction_ok,
    )


def _measure_solution_window(series: OverlapSeries, s_star: float, lo: float, hi: float) -> SwapMeasurement:
    if series.solution is None:
        raise DegeneracyError("solution series unavailable (degenerate final ground state)")
    idx = _window_indices(series.grid, lo, hi)
    g0 = series.solution[idx, 0]
    g1 = series.solution[idx, 1]
    star = series.at(s_star)
    g0s, g1s = float(star.solution[0]), float(star.solution[1])

    clause1 = max(0.0, 1.0 - min(float(np.min(g0 + g1)), g0s + g1s))
    clause3 = max(g0[0], 1.0 - g0[-1], 1.0 - g1[0], g1[-1])
    gamma = float(max(clause1, clause3, 0.0))
    epsilon = float(max(abs(g0s - 0.5), abs(g1s - 0.5), abs(g0s - g1s)))
    direction_ok = bool(g0[-1] > g0[0] and g1[0] > g1[-1])
    return SwapMeasurement(
        satisfied=bool(direction_ok and gamma < 0.5 and epsilon < 0.5),
        gamma=gamma,
        epsilon=epsilon,
        window=(float(lo), float(hi)),
        direction_ok=direction_ok,
    )


def _optimize_window(series: OverlapSeries, s_star: float, measure) -> SwapMeasurement:
    """Scan symmetric windows around s* and keep the smallest-gamma
    measurement (the definition only asks that some window works)."""
    grid = series.grid
    spacing = float(np.median(np.diff(grid)))
    max_half = min(s_star - grid[0], grid[-1] - s_star)
    best = None
    m = 1
    while m * spacing <= max_half + 1e-15:
        half = m * spacing
        try:
            cand = measure(series, s_star, s_star - half, s_star + half)
        except ValueError:
            m += 1
            continue
        if best is None or cand.gamma < best.gamma:
            best = cand
        m += 1
    if best is None:
        star = series.at(s_star)
        return SwapMeasurement(
            satisfied=False, gamma=1.0,
            epsilon=float(abs(star.in_ground[0] - 0.5)),
            window=(s_star, s_star), direction_ok=False,
        )
    return best


def measure_choi(
    series: OverlapSeries, s_star: float, window: tuple[float, float] | None = None
) -> SwapMeasurement:
    """Swap measurement on the four quantities (final ground and first
    excited level inside each of the two lowest instantaneous vectors).
    ``window=None`` optimizes over symmetric windows around s*."""
    if series.partition.level_count < 2:
        raise ValueError("needs at least two final energy levels")
    if window is None:
        return _optimize_window(series, s_star, _measure_choi_window)
    return _measure_choi_window(series, s_star, window[0], window[1])


def measure_solution_swap(
    series: OverlapSeries, s_star: float, window: tuple[float, float] | None = None
) -> SwapMeasurement:
    """Swap measurement on the solution state's weights in the two lowest
    instantaneous levels (the relaxed parametrization; subsumes the
    four-quantity one whenever that is satisfied)."""
    if window is None:
        return _optimize_window(series, s_star, _measure_solution_window)
    return _measure_solution_window(series, s_star, window[0], window[1])


# ---------------------------------------------------------------------------
# identities at the gap minimum


def gap_decomposition_residual(
    sweep: SpectralSweep, partition: FinalLevelPartition, s_star: float
) -> float:
    """Residual of the stationary-point identity

        Delta(s*) = sum_k E_k(1) [b_k(s*) - a_k(s*)]

    where a_k/b_k are the final-level weights inside the two lowest
    instantaneous vectors.  Rejects s* where the gap derivative (computed
    via Hellmann-Feynman) is too large for the identity's error to stay
    within its contract."""
    pair = sweep.pair
    w, v = eigendecompose(interpolate(pair, s_star))
    delta = float(w[1] - w[0])
    d1 = float(v[:, 1] @ _hdot_apply(pair, v[:, 1]))
    d0 = float(v[:, 0] @ _hdot_apply(pair, v[:, 0]))
    slope = d1 - d0
    threshold = 1e-6 * (1.0 + delta) / max(1.0 - s_star, 1e-12)
    if abs(slope) > threshold:
        raise StationarityError(
            f"|dDelta/ds| = {abs(slope):.3e} at s*={s_star} exceeds {threshold:.3e}; "
            "refine the gap minimum first"
        )
    total = 0.0
    for energy, members in zip(partition.energies, partition.members):
        sel = list(members)
        a_k = float(np.sum(v[sel, 0] ** 2))
        b_k = float(np.sum(v[sel, 1] ** 2))
        total += energy * (b_k - a_k)
    return abs(delta - total)


def epsilon_bound_margin(report: "AntiCrossingReport", partition: FinalLevelPartition) -> float | None:
    """Margin of the bound Delta_min <= K * epsilon with
    K = 2 (E_0 + E_1 + 2M) on energies shifted so the lowest is zero
    (M is the shifted maximum).  Only applies when the four-quantity
    measurement is satisfied; returns None otherwise."""
    if report.choi is None or not report.choi.satisfied:
        return None
    if partition.level_count < 2:
        return None
    energies = np.array(partition.energies) - partition.energies[0]
    m = float(np.max(energies))
    k_const = 2.0 * (float(energies[0]) + float(energies[1]) + 2.0 * m)
    return k_const * report.choi.epsilon - report.delta_min


# ---------------------------------------------------------------------------
# eigenvector rotation at the gap minimum


@dataclass(frozen=True)
class RotationResult:
    """How closely the two lowest eigenvectors rotate purely into each
    other at the gap minimum: finite-difference derivatives are compared
    against -beta v_1 and +beta v_0, relative to |beta|.

    ``coupling_above_max`` is the largest schedule-derivative matrix
    element between the two lowest vectors and any higher level; the
    rotation picture treats it as negligible."""

    residual_ground: float
    residual_excited: float
    coupling_above_max: float
    beta: float
    step: float


@dataclass(frozen=True)
class SolutionDerivativeResult:
    """Finite-difference check of the solution-weight derivatives at s*:
    their sum vanishes and their difference equals 4 g01 beta with
    g01 = (g_0 + g_1)/2.  Residuals are relative to |beta|."""

    sum_residual: float
    diff_residual: float
    g0_prime: float
    g1_prime: float
    beta: float
    step: float


def _gauged_pair_at(pair: HamiltonianPair, s_star: float, gs_index: int | None):
    """Decompose at s* and fix the local gauge: the ground vector has
    positive entry sum (it is sign-definite for these mixers) and the
    excited vector points away from the solution state.  With this
    convention beta comes out nonnegative at a genuine anti-crossing."""
    w, v = eigendecompose(interpolate(pair, s_star))
    v = v.copy()
    if float(np.sum(v[:, 0])) < 0:
        v[:, 0] = -v[:, 0]
    if gs_index is not None:
        if float(v[gs_index, 1]) > 0:
            v[:, 1] = -v[:, 1]
    else:
        if float(v[:, 0] @ _hdot_apply(pair, v[:, 1])) < 0:
            v[:, 1] = -v[:, 1]
    return w, v


def _select_step(pair: HamiltonianPair, s_star: float, delta_min: float, h: float | None) -> float:
    cap = 0.9 * min(s_star, 1.0 - s_star)
    if cap <= 0:
        raise StepSizeError("gap minimum sits at the boundary")
    if h is not None:
        if not 0 < h <= 1e-4:
            raise ValueError(f"step must lie in (0, 1e-4], got {h}")
        if h >= cap:
            raise StepSizeError(f"step {h} leaves [0, 1] around s*={s_star}")
        widest = max(_gap_value(pair, s_star - h), _gap_value(pair, s_star + h))
        if widest > 2.0 * delta_min:
            raise StepSizeError(
                f"gap grows to {widest:.3e} at s*+-{h:.1e} (over twice the minimum); shrink h"
            )
        return h
    probe = min(1e-3, cap)
    edge = max(_gap_value(pair, s_star - probe), _gap_value(pair, s_star + probe))
    slope_diff = np.sqrt(max(edge**2 - delta_min**2, 0.0)) / probe
    if slope_diff > 0:
        h = min(1e-4, cap / 2.0, 0.02 * delta_min / slope_diff)
    else:
        h = min(1e-4, cap / 2.0)
    while h > 1e-12:
        widest = max(_gap_value(pair, s_star - h), _gap_value(pair, s_star + h))
        if widest <= 2.0 * delta_min:
            return h
        h /= 2.0
    raise StepSizeError("could not find a step inside the anti-crossing width")


def rotation_residuals(sweep: SpectralSweep, s_star: float, h: float | None = None) -> RotationResult:
    """Check d|v_0>/ds = -beta |v_1> and d|v_1>/ds = +beta |v_0> at the gap
    minimum with gauge-aligned central differences (step auto-selected from
    the anti-crossing width when ``h`` is None)."""
    pair = sweep.pair
    gs_index = None
    try:
        part = partition_final_levels(pair)
        gs_index = part.unique_ground_index
    except ValueError:
        pass
    w, v = _gauged_pair_at(pair, s_star, gs_index)
    delta_min = float(w[1] - w[0])
    coupling = float(v[:, 0] @ _hdot_apply(pair, v[:, 1]))
    if abs(coupling) < 1e-300 or delta_min <= 0:
        raise ValueError("no anti-crossing coupling between the two lowest levels")
    beta = coupling / delta_min
    h = _select_step(pair, s_star, delta_min, h)
    _, vp = eigendecompose(interpolate(pair, s_star + h))
    _, vm = eigendecompose(interpolate(pair, s_star - h))
    for k in (0, 1):
        if float(v[:, k] @ vp[:, k]) < 0:
            vp[:, k] = -vp[:, k]
        if float(v[:, k] @ vm[:, k]) < 0:
            vm[:, k] = -vm[:, k]
    d0 = (vp[:, 0] - vm[:, 0]) / (2.0 * h)
    d1 = (vp[:, 1] - vm[:, 1]) / (2.0 * h)
    res0 = float(np.linalg.norm(d0 + beta * v[:, 1])) / abs(beta)
    res1 = float(np.linalg.norm(d1 - beta * v[:, 0])) / abs(beta)
    upper = np.abs(v[:, :2].T @ _hdot_apply(pair, v[:, 2:]))
    coupling_above = float(np.max(upper)) if upper.size else 0.0
    return RotationResult(
        residual_ground=res0,
        residual_excited=res1,
        coupling_above_max=coupling_above,
        beta=beta,
        step=h,
    )


def solution_derivative_residuals(
    series: OverlapSeries, s_star: float, h: float | None = None
) -> SolutionDerivativeResult:
    """Central-difference derivatives of the solution weights g_0, g_1 at
    the gap minimum, checked against the rotation rate beta."""
    pair = series.sweep.pair
    gs_index = series.partition.unique_ground_index
    if gs_index is None:
        raise DegeneracyError("needs a unique final ground state")
    w, v = _gauged_pair_at(pair, s_star, gs_index)
    delta_min = float(w[1] - w[0])
    coupling = float(v[:, 0] @ _hdot_apply(pair, v[:, 1]))
    if abs(coupling) < 1e-300 or delta_min <= 0:
        raise ValueError("no anti-crossing coupling between the two lowest levels")
    beta = coupling / delta_min
    h = _select_step(pair, s_star, delta_min, h)
    _, vp = eigendecompose(interpolate(pair, s_star + h))
    _, vm = eigendecompose(interpolate(pair, s_star - h))
    g0_prime = float(vp[gs_index, 0] ** 2 - vm[gs_index, 0] ** 2) / (2.0 * h)
    g1_prime = float(vp[gs_index, 1] ** 2 - vm[gs_index, 1] ** 2) / (2.0 * h)
    g01 = float(v[gs_index, 0] ** 2 + v[gs_index, 1] ** 2) / 2.0
    return SolutionDerivativeResult(
        sum_residual=abs(g0_prime + g1_prime) / abs(beta),
        diff_residual=abs(g0_prime - g1_prime - 4.0 * g01 * beta) / abs(beta),
        g0_prime=g0_prime,
        g1_prime=g1_prime,
        beta=beta,
        step=h,
    )


# ---------------------------------------------------------------------------
# full report


@dataclass(frozen=True)
class AntiCrossingReport:
    """Everything measured around the gap minimum of one interpolation."""

    s_star: float
    delta_min: float
    beta: float | None
    ground_degenerate: bool
    degenerate_at_end: bool
    all_degenerate: bool
    wilkinson: WilkinsonFit | None
    choi: SwapMeasurement | None
    solution_swap: SwapMeasurement | None
    gap_decomposition_residual: float | None
    epsilon_bound_margin: float | None
    rotation: RotationResult | None
    solution_derivative: SolutionDerivativeResult | None
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        def plain(obj):
            if obj is None or isinstance(obj, (bool, int, float, str)):
                return obj
            if isinstance(obj, (list, tuple)):
                return [plain(x) for x in obj]
            if isinstance(obj, np.generic):
                return obj.item()
            return {k: plain(v) for k, v in asdict(obj).items()}

        return {
            "s_star": plain(self.s_star),
            "delta_min": plain(self.delta_min),
            "beta": plain(self.beta),
            "ground_degenerate": bool(self.ground_degenerate),
            "degenerate_at_end": bool(self.degenerate_at_end),
            "all_degenerate": bool(self.all_degenerate),
            "wilkinson": plain(self.wilkinson),
            "choi": plain(self.choi),
            "solution_swap": plain(self.solution_swap),
            "gap_decomposition_residual": plain(self.gap_decomposition_residual),
            "epsilon_bound_margin": plain(self.epsilon_bound_margin),
            "rotation": plain(self.rotation),
            "solution_derivative": plain(self.solution_derivative),
            "warnings": list(self.warnings),
        }


def build_report(
    pair: HamiltonianPair,
    grid=None,
    grid_points: int = 1001,
    coarse_points: int = 501,
    refine_tol: float = 1e-10,
    partition_tol: float | None = None,
    fd_step: float | None = None,
    precomputed_sweep: SpectralSweep | None = None,
) -> tuple[AntiCrossingReport, SpectralSweep, OverlapSeries | None]:
    """Run the full analysis pipeline for one interpolation.

    Returns the report plus the sweep and overlap series it was computed
    from (the series is None when no anti-crossing analysis applies).
    """
    if grid is None:
        grid = np.linspace(0.0, 1.0, grid_points)
    swp = precomputed_sweep if precomputed_sweep is not None else spectral_sweep(pair, grid)
    partition = partition_final_levels(pair, partition_tol)
    mg: MinGapResult = min_gap(pair, coarse_points=coarse_points, tol=refine_tol)

    warnings: list[str] = []
    ground_degenerate = partition.unique_ground_index is None
    if ground_degenerate:
        warnings.append(
            f"final ground level is degenerate ({len(partition.members[0])} states); "
            "solution-based quantities skipped"
        )
    if mg.all_degenerate:
        warnings.append("gap vanishes on the whole interval; no anti-crossing analysis")
    if mg.degenerate_at_end:
        warnings.append("gap minimum sits at s=1 (degenerate final ground state)")

    interior = not (mg.all_degenerate or mg.degenerate_at_end) and 0.0 < mg.s_star < 1.0
    if not interior and not mg.all_degenerate and not mg.degenerate_at_end:
        warnings.append(f"gap minimum at the boundary s={mg.s_star}; no anti-crossing analysis")

    if not interior:
        report = AntiCrossingReport(
            s_star=mg.s_star, delta_min=mg.delta_min, beta=None,
            ground_degenerate=ground_degenerate,
            degenerate_at_end=mg.degenerate_at_end, all_degenerate=mg.all_degenerate,
            wilkinson=None, choi=None, solution_swap=None,
            gap_decomposition_residual=None, epsilon_bound_margin=None,
            rotation=None, solution_derivative=None, warnings=tuple(warnings),
        )
        return report, swp, None

    series = compute_overlaps(swp, partition)

    try:
        wilk = wilkinson_fit(swp, mg.s_star)
    except ValueError as err:
        wilk = None
        warnings.append(f"hyperbola fit skipped: {err}")

    choi = measure_choi(series, mg.s_star)
    solution_swap = None
    if not ground_degenerate:
        solution_swap = measure_solution_swap(series, mg.s_star)

    try:
        decomp_residual = gap_decomposition_residual(swp, partition, mg.s_star)
    except StationarityError as err:
        decomp_residual = None
        warnings.append(f"gap decomposition skipped: {err}")

    try:
        rotation = rotation_residuals(swp, mg.s_star, fd_step)
    except (StepSizeError, ValueError) as err:
        rotation = None
        warnings.append(f"rotation check skipped: {err}")

    solution_derivative = None
    if not ground_degenerate:
        try:
            solution_derivative = solution_derivative_residuals(series, mg.s_star, fd_step)
        except (StepSizeError, ValueError) as err:
            warnings.append(f"solution derivative check skipped: {err}")

    report = AntiCrossingReport(
        s_star=mg.s_star,
        delta_min=mg.delta_min,
        beta=rotation.beta if rotation is not None else None,
        ground_degenerate=ground_degenerate,
        degenerate_at_end=mg.degenerate_at_end,
        all_degenerate=mg.all_degenerate,
        wilkinson=wilk,
        choi=choi,
        solution_swap=solution_swap,
        gap_decomposition_residual=decomp_residual,
        epsilon_bound_margin=None,
        rotation=rotation,
        solution_derivative=solution_derivative,
        warnings=tuple(warnings),
    )
    report = replace(report, epsilon_bound_margin=epsilon_bound_margin(report, partition))
    return report, swp, series
