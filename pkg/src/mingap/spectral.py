"""Instantaneous spectra along the interpolation.

Provides the dense symmetric eigensolver, gauge-continuous sweeps over an
s-grid, min-gap location (coarse scan plus golden-section refinement),
perturbation-theory derivatives of eigenvalues and eigenvectors, and the
residuals of the projection identities that relate any eigenpair to the
mixer neighborhood of a basis state.

All ratio identities divide by eigenvector components that may legitimately
vanish; components at or below ``COMPONENT_GUARD`` make the operation
return ``None`` (a skip, not a failure).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .hamiltonian import HamiltonianPair, interpolate

# Two eigenvalues count as degenerate below this relative spacing.
DEGENERACY_RTOL = 1e-9
# Ratio identities skip components with magnitude at or below this.
COMPONENT_GUARD = 1e-12

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class EigendecompositionError(RuntimeError):
    """LAPACK failed to converge; carries the solver diagnostics."""


class DegeneracyError(ValueError):
    """Operation requires a nondegenerate level and found a degeneracy."""


def degeneracy_tolerance(eigenvalues: np.ndarray) -> float:
    return DEGENERACY_RTOL * (1.0 + float(np.max(np.abs(eigenvalues), initial=0.0)))


def eigendecompose(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    real symmetric matrix.

    Uses the MRRR driver, which keeps small eigenvector components accurate
    enough for the ratio identities downstream.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    asym = float(np.max(np.abs(h - h.T)))
    if asym > 1e-12 * scale:
        raise ValueError(f"matrix is not symmetric: max|H - H^T| = {asym:.3e}")
    try:
        w, v = scipy.linalg.eigh(h, driver="evr")
    except scipy.linalg.LinAlgError as err:
        raise EigendecompositionError(
            f"eigensolver failed on dim {h.shape[0]}: {err}"
        ) from err
    return w, v


@dataclass(frozen=True)
class SpectralSweep:
    """Spectra over an s-grid with a continuous eigenvector gauge.

    ``energies[t, k]`` is the k-th eigenvalue (ascending) at ``grid[t]``;
    ``vectors[t, :, k]`` the matching eigenvector.  Signs (and the ordering
    inside near-degenerate clusters) are fixed by maximal overlap with the
    previous grid point, so overlap curves are continuous.
    """

    grid: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)
    vectors: np.ndarray = field(repr=False)
    pair: HamiltonianPair

    @property
    def dim(self) -> int:
        return self.pair.dim

    def gaps(self) -> np.ndarray:
        """E_1(s) - E_0(s) on the grid."""
        return self.energies[:, 1] - self.energies[:, 0]


def _canonical_signs(v: np.ndarray) -> np.ndarray:
    """Deterministic start gauge: largest-magnitude entry positive."""
    lead = np.abs(v).argmax(axis=0)
    signs = np.sign(v[lead, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def _degenerate_clusters(w: np.ndarray, tol: float):
    clusters = []
    start = 0
    for i in range(1, len(w)):
        if w[i] - w[i - 1] > tol:
            clusters.append(range(start, i))
            start = i
    clusters.append(range(start, len(w)))
    return clusters


def _match_to_previous(prev: np.ndarray, w: np.ndarray, v: np.ndarray):
    """Permute within degenerate clusters and fix signs so every column has
    nonnegative overlap with the previous step's column."""
    tol = degeneracy_tolerance(w)
    for cluster in _degenerate_clusters(w, tol):
        idx = list(cluster)
        if len(idx) < 2:
            continue
        block = np.abs(prev[:, idx].T @ v[:, idx])
        perm = [-1] * len(idx)
        used_rows, used_cols = set(), set()
        order = np.dstack(np.unravel_index(np.argsort(-block, axis=None), block.shape))[0]
        for r, c in order:
            if r in used_rows or c in used_cols:
                continue
            perm[r] = c
            used_rows.add(r)
            used_cols.add(c)
            if len(used_rows) == len(idx):
                break
        take = [idx[c] for c in perm]
        v[:, idx] = v[:, take]
        w[idx] = w[take]
    dots = np.einsum("ik,ik->k", prev, v)
    v[:, dots < 0] *= -1.0
    return w, v


def sweep(pair: HamiltonianPair, grid) -> SpectralSweep:
    """Decompose H(s) at every grid point and thread a continuous gauge."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValueError("grid must hold at least two s values")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise ValueError("grid must lie within [0, 1]")
    d = pair.dim
    energies = np.empty((len(grid), d))
    vectors = np.empty((len(grid), d, d))
    prev = None
    for t, s in enumerate(grid):
        try:
            w, v = eigendecompose(interpolate(pair, s))
        except EigendecompositionError as err:
            raise EigendecompositionError(f"at s={s}: {err}") from err
        if prev is None:
            v = _canonical_signs(v)
        else:
            w, v = _match_to_previous(prev, w, v)
        energies[t] = w
        vectors[t] = v
        prev = v
    return SpectralSweep(grid=grid, energies=energies, vectors=vectors, pair=pair)


@dataclass(frozen=True)
class MinGapResult:
    """Location and value of the minimal E_1 - E_0 over the interpolation.

    ``degenerate_at_end`` flags minima sitting at s=1 with a degenerate
    final ground level; ``all_degenerate`` flags a gap that vanishes on the
    whole interval.
    """

    s_star: float
    delta_min: float
    degenerate_at_end: bool = False
    all_degenerate: bool = False

    def __iter__(self):
        return iter((self.s_star, self.delta_min))


def _gap_at(pair: HamiltonianPair, s: float) -> float:
    w = scipy.linalg.eigvalsh(interpolate(pair, s))
    return float(w[1] - w[0])


def min_gap(pair: HamiltonianPair, coarse_points: int = 501, tol: float = 1e-10) -> MinGapResult:
    """Locate the global gap minimum: coarse scan, then golden-section
    refinement inside the bracketing cell down to an s-uncertainty of
    ``tol``."""
    if coarse_points < 50:
        raise ValueError(f"need at least 50 coarse points, got {coarse_points}")
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if pair.dim < 2:
        raise ValueError("gap undefined for a one-dimensional space")
    ss = np.linspace(0.0, 1.0, coarse_points)
    gaps = np.array([_gap_at(pair, s) for s in ss])
    deg_tol = degeneracy_tolerance(
        np.concatenate([[np.max(np.abs(pair.h1_diag))], np.abs(gaps)])
    )
    if np.max(gaps) <= deg_tol:
        i = int(np.argmin(gaps))
        return MinGapResult(float(ss[i]), float(gaps[i]), all_degenerate=True)
    i = int(np.argmin(gaps))
    if i == coarse_points - 1:
        return MinGapResult(1.0, float(gaps[-1]), degenerate_at_end=bool(gaps[-1] <= deg_tol))
    if i == 0:
        return MinGapResult(0.0, float(gaps[0]))
    a, b = float(ss[i - 1]), float(ss[i + 1])
    best_s, best_g = float(ss[i]), float(gaps[i])
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = _gap_at(pair, c), _gap_at(pair, d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _gap_at(pair, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = _gap_at(pair, d)
        if fc < best_g:
            best_s, best_g = c, fc
        if fd < best_g:
            best_s, best_g = d, fd
    return MinGapResult(best_s, best_g)


def decompose_interpolated(pair: HamiltonianPair, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of H(s); handy for amortizing the residual
    operations below over many (i, k) pairs at one s."""
    return eigendecompose(interpolate(pair, s))


_decompose_at = decompose_interpolated


def _hdot_apply(pair: HamiltonianPair, v: np.ndarray) -> np.ndarray:
    """(H1 - H0) applied to a vector or to matrix columns (the schedule
    derivative of H(s))."""
    if v.ndim == 1:
        return pair.h1_diag * v - pair.h0 @ v
    return pair.h1_diag[:, None] * v - pair.h0 @ v


def _require_isolated(w: np.ndarray, k: int, s: float):
    others = np.delete(w, k)
    if len(others) and np.min(np.abs(others - w[k])) <= degeneracy_tolerance(w):
        raise DegeneracyError(f"level {k} is degenerate at s={s}")


def eigenvalue_derivative(pair: HamiltonianPair, s: float, k: int) -> float:
    """dE_k/ds via the Hellmann-Feynman identity <v_k|H1 - H0|v_k>."""
    w, v = _decompose_at(pair, s)
    _require_isolated(w, k, s)
    vk = v[:, k]
    return float(vk @ _hdot_apply(pair, vk))


def eigenvector_derivative(pair: HamiltonianPair, s: float, k: int) -> np.ndarray:
    """d|v_k>/ds from first-order perturbation theory; orthogonal to v_k
    by construction."""
    w, v = _decompose_at(pair, s)
    _require_isolated(w, k, s)
    coeffs = v.T @ _hdot_apply(pair, v[:, k])
    denom = w[k] - w
    denom[k] = 1.0
    coeffs = coeffs / denom
    coeffs[k] = 0.0
    return v @ coeffs


def eigenvalue_second_derivative(pair: HamiltonianPair, s: float, k: int) -> float:
    """d^2 E_k/ds^2 = 2 sum_{j != k} <v_j|H1-H0|v_k>^2 / (E_k - E_j)."""
    w, v = _decompose_at(pair, s)
    _require_isolated(w, k, s)
    coeffs = v.T @ _hdot_apply(pair, v[:, k])
    denom = w[k] - w
    denom[k] = 1.0
    terms = coeffs**2 / denom
    terms[k] = 0.0
    return float(2.0 * np.sum(terms))


def energy_identity_residual(
    pair: HamiltonianPair, s: float, i: int, k: int, decomposition=None
) -> float | None:
    """Residual of the eigenvalue projection identity

        E_k(s) = s E_i(1) - (1-s) <x_i|(-H0)|v_k> / <x_i|v_k>.

    Returns None when the component <x_i|v_k> is below the guard.
    ``decomposition`` accepts a precomputed (eigenvalues, eigenvectors)
    pair for H(s).
    """
    w, v = decomposition if decomposition is not None else _decompose_at(pair, s)
    component = float(v[i, k])
    if abs(component) <= COMPONENT_GUARD:
        return None
    neigh = float(-(pair.h0[i, :] @ v[:, k]))
    return float(w[k] - (s * pair.h1_diag[i] - (1.0 - s) * neigh / component))


def gap_identity_residual(
    pair: HamiltonianPair, s: float, i: int, decomposition=None
) -> float | None:
    """Residual of the gap expression through basis state i:

        Delta(s) = (1-s) [ <neigh(x_i)|v_0>/<x_i|v_0> - <neigh(x_i)|v_1>/<x_i|v_1> ].
    """
    w, v = decomposition if decomposition is not None else _decompose_at(pair, s)
    c0, c1 = float(v[i, 0]), float(v[i, 1])
    if abs(c0) <= COMPONENT_GUARD or abs(c1) <= COMPONENT_GUARD:
        return None
    n0 = float(-(pair.h0[i, :] @ v[:, 0]))
    n1 = float(-(pair.h0[i, :] @ v[:, 1]))
    delta = float(w[1] - w[0])
    return delta - (1.0 - s) * (n0 / c0 - n1 / c1)


def _unique_ground_index(pair: HamiltonianPair) -> int:
    order = np.argsort(pair.h1_diag)
    tol = degeneracy_tolerance(pair.h1_diag)
    if pair.dim > 1 and pair.h1_diag[order[1]] - pair.h1_diag[order[0]] <= tol:
        raise DegeneracyError("final ground level is degenerate")
    return int(order[0])


def failure_condition_residual(
    pair: HamiltonianPair, s: float, decomposition=None
) -> float | None:
    """Difference of the two neighbor-to-component ratios taken at the
    solution state; equals Delta(s)/(1-s), which is asserted internally.
    The difference approaching zero signals an exponentially long runtime.
    """
    gs = _unique_ground_index(pair)
    w, v = decomposition if decomposition is not None else _decompose_at(pair, s)
    c0, c1 = float(v[gs, 0]), float(v[gs, 1])
    if abs(c0) <= COMPONENT_GUARD or abs(c1) <= COMPONENT_GUARD:
        return None
    n0 = float(-(pair.h0[gs, :] @ v[:, 0]))
    n1 = float(-(pair.h0[gs, :] @ v[:, 1]))
    value = n0 / c0 - n1 / c1
    if s < 1.0:
        expected = float(w[1] - w[0]) / (1.0 - s)
        if abs(value - expected) > 1e-8 * (1.0 + abs(expected)):
            raise RuntimeError(
                f"ratio difference {value:.6e} deviates from gap/(1-s) {expected:.6e}"
            )
    return value


@dataclass(frozen=True)
class GapBounds:
    """Squared-gap bounds through one basis state; violations are reported,
    not asserted, because they assume unstated sign conditions."""

    lower: float
    upper: float
    lower_holds: bool
    upper_holds: bool


def min_gap_bounds(pair: HamiltonianPair, s_star: float, i: int) -> GapBounds | None:
    """Triangle-inequality bounds on Delta(s*)^2 built from the squared
    neighbor-to-component ratios of basis state i."""
    w, v = _decompose_at(pair, s_star)
    c0, c1 = float(v[i, 0]), float(v[i, 1])
    if abs(c0) <= COMPONENT_GUARD or abs(c1) <= COMPONENT_GUARD:
        return None
    n0 = float(-(pair.h0[i, :] @ v[:, 0]))
    n1 = float(-(pair.h0[i, :] @ v[:, 1]))
    f2 = (1.0 - s_star) ** 2
    q0, q1 = (n0 / c0) ** 2, (n1 / c1) ** 2
    upper = f2 * (q0 + q1)
    lower = f2 * (q0 - q1)
    delta_sq = float(w[1] - w[0]) ** 2
    slack = 1e-12 * (1.0 + abs(upper))
    return GapBounds(
        lower=lower,
        upper=upper,
        lower_holds=bool(lower <= delta_sq + slack),
        upper_holds=bool(delta_sq <= upper + slack),
    )
