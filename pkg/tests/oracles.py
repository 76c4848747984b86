"""Independent computation routes used only by the test suite.

Nothing here may call into the library's numerical paths: the Jacobi
solver diagonalizes from scratch, and the two-level formulas come from
direct closed-form algebra.
"""

from __future__ import annotations

import numpy as np


def jacobi_eigh(h, sweep_order: str = "rows", max_sweeps: int = 100, tol: float = 1e-15):
    """Cyclic two-sided Jacobi eigensolver for a real symmetric matrix.

    ``sweep_order`` picks the rotation schedule ("rows" walks p then q,
    "cols" walks q then p) so two runs take different round-off paths.
    """
    a = np.array(h, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if sweep_order == "rows":
        schedule = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    elif sweep_order == "cols":
        schedule = [(p, q) for q in range(1, n) for p in range(q)]
    else:
        raise ValueError(f"unknown sweep order {sweep_order!r}")
    norm = max(1.0, float(np.max(np.abs(a))))
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * norm:
            break
        for p, q in schedule:
            apq = a[p, q]
            if abs(apq) <= 1e-30 * norm:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            if theta == 0.0:
                t = 1.0
            else:
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            col_p = a[:, p].copy()
            col_q = a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q
            row_p = a[p, :].copy()
            row_q = a[q, :].copy()
            a[p, :] = c * row_p - s * row_q
            a[q, :] = s * row_p + c * row_q
            col_p = v[:, p].copy()
            col_q = v[:, q].copy()
            v[:, p] = c * col_p - s * col_q
            v[:, q] = s * col_p + c * col_q
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


class TwoLevelOracle:
    """Closed-form spectrum of H(s) = (1-s) [[0, -c], [-c, 0]] + s diag(e0, e1).

    Everything (values, vectors, their s-derivatives, the hyperbola
    parameters of the gap) follows from direct 2x2 algebra.
    """

    def __init__(self, e0: float, e1: float, coupling: float):
        self.e0, self.e1, self.c = float(e0), float(e1), float(coupling)

    def _entries(self, s):
        return s * self.e0, s * self.e1, -self.c * (1.0 - s)

    def values(self, s):
        a, b, w = self._entries(s)
        m, u = (a + b) / 2.0, (b - a) / 2.0
        r = np.hypot(u, w)
        return m - r, m + r

    def value_derivatives(self, s):
        a, b, w = self._entries(s)
        u = (b - a) / 2.0
        r = np.hypot(u, w)
        m_p = (self.e0 + self.e1) / 2.0
        u_p = (self.e1 - self.e0) / 2.0
        w_p = self.c
        r_p = (u * u_p + w * w_p) / r
        return m_p - r_p, m_p + r_p

    def value_second_derivatives(self, s):
        a, b, w = self._entries(s)
        u = (b - a) / 2.0
        r = np.hypot(u, w)
        u_p = (self.e1 - self.e0) / 2.0
        w_p = self.c
        r_p = (u * u_p + w * w_p) / r
        r_pp = (u_p**2 + w_p**2 - r_p**2) / r
        return -r_pp, r_pp

    def vectors(self, s):
        """Columns v0, v1 with v0 = (cos t, sin t), v1 = (-sin t, cos t)."""
        a, _, w = self._entries(s)
        lam0, _ = self.values(s)
        t = np.arctan2(lam0 - a, w)
        return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])

    def vector_derivative(self, s, k: int):
        """d v_k / ds in the gauge <v_k | dv_k/ds> = 0."""
        a, _, w = self._entries(s)
        lam0, _ = self.values(s)
        lam0_p, _ = self.value_derivatives(s)
        a_p, w_p = self.e0, self.c
        g = lam0 - a
        # t = atan2(g, w); t' = (g' w - g w') / (g^2 + w^2)
        t_p = ((lam0_p - a_p) * w - g * w_p) / (g * g + w * w)
        v = self.vectors(s)
        if k == 0:
            return t_p * v[:, 1]
        return -t_p * v[:, 0]

    def hyperbola(self):
        """Exact gap parameters: gap(s)^2 = dmin^2 + slope_diff^2 (s - s*)^2."""
        d = self.e1 - self.e0
        quad = d * d / 4.0 + self.c**2
        s_star = self.c**2 / quad
        dmin_sq = 4.0 * (self.c**2 - self.c**4 / quad)
        return {
            "s_star": s_star,
            "delta_min": np.sqrt(dmin_sq),
            "slope_difference": 2.0 * np.sqrt(quad),
            "slope_mean": (self.e0 + self.e1) / 2.0,
            "energy_center": s_star * (self.e0 + self.e1) / 2.0,
        }
