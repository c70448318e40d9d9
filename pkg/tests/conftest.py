"""Shared finite-difference oracles and chart helpers for the test suite.

The oracles here differentiate only chart *values*; they never touch the jet
derivative path they are used to cross-check.
"""

import numpy as np
import pytest

from conormal.geometry import Chart
from conormal.jets import eval_map_jet2


def chart_value(chart: Chart, u) -> np.ndarray:
    """Ambient position only (no derivative content used downstream)."""
    return np.array([j.val for j in eval_map_jet2(chart.mapping, u)])


def fd_grad(f, u, h=1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar callable on R^p."""
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape[0])
    for a in range(u.shape[0]):
        e = np.zeros_like(u)
        e[a] = h
        out[a] = (f(u + e) - f(u - e)) / (2 * h)
    return out


def fd_grad4(f, u, h=1e-2) -> np.ndarray:
    """Fourth-order central gradient (for nested differencing)."""
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape[0])
    for a in range(u.shape[0]):
        e = np.zeros_like(u)
        e[a] = h
        out[a] = (
            -f(u + 2 * e) + 8 * f(u + e) - 8 * f(u - e) + f(u - 2 * e)
        ) / (12 * h)
    return out


def fd_hess(f, u, h=1e-4) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    p = u.shape[0]
    out = np.empty((p, p))
    for a in range(p):
        for b in range(p):
            ea = np.zeros_like(u)
            eb = np.zeros_like(u)
            ea[a] = h
            eb[b] = h
            out[a, b] = (
                f(u + ea + eb) - f(u + ea - eb) - f(u - ea + eb) + f(u - ea - eb)
            ) / (4 * h * h)
    return out


def fd_metric(chart: Chart, u, h=1e-2) -> np.ndarray:
    """Induced metric from fourth-order differences of chart values."""
    k = chart.dim_k
    J = np.empty((chart.dim_n, k))
    for a in range(k):
        e = np.zeros(k)
        e[a] = h
        J[:, a] = (
            -chart_value(chart, u + 2 * e)
            + 8 * chart_value(chart, u + e)
            - 8 * chart_value(chart, u - e)
            + chart_value(chart, u - 2 * e)
        ) / (12 * h)
    return J.T @ J


def fd_laplace_beltrami(chart: Chart, scalar, u, h=1e-2) -> float:
    """Laplace-Beltrami from chart values and scalar values only.

    Computes (1/sqrt g) d_a ( sqrt(g) g^{ab} d_b f ) with fourth-order
    stencils at every differentiation, so the only inputs are pointwise
    evaluations of the chart map and the scalar.
    """
    u = np.asarray(u, dtype=float)
    k = chart.dim_k

    def flux(point):
        g = fd_metric(chart, point, h)
        ginv = np.linalg.inv(g)
        df = fd_grad4(scalar, point, h)
        return np.sqrt(np.linalg.det(g)) * (ginv @ df)

    total = 0.0
    for a in range(k):
        e = np.zeros(k)
        e[a] = h
        total += (
            -flux(u + 2 * e)[a]
            + 8 * flux(u + e)[a]
            - 8 * flux(u - e)[a]
            + flux(u - 2 * e)[a]
        ) / (12 * h)
    g0 = fd_metric(chart, u, h)
    return total / np.sqrt(np.linalg.det(g0))


def fd_mean_curvature(chart: Chart, u, h=1e-3) -> np.ndarray:
    """Ambient mean curvature vector from chart values only.

    Uses H = g^{ab} (x_ab)^perp, projecting out the finite-difference
    tangent plane.
    """
    u = np.asarray(u, dtype=float)
    k, n = chart.dim_k, chart.dim_n
    J = np.empty((n, k))
    Hx = np.empty((n, k, k))
    for a in range(k):
        ea = np.zeros(k)
        ea[a] = h
        J[:, a] = (chart_value(chart, u + ea) - chart_value(chart, u - ea)) / (2 * h)
        for b in range(k):
            eb = np.zeros(k)
            eb[b] = h
            Hx[:, a, b] = (
                chart_value(chart, u + ea + eb)
                - chart_value(chart, u + ea - eb)
                - chart_value(chart, u - ea + eb)
                + chart_value(chart, u - ea - eb)
            ) / (4 * h * h)
    g = J.T @ J
    ginv = np.linalg.inv(g)
    trace = np.einsum("ab,iab->i", ginv, Hx)
    q, _ = np.linalg.qr(J)
    return trace - q @ (q.T @ trace)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
