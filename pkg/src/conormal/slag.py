"""Twisted conormal immersion and the pointwise calibration check.

Given a base chart u -> x(u) in R^n and a closed 1-form mu, the immersion

    (u, t)  ->  ( x(u),  y(u, t) ),      y = sum_a t_a nu^a(u) + mu#(u)

maps into R^2n, where nu^a is the orthonormal normal frame and mu# is the
metric dual tangent vector of mu.  Covectors are identified with vectors via
the Euclidean metric throughout, so the fiber coordinates t parametrize the
affine-translated conormal space.

The calibration residuals are computed from the n x n blocks X, Y of the
immersion differential (columns ordered base-then-fiber):

    lagrangian = max |X^T Y - Y^T X|
    phase      = |Im(e^{i theta} det(X + iY))| / |det(X + iY)|

The first vanishes iff the tangent plane is Lagrangian, the second iff it is
special with phase e^{i theta} up to orientation (the unsigned quotient avoids
the parametrization-orientation ambiguity; the sign of Re(e^{i theta} det Z)
is recorded per point so orientation flips remain visible).

Normal frames are differentiated by running the exact same Gram-Schmidt
seeding as the plain geometry path, but in first-order jet arithmetic.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .geometry import (
    Chart,
    GeometryError,
    OneFormField,
    chart_jets,
    gram_schmidt,
    seed_normal_frame,
)
from .jets import Jet1, JetDomainError, eval_map_jet2
from .report import CheckReport, ResidualAccumulator, finalize_report

__all__ = [
    "TwistedConormalImmersion",
    "CalibrationResiduals",
    "build_immersion",
    "calibration_residuals",
    "verify_special_lagrangian",
    "sample_rows",
]

RANK_RTOL = 1e-10
DEFAULT_TOLERANCE = 1e-8


def _jdot(u, v):
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc


def _jsqrt(x):
    return x.sqrt()


@dataclass
class CalibrationResiduals:
    """Pointwise Lagrangian and phase residuals of the immersion."""

    point_base: np.ndarray
    point_fiber: np.ndarray
    x: np.ndarray
    y: np.ndarray
    lagrangian: float
    phase: float
    re_sign: int


@dataclass
class TwistedConormalImmersion:
    """Evaluable affine conormal-bundle immersion over a base chart."""

    chart: Chart
    mu: OneFormField

    @property
    def fiber_dim(self) -> int:
        return self.chart.dim_n - self.chart.dim_k

    def base_data(self, u):
        """Normal frame and metric-dual of mu at u, with base derivatives.

        Returns (x, J, normals, mu_sharp) where normals is a list of n-vectors
        of Jet1 (gradients over the k base parameters) and mu_sharp likewise.
        """
        u = np.asarray(u, dtype=float)
        chart = self.chart
        n, k = chart.dim_n, chart.dim_k
        x, J, H = chart_jets(chart, u)

        cols = [[Jet1(J[i, a], H[i, a, :]) for i in range(n)] for a in range(k)]
        try:
            tangent, _ = gram_schmidt(cols, _jdot, _jsqrt, 1e-10)
            normals = seed_normal_frame(
                tangent,
                chart.normal_reference,
                n,
                _jdot,
                _jsqrt,
                Jet1.constant(0.0, k),
                Jet1.constant(1.0, k),
            )
        except JetDomainError as exc:
            raise GeometryError(str(exc)) from exc

        try:
            jets = eval_map_jet2(self.mu.components, u)
        except JetDomainError as exc:
            raise GeometryError(str(exc)) from exc
        mu_val = np.array([j.val for j in jets])
        dmu = np.array([j.grad for j in jets])  # dmu[a, b] = d_b mu_a

        g = J.T @ J
        dg = np.einsum("ica,ib->cab", H, J) + np.einsum("ia,icb->cab", J, H)
        try:
            w = np.linalg.solve(g, mu_val)
            dw = np.linalg.solve(g, dmu - np.einsum("bac,c->ab", dg, w))
        except np.linalg.LinAlgError as exc:
            raise GeometryError(f"singular metric at {u}") from exc
        # mu#_i = w_a x_a,i with d_b mu#_i = dw_ab x_a,i + w_a x_ab,i
        mu_sharp = [
            Jet1(
                float(J[i] @ w),
                np.einsum("ab,a->b", dw, J[i]) + np.einsum("a,ab->b", w, H[i]),
            )
            for i in range(n)
        ]
        return x, J, normals, mu_sharp

    def eval(self, u, t):
        """Ambient point (x, y) of the immersion at base u, fiber t."""
        x, _, normals, mu_sharp = self.base_data(u)
        t = np.asarray(t, dtype=float)
        y = np.array(
            [
                sum(tj * nu[i].val for tj, nu in zip(t, normals)) + mu_sharp[i].val
                for i in range(self.chart.dim_n)
            ]
        )
        return x, y

    def differential(self, u, t):
        """(x, y, X, Y): ambient point and n x n differential blocks."""
        x, J, normals, mu_sharp = self.base_data(u)
        t = np.asarray(t, dtype=float)
        n, k = self.chart.dim_n, self.chart.dim_k
        if t.shape != (n - k,):
            raise ValueError(f"fiber point must have dimension {n - k}")
        y = np.empty(n)
        Yb = np.empty((n, k))
        for i in range(n):
            val = mu_sharp[i].val
            grad = mu_sharp[i].grad.copy()
            for tj, nu in zip(t, normals):
                val += tj * nu[i].val
                grad += tj * nu[i].grad
            y[i] = val
            Yb[i] = grad
        X = np.zeros((n, n))
        X[:, :k] = J
        Y = np.zeros((n, n))
        Y[:, :k] = Yb
        for j, nu in enumerate(normals):
            Y[:, k + j] = [c.val for c in nu]
        return x, y, X, Y


def build_immersion(chart: Chart, mu: OneFormField | None) -> TwistedConormalImmersion:
    """Construct the twisted conormal immersion; mu = None gives the plain
    conormal bundle."""
    if mu is None:
        mu = OneFormField.zero(chart.dim_k)
    return TwistedConormalImmersion(chart=chart, mu=mu)


def calibration_residuals(
    imm: TwistedConormalImmersion, u, t, theta: float
) -> CalibrationResiduals:
    """Lagrangian and phase residuals of the tangent plane at (u, t)."""
    x, y, X, Y = imm.differential(u, t)
    D = np.vstack([X, Y])
    sv = np.linalg.svd(D, compute_uv=False)
    if sv[-1] < RANK_RTOL * sv[0]:
        raise GeometryError(f"rank-deficient immersion differential at {u}")
    skew = X.T @ Y - Y.T @ X
    lagrangian = float(np.abs(skew).max())
    detZ = np.linalg.det(X + 1j * Y)
    if abs(detZ) == 0.0:
        raise GeometryError(f"vanishing complex determinant at {u}")
    rotated = cmath.exp(1j * theta) * detZ
    phase = abs(rotated.imag) / abs(detZ)
    return CalibrationResiduals(
        point_base=np.asarray(u, dtype=float),
        point_fiber=np.asarray(t, dtype=float),
        x=x,
        y=y,
        lagrangian=lagrangian,
        phase=phase,
        re_sign=1 if rotated.real >= 0 else -1,
    )


def _fiber_spec(samples, fiber_dim: int):
    if len(samples.fiber_box) == fiber_dim and fiber_dim > 0:
        return samples
    from dataclasses import replace

    return replace(
        samples,
        fiber_box=((-1.0, 1.0),) * fiber_dim,
        fiber_counts=(3,) * fiber_dim,
    )


def verify_special_lagrangian(
    chart: Chart, mu, theta: float, samples, tol=DEFAULT_TOLERANCE
) -> CheckReport:
    """Aggregate calibration residuals over base x fiber samples.

    The verdict is independent of the check_pair machinery: it sees only the
    immersion differential, so agreement between the two reports exercises the
    equivalence of the condition system and the calibration.
    """
    imm = build_immersion(chart, mu)
    samples = _fiber_spec(samples, imm.fiber_dim)
    acc_l = ResidualAccumulator("lagrangian", tol)
    acc_p = ResidualAccumulator("phase", tol)
    signs = {1: 0, -1: 0}
    for u in samples.base_points():
        for t in samples.fiber_points():
            try:
                res = calibration_residuals(imm, u, t, theta)
            except GeometryError:
                acc_l.skip()
                acc_p.skip()
                continue
            acc_l.add(res.lagrangian)
            acc_p.add(res.phase)
            signs[res.re_sign] += 1
    report = finalize_report(
        f"special Lagrangian calibration: {chart.name or 'chart'}",
        [acc_l, acc_p],
        seed=samples.seed,
    )
    report.notes["theta"] = theta
    report.notes["re_sign_counts"] = {str(k): v for k, v in signs.items()}
    return report


def sample_rows(chart: Chart, mu, theta: float, samples):
    """Yield per-point export rows: u, t, x, y, lagrangian, phase."""
    imm = build_immersion(chart, mu)
    samples = _fiber_spec(samples, imm.fiber_dim)
    for u in samples.base_points():
        for t in samples.fiber_points():
            try:
                res = calibration_residuals(imm, u, t, theta)
            except GeometryError:
                continue
            yield res
