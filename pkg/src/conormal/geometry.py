"""Pointwise differential geometry of a parametrized submanifold.

From a chart u -> x(u) in R^n and a 1-form field mu = mu_a du^a this module
computes, at a single parameter point: the induced metric and Christoffel
symbols, deterministic orthonormal tangent/normal frames, the second
fundamental form matrices A^nu per normal direction, and the covariant
derivative B of mu, all expressed in the orthonormal tangent frame.

Partial derivatives of the metric are assembled exactly from the chart's
2-jets via the product rule (no finite differencing), so Christoffel symbols
carry full second-derivative accuracy.

Failures at individual points (rank-deficient Jacobian, degenerate normal
seeding, jet domain errors) raise :class:`GeometryError` subclasses; sample
loops treat them as skipped points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jets import Jet2, JetDomainError, eval_map_jet2

__all__ = [
    "GeometryError",
    "ImmersionError",
    "DegenerateReferenceError",
    "Chart",
    "OneFormField",
    "FrameData",
    "chart_jets",
    "frame_at",
    "second_fundamental_form",
    "covariant_mu",
    "full_frame_data",
    "laplace_beltrami",
    "mean_curvature_vector",
    "gram_schmidt",
    "seed_normal_frame",
]

PIVOT_THRESHOLD = 1e-10
POINT_SKIP_ERRORS = None  # set below once classes exist


class GeometryError(RuntimeError):
    """Per-point geometric failure; sample loops count these as skipped."""


class ImmersionError(GeometryError):
    """Chart Jacobian is rank deficient at the evaluation point."""


class DegenerateReferenceError(GeometryError):
    """Normal seeding pivot fell below threshold; supply a different
    normal_reference."""


@dataclass(frozen=True)
class Chart:
    """Parametrized k-submanifold of R^n with 2-jet evaluation.

    ``mapping`` is a callable taking the list of seeded coordinate jets and
    returning the n ambient components (jets);  components may share
    subexpressions.  ``normal_reference`` lists ambient basis indices used, in
    order, to seed the normal frame by Gram-Schmidt; indices whose projection
    pivot is below threshold are passed over, and seeding fails if the list is
    exhausted first.
    """

    dim_k: int
    dim_n: int
    mapping: object
    domain: tuple
    normal_reference: tuple = ()
    name: str = ""

    def __post_init__(self):
        if not self.dim_k < self.dim_n:
            raise ValueError("chart requires k < n")
        if len(self.domain) != self.dim_k:
            raise ValueError("domain box must have one (lo, hi) pair per parameter")
        if not self.normal_reference:
            object.__setattr__(self, "normal_reference", tuple(range(self.dim_n)))

    def contains(self, u, margin: float = 0.0) -> bool:
        return all(
            lo - margin <= ui <= hi + margin
            for ui, (lo, hi) in zip(u, self.domain)
        )


@dataclass(frozen=True)
class OneFormField:
    """1-form mu = mu_a du^a over a chart's parameter domain.

    ``components`` is a callable returning the k coefficient jets.
    """

    components: object
    name: str = ""

    @staticmethod
    def zero(k: int) -> "OneFormField":
        return OneFormField(lambda u: [0.0] * k, name="zero")


@dataclass
class FrameData:
    """Frames, metric data, and tensor components at one chart point.

    tangent_frame columns e_1..e_k are orthonormal; ``tangent_change`` S
    expresses them in Jacobian columns, e_i = sum_a S[a, i] x_a, so bilinear
    forms convert to the orthonormal frame by the congruence S^T h S.
    """

    point: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    christoffels: np.ndarray  # [c, a, b] = Gamma^c_ab
    tangent_frame: np.ndarray  # n x k
    tangent_change: np.ndarray  # k x k
    normal_frame: np.ndarray  # n x (n-k)
    II: list = field(default_factory=list)  # A^nu in orthonormal frame
    B: np.ndarray | None = None
    dmu_resid: float = 0.0


def gram_schmidt(vectors, dot, sqrt_fn, pivot_floor, against=()):
    """Sequential Gram-Schmidt over any scalar type with +,-,*,/.

    Returns orthonormal vectors and the upper-triangular coefficients R with
    vectors[j] = sum_i R[i][j] out[i].  Raises ImmersionError when a pivot
    value falls below ``pivot_floor``.
    """
    out = list(against)
    n_pre = len(out)
    rows = []
    for v in vectors:
        w = list(v)
        coeffs = []
        for e in out:
            c = dot(w, e)
            coeffs.append(c)
            w = [wi - c * ei for wi, ei in zip(w, e)]
        norm2 = dot(w, w)
        norm2_val = norm2.val if hasattr(norm2, "val") else norm2
        if norm2_val < pivot_floor * pivot_floor:
            raise ImmersionError(
                f"Gram-Schmidt pivot {np.sqrt(max(norm2_val, 0.0)):.3e} below threshold"
            )
        norm = sqrt_fn(norm2)
        out.append([wi / norm for wi in w])
        coeffs.append(norm)
        rows.append(coeffs)
    r = np.zeros((len(vectors), len(vectors)))
    for jcol, coeffs in enumerate(rows):
        for irow, c in enumerate(coeffs[n_pre:], start=0):
            cval = c.val if hasattr(c, "val") else c
            r[irow, jcol] = cval
    return out[n_pre:], r


def _dot_f(u, v):
    return sum(a * b for a, b in zip(u, v))


def seed_normal_frame(tangent_vectors, reference, n, dot, sqrt_fn, zero, one):
    """Orthonormal normal frame seeded from ambient basis vectors.

    Projects each listed ambient basis vector off the tangent frame and the
    normals found so far; pivots below threshold are passed over.  Generic
    over the scalar type so the same seeding (and hence the same frame, signs
    included) is used with and without derivative tracking.
    """
    k = len(tangent_vectors)
    normals = []
    for idx in reference:
        if len(normals) == n - k:
            break
        w = [zero] * n
        w[idx] = one
        for e in list(tangent_vectors) + normals:
            c = dot(w, e)
            w = [wi - c * ei for wi, ei in zip(w, e)]
        norm2 = dot(w, w)
        norm2_val = norm2.val if hasattr(norm2, "val") else norm2
        if norm2_val < PIVOT_THRESHOLD * PIVOT_THRESHOLD:
            continue
        norm = sqrt_fn(norm2)
        normals.append([wi / norm for wi in w])
    if len(normals) < n - k:
        raise DegenerateReferenceError(
            f"normal seeding exhausted reference list {tuple(reference)}"
        )
    return normals


def chart_jets(chart: Chart, u):
    """Evaluate the chart 2-jets: returns (x (n,), J (n,k), H (n,k,k))."""
    u = np.asarray(u, dtype=float)
    if not chart.contains(u, margin=1e-12):
        raise GeometryError(f"point {u} outside chart domain")
    try:
        jets = eval_map_jet2(chart.mapping, u)
    except JetDomainError as exc:
        raise GeometryError(str(exc)) from exc
    n, k = chart.dim_n, chart.dim_k
    if len(jets) != n:
        raise ValueError("chart mapping returned wrong ambient dimension")
    x = np.array([j.val for j in jets])
    jac = np.array([j.grad for j in jets])
    hess = np.array([j.hess for j in jets])
    return x, jac.reshape(n, k), hess.reshape(n, k, k)


def frame_at(chart: Chart, u) -> FrameData:
    """Metric, Christoffels, and orthonormal tangent/normal frames at u."""
    u = np.asarray(u, dtype=float)
    x, J, H = chart_jets(chart, u)
    n, k = chart.dim_n, chart.dim_k

    g = J.T @ J
    # dg[c, a, b] = d_c g_ab, exact from the chart 2-jets
    dg = np.einsum("ica,ib->cab", H, J) + np.einsum("ia,icb->cab", J, H)
    try:
        g_inv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise ImmersionError(f"singular metric at {u}") from exc
    # Gamma^d_ab = g^dc (d_a g_bc + d_b g_ac - d_c g_ab) / 2
    gamma_low = 0.5 * (
        np.einsum("abc->cab", dg) + np.einsum("bac->cab", dg) - dg
    )
    christoffels = np.einsum("dc,cab->dab", g_inv, gamma_low)

    cols = [list(J[:, a]) for a in range(k)]
    try:
        tangent, r = gram_schmidt(cols, _dot_f, np.sqrt, PIVOT_THRESHOLD)
    except ImmersionError as exc:
        raise ImmersionError(f"rank-deficient Jacobian at {u}: {exc}") from exc
    tangent_frame = np.array(tangent).T
    tangent_change = np.linalg.inv(r)

    normals = seed_normal_frame(
        tangent, chart.normal_reference, n, _dot_f, np.sqrt, 0.0, 1.0
    )
    normal_frame = np.array(normals).T

    return FrameData(
        point=u,
        g=g,
        g_inv=g_inv,
        christoffels=christoffels,
        tangent_frame=tangent_frame,
        tangent_change=tangent_change,
        normal_frame=normal_frame,
    )


def second_fundamental_form(chart: Chart, u, frame: FrameData) -> list:
    """Matrices A^nu = <x_ab, nu> per normal direction, orthonormal frame."""
    _, _, H = chart_jets(chart, u)
    S = frame.tangent_change
    out = []
    for i in range(frame.normal_frame.shape[1]):
        nu = frame.normal_frame[:, i]
        h = np.einsum("iab,i->ab", H, nu)
        A = S.T @ h @ S
        out.append(0.5 * (A + A.T))
    frame.II = out
    return out


def covariant_mu(chart: Chart, mu: OneFormField, u, frame: FrameData):
    """Covariant derivative B of mu in the orthonormal frame, plus the
    antisymmetry residual of the coordinate derivative (closedness check)."""
    u = np.asarray(u, dtype=float)
    try:
        jets = eval_map_jet2(mu.components, u)
    except JetDomainError as exc:
        raise GeometryError(str(exc)) from exc
    k = chart.dim_k
    if len(jets) != k:
        raise ValueError("1-form field returned wrong component count")
    vals = np.array([j.val for j in jets])
    grads = np.array([j.grad for j in jets])  # grads[b, a] = d_a mu_b
    # B~_ab = d_a mu_b - Gamma^c_ab mu_c
    B_coord = grads.T - np.einsum("cab,c->ab", frame.christoffels, vals)
    dmu = grads.T - grads
    dmu_resid = float(np.abs(dmu).max()) if k > 1 else 0.0
    S = frame.tangent_change
    B = S.T @ B_coord @ S
    frame.B = B
    frame.dmu_resid = dmu_resid
    return B, dmu_resid


def full_frame_data(chart: Chart, mu: OneFormField, u) -> FrameData:
    """frame_at + second fundamental form + covariant mu in one call."""
    frame = frame_at(chart, u)
    second_fundamental_form(chart, u, frame)
    covariant_mu(chart, mu, u, frame)
    return frame


def laplace_beltrami(chart: Chart, scalar_expr, u) -> float:
    """Laplace-Beltrami of a scalar on the chart's induced metric at u."""
    frame = frame_at(chart, u)
    f = eval_map_jet2(lambda uj: [scalar_expr(uj)], u)[0]
    upstairs = f.hess - np.einsum("cab,c->ab", frame.christoffels, f.grad)
    return float(np.einsum("ab,ab->", frame.g_inv, upstairs))


def mean_curvature_vector(chart: Chart, u, frame: FrameData | None = None):
    """Ambient mean curvature vector g^ab (x_ab - Gamma^c_ab x_c)."""
    if frame is None:
        frame = frame_at(chart, u)
    _, J, H = chart_jets(chart, u)
    hess_part = H - np.einsum("cab,ic->iab", frame.christoffels, J)
    return np.einsum("ab,iab->i", frame.g_inv, hess_part)
