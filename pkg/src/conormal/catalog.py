"""Catalog of explicit twisted-austere constructions.

Each entry instantiates a (chart, 1-form, phase, sampling) bundle for one of
the closed-form construction families:

  tg_graph            flat base, mu the differential of a potential whose
                      complex Hessian shift has vanishing rotated imaginary
                      determinant (graph case)
  line_k1             straight line with an affine slope 1-form
  minimal_graph_k2    minimal graph base (helicoid) with a harmonic potential
  cylinder_thm41      union of parallel lines through a minimal surface,
                      with the prescribed-codifferential 1-form
  split_cylinder      minimal-surface cylinder with a harmonic 1-form plus a
                      linear slope along the ruling
  cone_eigenfunction  cone over a minimal surface in the sphere, slope an
                      eigenfunction of the link Laplacian
  twisted_cone        twisted cone over a minimal surface in the sphere
                      (ruling base path integrated numerically)
  nonsplit_torus_cone cone over the two-parameter torus family in the
                      3-sphere with the five-constant slope form

``validate_inputs`` re-checks every construction hypothesis numerically
(minimality, harmonicity, eigenfunction equations, codifferential and
integration residuals) and reports them as named residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import (
    Chart,
    GeometryError,
    OneFormField,
    covariant_mu,
    frame_at,
    laplace_beltrami,
    mean_curvature_vector,
)
from .jets import Jet2, arctan, cos, exp, log, sin, sqrt
from .report import CheckReport, ResidualAccumulator, finalize_report
from .sampling import SampleSpec

__all__ = ["ExampleInstance", "EXAMPLE_IDS", "instantiate", "validate_inputs",
           "default_params"]

VALIDATE_TOLERANCE = 1e-7


@dataclass
class ExampleInstance:
    """A fully evaluable construction: chart, 1-form, phase, and sampling."""

    id: str
    chart: Chart
    mu: OneFormField
    theta: float
    sample_default: SampleSpec
    params: dict
    provenance: str
    aux: dict = field(default_factory=dict)

    @property
    def phi(self) -> float:
        from .austere import cophase

        return cophase(self.theta, self.chart.dim_n, self.chart.dim_k)


def _merge_params(defaults: dict, params: dict | None, example_id: str) -> dict:
    params = dict(params or {})
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"unknown parameters for {example_id}: {sorted(unknown)}")
    merged = dict(defaults)
    merged.update(params)
    return merged


# --- totally geodesic base ----------------------------------------------------

_TG_POTENTIALS = {
    # harmonic potentials on the flat plane (trace-free Hessian)
    "saddle": lambda u: u[0] * u[0] - u[1] * u[1],
    "cross": lambda u: u[0] * u[1],
    "harmonic_cubic": lambda u: u[0] * u[0] * u[0] - 3.0 * u[0] * u[1] * u[1],
    # corruption: positive-definite Hessian, rotated determinant not real
    "bowl": lambda u: u[0] * u[0] + u[1] * u[1],
}


def _build_tg_graph(params):
    p = _merge_params({"potential": "saddle", "theta": math.pi / 2}, params,
                      "tg_graph")
    f = _TG_POTENTIALS[p["potential"]]
    chart = Chart(
        2, 3, lambda u: [u[0], u[1], 0.0], ((-1.5, 1.5), (-1.5, 1.5)),
        normal_reference=(2,), name="flat plane in R^3",
    )

    def mu_components(u):
        fj = f(u)
        return [Jet2(fj.grad[0], fj.hess[0], np.zeros((2, 2))),
                Jet2(fj.grad[1], fj.hess[1], np.zeros((2, 2)))]

    mu = OneFormField(mu_components, name=f"d({p['potential']})")
    spec = SampleSpec(base_box=chart.domain, base_counts=(8, 8),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=101)
    return ExampleInstance(
        id="tg_graph", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params=p,
        provenance="totally geodesic base: graph of a potential 1-form",
        aux={"potential": f},
    )


# --- straight line ------------------------------------------------------------


def _build_line_k1(params):
    p = _merge_params({"a": None, "b": 0.0, "theta": 3 * math.pi / 4}, params,
                      "line_k1")
    from .austere import cophase

    phi = cophase(p["theta"], 3, 1)
    a = -math.tan(phi) if p["a"] is None else float(p["a"])
    b = float(p["b"])
    chart = Chart(1, 3, lambda u: [u[0], 0.0, 0.0], ((-2.0, 2.0),),
                  normal_reference=(1, 2), name="line in R^3")
    mu = OneFormField(lambda u: [a * u[0] + b], name="affine slope")
    spec = SampleSpec(base_box=chart.domain, base_counts=(24,),
                      fiber_box=((-1.0, 1.0), (-1.0, 1.0)),
                      fiber_counts=(3, 3), seed=102)
    return ExampleInstance(
        id="line_k1", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params={**p, "a": a},
        provenance="straight line with affine slope 1-form",
        aux={"a": a, "phi": phi},
    )


# --- minimal graph ------------------------------------------------------------


def _arcsinh(x):
    return log(x + sqrt(x * x + 1.0))


_GRAPH_POTENTIALS = {
    "arctan": lambda u: arctan(u[1] / u[0]),
    "coordinate_u": lambda u: u[0],
    "coordinate_v": lambda u: u[1],
    # real part of the squared conformal coordinate on the helicoid
    "harmonic_square": lambda u: arctan(u[1] / u[0]) * arctan(u[1] / u[0])
    - _arcsinh(sqrt(u[0] * u[0] + u[1] * u[1]))
    * _arcsinh(sqrt(u[0] * u[0] + u[1] * u[1])),
    # corruption: not harmonic on the helicoid graph
    "product_uv": lambda u: u[0] * u[1],
}

_GRAPH_HEIGHTS = {
    "arctan": lambda u: arctan(u[1] / u[0]),
    # corruption: a non-minimal graph
    "paraboloid": lambda u: 0.5 * (u[0] * u[0] + u[1] * u[1]),
}


def _build_minimal_graph_k2(params):
    p = _merge_params(
        {"h": "arctan", "f": "arctan", "theta": math.pi / 2}, params,
        "minimal_graph_k2",
    )
    h = _GRAPH_HEIGHTS[p["h"]]
    f = _GRAPH_POTENTIALS[p["f"]]
    chart = Chart(
        2, 3, lambda u: [u[0], u[1], h(u)], ((0.5, 2.0), (0.5, 2.0)),
        normal_reference=(2,), name="minimal graph over the plane",
    )

    def mu_components(u):
        fj = f(u)
        return [Jet2(fj.grad[0], fj.hess[0], np.zeros((2, 2))),
                Jet2(fj.grad[1], fj.hess[1], np.zeros((2, 2)))]

    mu = OneFormField(mu_components, name=f"d({p['f']})")
    spec = SampleSpec(base_box=chart.domain, base_counts=(10, 10),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=103)
    return ExampleInstance(
        id="minimal_graph_k2", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params=p,
        provenance="minimal graph base with harmonic potential 1-form",
        aux={"height": h, "potential": f},
    )


# --- parallel-ruled cylinder ---------------------------------------------------


def _build_cylinder_thm41(params):
    p = _merge_params(
        {"k_height": "exp_coordinate", "lam": "db", "theta": math.pi / 2},
        params, "cylinder_thm41",
    )
    from .austere import cophase

    phi = cophase(p["theta"], 4, 3)
    sec_phi, tan_phi = 1.0 / math.cos(phi), math.tan(phi)

    # cross-section surface (a, b) -> (b, e^a cos b, e^a sin b) in R^3;
    # the ruled 3-fold is R x that surface, with rulings along x0
    def sigma0(a, b):
        return [b, exp(a) * cos(b), exp(a) * sin(b)]

    k_heights = {
        "exp_coordinate": lambda a, b: a,       # graph is a holomorphic curve
        "quadratic": lambda a, b: a * a,        # corruption: graph not minimal
    }
    k_fn = k_heights[p["k_height"]]
    lams = {
        "db": lambda a, b: (0.0 * a, 1.0 + 0.0 * a),
        "da": lambda a, b: (1.0 + 0.0 * a, 0.0 * a),
        # corruption: not closed
        "a_db": lambda a, b: (0.0 * a, a),
    }
    lam_fn = lams[p["lam"]]

    def m_map(u):
        a, b, w = u
        return [w] + sigma0(a, b)

    def mu_components(u):
        a, b, w = u
        kj = k_fn(a, b)
        la, lb = lam_fn(a, b)
        # pullback of lam, plus sec(phi) d(w k) - tan(phi) w dw
        return [
            la + sec_phi * w * _partial(kj, 0),
            lb + sec_phi * w * _partial(kj, 1),
            sec_phi * kj - tan_phi * w,
        ]

    chart = Chart(3, 4, m_map, ((-0.4, 0.6), (0.2, 1.6), (-1.0, 1.0)),
                  name="parallel-ruled 3-fold in R^4")
    mu = OneFormField(mu_components, name="ruled-cylinder 1-form")
    spec = SampleSpec(base_box=chart.domain, base_counts=(5, 5, 4),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=104)

    def sigma_map(u):
        a, b = u
        return [k_fn(a, b)] + sigma0(a, b)

    sigma_chart = Chart(2, 4, sigma_map, ((-0.4, 0.6), (0.2, 1.6)),
                        name="minimal cross-section in R^4")
    return ExampleInstance(
        id="cylinder_thm41", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params=p,
        provenance="parallel-line ruling through a minimal surface",
        aux={"sigma_chart": sigma_chart, "k_fn": k_fn, "lam_fn": lam_fn,
             "phi": phi},
    )


def _partial(jet, index):
    """First-derivative jet of a Jet2 along one parameter (as Jet2).

    The resulting hessian row is taken from the parent hessian; its own
    second derivatives are not tracked (set to zero), which is only valid
    where the consumer needs first derivatives of the result.
    """
    if not isinstance(jet, Jet2):
        return 0.0
    p = jet.grad.shape[0]
    return Jet2(jet.grad[index], jet.hess[index], np.zeros((p, p)))


# --- split cylinder -------------------------------------------------------------


def _build_split_cylinder(params):
    p = _merge_params(
        {"theta": 3 * math.pi / 4, "slope_rate": None, "check_form": "du",
         "check_scale": 1.0},
        params, "split_cylinder",
    )
    from .austere import cophase

    phi = cophase(p["theta"], 4, 3)
    rate = -math.tan(phi) if p["slope_rate"] is None else float(p["slope_rate"])
    scale = float(p["check_scale"])

    def helicoid(u, v):
        return [_sinh(v) * cos(u), _sinh(v) * sin(u), u]

    def m_map(uvt):
        u, v, t = uvt
        return helicoid(u, v) + [t]

    check_forms = {
        "du": lambda u, v: (scale, 0.0),
        # corruption: closed but not coclosed on the cross-section
        "d_u2": lambda u, v: (2.0 * u * scale, 0.0),
    }
    check = check_forms[p["check_form"]]

    def mu_components(uvt):
        u, v, t = uvt
        cu, cv = check(u, v)
        return [cu, cv, rate * t]

    chart = Chart(3, 4, m_map, ((0.2, 2.6), (-1.0, 1.0), (-1.0, 1.0)),
                  name="minimal-surface cylinder in R^4")
    mu = OneFormField(mu_components, name="harmonic + slope 1-form")
    spec = SampleSpec(base_box=chart.domain, base_counts=(5, 5, 4),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=105)

    sigma_chart = Chart(2, 3, lambda u: helicoid(u[0], u[1]),
                        ((0.2, 2.6), (-1.0, 1.0)),
                        name="helicoid cross-section")
    return ExampleInstance(
        id="split_cylinder", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params={**p, "slope_rate": rate},
        provenance="cylinder over a minimal surface, split-form 1-form",
        aux={"sigma_chart": sigma_chart, "check": check, "phi": phi,
             "rate": rate},
    )


def _sinh(x):
    return (exp(x) - exp(-1.0 * x)) * 0.5


# --- cone over a minimal link ----------------------------------------------------


def _clifford(alpha, beta):
    r = 1.0 / math.sqrt(2.0)
    return [r * cos(alpha), r * sin(alpha), r * cos(beta), r * sin(beta)]


def _unbalanced_torus(alpha, beta):
    return [0.8 * cos(alpha), 0.8 * sin(alpha), 0.6 * cos(beta), 0.6 * sin(beta)]

_CONE_LINKS = {"clifford": _clifford, "unbalanced": _unbalanced_torus}

_CONE_SLOPES = {
    "cos_a": lambda a, b: cos(a),
    "sin_a": lambda a, b: sin(a),
    "cos_b": lambda a, b: cos(b),
    "mix": lambda a, b: cos(a) + 0.5 * sin(b),
    # corruptions: wrong eigenvalue / not an eigenfunction
    "wrong_frequency": lambda a, b: cos(2.0 * a),
    "constant": lambda a, b: 1.0 + 0.0 * a,
}


def _build_cone_eigenfunction(params):
    p = _merge_params(
        {"link": "clifford", "m": "cos_a", "theta": math.pi / 2}, params,
        "cone_eigenfunction",
    )
    link = _CONE_LINKS[p["link"]]
    m_fn = _CONE_SLOPES[p["m"]]

    def m_map(u):
        s, a, b = u
        y = link(a, b)
        return [s * yi for yi in y]

    def mu_components(u):
        s, a, b = u
        m = m_fn(a, b)
        return [m, s * _partial(m, 1), s * _partial(m, 2)]

    chart = Chart(3, 4, m_map, ((0.5, 2.0), (0.2, 5.8), (0.2, 5.8)),
                  name="cone over a torus link")
    mu = OneFormField(mu_components, name="d(slope * radius)")
    spec = SampleSpec(base_box=chart.domain, base_counts=(4, 6, 6),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=106)
    link_chart = Chart(2, 4, lambda u: link(u[0], u[1]), ((0.2, 5.8), (0.2, 5.8)),
                       name="link surface in the 3-sphere")
    return ExampleInstance(
        id="cone_eigenfunction", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params=p,
        provenance="cone over a minimal surface in the sphere",
        aux={"link_chart": link_chart, "m_fn": m_fn, "link": link},
    )


# --- twisted cone -----------------------------------------------------------------


class _BatchDual:
    """Array-valued first-order dual over the two link parameters.

    Plugs into the jet primitives' method hooks so the menu expressions can
    be evaluated (with first derivatives) at all quadrature nodes at once.
    """

    __slots__ = ("val", "da", "db")

    def __init__(self, val, da, db):
        self.val = np.asarray(val, dtype=float)
        self.da = np.broadcast_to(np.asarray(da, dtype=float), self.val.shape)
        self.db = np.broadcast_to(np.asarray(db, dtype=float), self.val.shape)

    def _lift(self, other):
        if isinstance(other, _BatchDual):
            return other
        return _BatchDual(np.full_like(self.val, float(other)), 0.0, 0.0)

    def __add__(self, other):
        o = self._lift(other)
        return _BatchDual(self.val + o.val, self.da + o.da, self.db + o.db)

    __radd__ = __add__

    def __neg__(self):
        return _BatchDual(-self.val, -self.da, -self.db)

    def __sub__(self, other):
        o = self._lift(other)
        return _BatchDual(self.val - o.val, self.da - o.da, self.db - o.db)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return _BatchDual(
            self.val * o.val,
            self.val * o.da + self.da * o.val,
            self.val * o.db + self.db * o.val,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _BatchDual):
            raise TypeError("batch dual division only by constants")
        c = float(other)
        return _BatchDual(self.val / c, self.da / c, self.db / c)

    def _sin(self):
        c = np.cos(self.val)
        return _BatchDual(np.sin(self.val), c * self.da, c * self.db)

    def _cos(self):
        s = -np.sin(self.val)
        return _BatchDual(np.cos(self.val), s * self.da, s * self.db)


def _as_batch(x, template):
    if isinstance(x, _BatchDual):
        return x
    return _BatchDual(np.full_like(template.val, float(x)), 0.0, 0.0)


class _PathIntegrator:
    """Line integral of the closed ruling-base form along axis paths.

    Composite Simpson (fourth order) per segment, with the panel count
    refined until successive refinements agree below 1e-12; integrands are
    evaluated on all nodes at once through :class:`_BatchDual`.
    """

    def __init__(self, pq_fn, base, dim):
        self.pq_fn = pq_fn  # (alpha_arr, beta_arr, want) -> (N, dim)
        self.base = base
        self.dim = dim
        self._value = lru_cache(maxsize=16384)(self._value_uncached)

    def _simpson(self, f, t0, t1, panels):
        h = (t1 - t0) / panels
        nodes = t0 + h * np.arange(panels + 1)
        weights = np.full(panels + 1, 2.0)
        weights[1::2] = 4.0
        weights[0] = weights[-1] = 1.0
        return (weights[:, None] * f(nodes)).sum(axis=0) * (h / 3.0)

    def _segment(self, f, t0, t1):
        if t0 == t1:
            return np.zeros(self.dim)
        panels = max(16, 2 * int(abs(t1 - t0) / 0.05) + 2)
        prev = self._simpson(f, t0, t1, panels)
        for _ in range(10):
            panels *= 2
            cur = self._simpson(f, t0, t1, panels)
            if np.abs(cur - prev).max() < 1e-12:
                return cur
            prev = cur
        raise GeometryError("ruling-base path integration did not converge")

    def _value_uncached(self, alpha, beta):
        a0, b0 = self.base
        first = self._segment(
            lambda t: self.pq_fn(t, np.full_like(t, b0), "P"), a0, alpha
        )
        second = self._segment(
            lambda t: self.pq_fn(np.full_like(t, alpha), t, "Q"), b0, beta
        )
        return first + second

    def __call__(self, alpha, beta):
        return self._value(float(alpha), float(beta))

    def point_form(self, alpha, beta, want):
        """The closed-form coefficients at a single point."""
        out = self.pq_fn(np.array([alpha]), np.array([beta]), want)
        return out[0]

    def loop_integral(self, axis, period=2.0 * math.pi):
        a0, b0 = self.base
        if axis == 0:
            return self._segment(
                lambda t: self.pq_fn(t, np.full_like(t, b0), "P"), a0, a0 + period
            )
        return self._segment(
            lambda t: self.pq_fn(np.full_like(t, a0), t, "Q"), b0, b0 + period
        )


def _build_twisted_cone(params):
    p = _merge_params(
        {"f": "sin_a", "m": "cos_b", "theta": math.pi / 2}, params,
        "twisted_cone",
    )
    f_fn = _CONE_SLOPES[p["f"]]
    m_fn = _CONE_SLOPES[p["m"]]
    link = _clifford
    n_amb = 4

    # dw = Y (*df) - f (*dY); with *da = db, *db = -da on the link:
    #   dalpha coefficient P = -f_b Y + f Y_b,  dbeta coefficient Q = f_a Y - f Y_a
    def _pq(alpha, beta, want):
        a = _BatchDual(alpha, 1.0, 0.0)
        b = _BatchDual(beta, 0.0, 1.0)
        y = [_as_batch(c, a) for c in link(a, b)]
        f = _as_batch(f_fn(a, b), a)
        if want == "P":
            cols = [-f.db * yi.val + f.val * yi.db for yi in y]
        else:
            cols = [f.da * yi.val - f.val * yi.da for yi in y]
        return np.stack(cols, axis=-1)

    base_point = (0.1, 0.1)
    integrator = _PathIntegrator(_pq, base_point, n_amb)

    def m_map(u):
        aj, bj, tj = u
        y = link(aj, bj)
        f = f_fn(aj, bj)
        w_val = integrator(aj.val, bj.val)
        # jet of w: value integrated, derivatives from the closed form itself
        pj = [-_partial(f, 1) * yi + f * _partial(yi, 1) for yi in y]
        qj = [_partial(f, 0) * yi - f * _partial(yi, 0) for yi in y]
        out = []
        for i in range(n_amb):
            grad = pj[i].val * aj.grad + qj[i].val * bj.grad
            m = np.outer(aj.grad, pj[i].grad) + np.outer(bj.grad, qj[i].grad)
            w_jet = Jet2(w_val[i], grad, 0.5 * (m + m.T))
            out.append(w_jet + tj * y[i])
        return out

    def mu_components(u):
        aj, bj, tj = u
        f = f_fn(aj, bj)
        m = m_fn(aj, bj)
        fa, fb = _partial(f, 0), _partial(f, 1)
        ma, mb = _partial(m, 0), _partial(m, 1)
        return [
            -1.0 * m * fb + f * mb + tj * ma,
            m * fa - f * ma + tj * mb,
            m,
        ]

    chart = Chart(3, 4, m_map, ((0.15, 1.5), (0.15, 1.5), (0.5, 2.0)),
                  name="twisted cone over a spherical link")
    mu = OneFormField(mu_components, name="twisted-cone slope form")
    spec = SampleSpec(base_box=chart.domain, base_counts=(5, 5, 4),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=107)
    link_chart = Chart(2, 4, lambda u: link(u[0], u[1]), ((0.1, 6.0), (0.1, 6.0)),
                       name="link surface in the 3-sphere")
    return ExampleInstance(
        id="twisted_cone", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params=p,
        provenance="twisted cone over a minimal surface in the sphere",
        aux={"integrator": integrator, "link_chart": link_chart,
             "f_fn": f_fn, "m_fn": m_fn, "link": link},
    )


# --- torus cone family -------------------------------------------------------------


def _build_nonsplit_torus_cone(params):
    p = _merge_params(
        {"a": 1.0, "c": (1.0, 0.0, 0.0, 0.0, 0.5), "theta": math.pi / 2,
         "m_override": None},
        params, "nonsplit_torus_cone",
    )
    a = float(p["a"])
    if a <= 0:
        raise ValueError("torus parameter a must be positive")
    c = tuple(float(x) for x in p["c"])
    if len(c) != 5:
        raise ValueError("expected five slope constants")

    def torus(t, u):
        return [cos(t) * cos(a * u), cos(t) * sin(a * u),
                sin(t) * cos(u / a), sin(t) * sin(u / a)]

    def slope(t, u):
        return (c[0] * cos(a * u) + c[1] * sin(a * u)) * cos(t) + (
            c[2] * cos(u / a) + c[3] * sin(u / a)
        ) * sin(t)

    overrides = {
        None: slope,
        # corruption: not a -2 eigenfunction of the link Laplacian
        "wrong_frequency": lambda t, u: cos(2.0 * a * u) * cos(t),
    }
    m_fn = overrides[p["m_override"]]

    def m_map(x):
        s, t, u = x
        return [s * yi for yi in torus(t, u)]

    def mu_components(x):
        s, t, u = x
        m = m_fn(t, u)
        return [m, s * _partial(m, 1), s * _partial(m, 2) + c[4]]

    chart = Chart(3, 4, m_map, ((0.5, 2.0), (0.15, 1.4), (0.1, 2.8)),
                  name="cone over the two-parameter torus")
    mu = OneFormField(mu_components, name="slope form plus closed angular term")
    spec = SampleSpec(base_box=chart.domain, base_counts=(4, 6, 6),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=108)
    link_chart = Chart(2, 4, lambda u: torus(u[0], u[1]), ((0.15, 1.4), (0.1, 2.8)),
                       name="torus link in the 3-sphere")
    return ExampleInstance(
        id="nonsplit_torus_cone", chart=chart, mu=mu, theta=p["theta"],
        sample_default=spec, params={**p, "a": a, "c": c},
        provenance="cone over the torus family with five slope constants",
        aux={"link_chart": link_chart, "m_fn": m_fn, "torus": torus},
    )


_BUILDERS = {
    "tg_graph": _build_tg_graph,
    "line_k1": _build_line_k1,
    "minimal_graph_k2": _build_minimal_graph_k2,
    "cylinder_thm41": _build_cylinder_thm41,
    "split_cylinder": _build_split_cylinder,
    "cone_eigenfunction": _build_cone_eigenfunction,
    "twisted_cone": _build_twisted_cone,
    "nonsplit_torus_cone": _build_nonsplit_torus_cone,
}

EXAMPLE_IDS = tuple(sorted(_BUILDERS))


def default_params(example_id: str) -> dict:
    return dict(instantiate(example_id).params)


def instantiate(example_id: str, params: dict | None = None) -> ExampleInstance:
    """Build a catalog example; deterministic given (id, params)."""
    try:
        builder = _BUILDERS[example_id]
    except KeyError:
        raise ValueError(
            f"unknown example '{example_id}'; choose from {EXAMPLE_IDS}"
        ) from None
    return builder(params)


# --- hypothesis validation -----------------------------------------------------


def _minimality_residuals(chart, points, acc):
    for u in points:
        try:
            h = mean_curvature_vector(chart, u)
        except GeometryError:
            acc.skip()
            continue
        acc.add(np.linalg.norm(h))


def _sphere_minimality_residuals(link_chart, points, acc_r, acc_min):
    """|Y|=1 and tangential (in-sphere) mean curvature of the link."""
    for u in points:
        try:
            frame = frame_at(link_chart, u)
            h = mean_curvature_vector(link_chart, u, frame)
            jets_y = [j.val for j in _chart_values(link_chart, u)]
        except GeometryError:
            acc_r.skip()
            acc_min.skip()
            continue
        y = np.array(jets_y)
        acc_r.add(abs(float(y @ y) - 1.0))
        acc_min.add(np.linalg.norm(h - (h @ y) * y))


def _chart_values(chart, u):
    from .jets import eval_map_jet2

    return eval_map_jet2(chart.mapping, u)


def _eigenfunction_residuals(link_chart, m_fn, points, acc, eigenvalue=-2.0):
    for u in points:
        try:
            lap = laplace_beltrami(link_chart, lambda x: m_fn(x[0], x[1]), u)
            m_val = m_fn(Jet2.variable(u[0], 0, 2), Jet2.variable(u[1], 1, 2))
            m_val = m_val.val if isinstance(m_val, Jet2) else m_val
        except GeometryError:
            acc.skip()
            continue
        acc.add(lap - eigenvalue * m_val)


def _oneform_harmonic_residuals(chart, form, points, acc_closed, acc_coclosed):
    for u in points:
        try:
            frame = frame_at(chart, u)
            B, dresid = covariant_mu(chart, form, u, frame)
        except GeometryError:
            acc_closed.skip()
            acc_coclosed.skip()
            continue
        acc_closed.add(dresid)
        acc_coclosed.add(np.trace(B))


def validate_inputs(instance: ExampleInstance, samples=None) -> CheckReport:
    """Numerically re-check the construction hypotheses of an instance."""
    if samples is None:
        samples = instance.sample_default
    accs: list[ResidualAccumulator] = []
    notes: dict = {}
    tol = VALIDATE_TOLERANCE

    def acc(name):
        a = ResidualAccumulator(name, tol)
        accs.append(a)
        return a

    ex = instance.id
    base_points = samples.base_points()

    if ex == "tg_graph":
        a_phase = acc("graph_phase_det")
        f = instance.aux["potential"]
        phi = instance.phi
        for u in base_points:
            fj = f([Jet2.variable(u[0], 0, 2), Jet2.variable(u[1], 1, 2)])
            detc = np.linalg.det(np.eye(2) + 1j * fj.hess)
            a_phase.add((np.exp(1j * phi) * detc).imag / abs(detc))

    elif ex == "line_k1":
        a_rate = acc("slope_rate")
        phi = instance.aux["phi"]
        target = -math.tan(phi)
        for u in base_points:
            frame = frame_at(instance.chart, u)
            B, _ = covariant_mu(instance.chart, instance.mu, u, frame)
            a_rate.add(B[0, 0] - target)

    elif ex == "minimal_graph_k2":
        a_min = acc("base_minimality")
        a_harm = acc("potential_harmonic")
        h = instance.aux["height"]
        f = instance.aux["potential"]
        for u in base_points:
            hj = h([Jet2.variable(u[0], 0, 2), Jet2.variable(u[1], 1, 2)])
            fj = f([Jet2.variable(u[0], 0, 2), Jet2.variable(u[1], 1, 2)])
            hu, hv = hj.grad
            a_min.add(
                (1 + hv * hv) * hj.hess[0, 0]
                + (1 + hu * hu) * hj.hess[1, 1]
                - 2 * hu * hv * hj.hess[0, 1]
            )
            a_harm.add(
                (1 + hv * hv) * fj.hess[0, 0]
                + (1 + hu * hu) * fj.hess[1, 1]
                - 2 * hu * hv * fj.hess[0, 1]
            )

    elif ex == "cylinder_thm41":
        sigma = instance.aux["sigma_chart"]
        pts2 = SampleSpec(base_box=sigma.domain, base_counts=(8, 8),
                          seed=samples.seed).base_points()
        a_min = acc("section_minimality")
        _minimality_residuals(sigma, pts2, a_min)
        a_trans = acc("ruling_transversality")
        a_closed = acc("lam_closed")
        a_codiff = acc("lam_codifferential")
        lam_fn = instance.aux["lam_fn"]
        k_fn = instance.aux["k_fn"]
        phi = instance.aux["phi"]

        def lam_form(u):
            la, lb = lam_fn(u[0], u[1])
            return [la, lb]

        lam_field = OneFormField(lam_form)
        for u in pts2:
            try:
                frame = frame_at(sigma, u)
                B, dresid = covariant_mu(sigma, lam_field, u, frame)
                kj = k_fn(Jet2.variable(u[0], 0, 2), Jet2.variable(u[1], 1, 2))
                if not isinstance(kj, Jet2):
                    kj = Jet2.constant(kj, 2)
                grad_sq = float(kj.grad @ frame.g_inv @ kj.grad)
                jac = _chart_values(sigma, u)
                proj = np.array([j.grad for j in jac[1:]])
                sv = np.linalg.svd(proj, compute_uv=False)
            except GeometryError:
                for a in (a_trans, a_closed, a_codiff):
                    a.skip()
                continue
            a_trans.add(0.0 if sv[-1] > 1e-6 else 1.0)
            a_closed.add(dresid)
            a_codiff.add(np.trace(B) + math.tan(phi) * grad_sq)

    elif ex == "split_cylinder":
        sigma = instance.aux["sigma_chart"]
        pts2 = SampleSpec(base_box=sigma.domain, base_counts=(8, 8),
                          seed=samples.seed).base_points()
        a_min = acc("section_minimality")
        _minimality_residuals(sigma, pts2, a_min)
        a_closed = acc("check_form_closed")
        a_coclosed = acc("check_form_coclosed")
        check = instance.aux["check"]
        form = OneFormField(lambda u: list(check(u[0], u[1])))
        _oneform_harmonic_residuals(sigma, form, pts2, a_closed, a_coclosed)
        a_rate = acc("slope_rate")
        phi = instance.aux["phi"]
        a_rate.add(instance.aux["rate"] + math.tan(phi))

    elif ex == "cone_eigenfunction":
        link = instance.aux["link_chart"]
        pts2 = SampleSpec(base_box=link.domain, base_counts=(10, 10),
                          seed=samples.seed).base_points()
        a_r = acc("link_on_sphere")
        a_min = acc("link_minimality")
        _sphere_minimality_residuals(link, pts2, a_r, a_min)
        a_eig = acc("slope_eigenfunction")
        _eigenfunction_residuals(link, instance.aux["m_fn"], pts2, a_eig)

    elif ex == "twisted_cone":
        link = instance.aux["link_chart"]
        pts2 = SampleSpec(base_box=link.domain, base_counts=(10, 10),
                          seed=samples.seed).base_points()
        a_r = acc("link_on_sphere")
        a_min = acc("link_minimality")
        _sphere_minimality_residuals(link, pts2, a_r, a_min)
        a_feig = acc("ruling_fn_eigenfunction")
        _eigenfunction_residuals(link, instance.aux["f_fn"], pts2, a_feig)
        a_meig = acc("slope_eigenfunction")
        _eigenfunction_residuals(link, instance.aux["m_fn"], pts2, a_meig)
        a_int = acc("path_integration")
        integ = instance.aux["integrator"]
        rng = np.random.default_rng(samples.seed)
        for u in rng.uniform(0.3, 1.3, size=(12, 2)):
            h = 1e-5
            dnum = (np.array(integ(u[0] + h, u[1])) - integ(u[0] - h, u[1])) / (2 * h)
            closed_form = integ.point_form(u[0], u[1], "P")
            a_int.add(
                np.abs(dnum - closed_form).max() / (1.0 + np.abs(dnum).max())
            )
        notes["holonomy_alpha"] = [float(v) for v in integ.loop_integral(0)]
        notes["holonomy_beta"] = [float(v) for v in integ.loop_integral(1)]

    elif ex == "nonsplit_torus_cone":
        link = instance.aux["link_chart"]
        pts2 = SampleSpec(base_box=link.domain, base_counts=(10, 10),
                          seed=samples.seed).base_points()
        a_r = acc("link_on_sphere")
        a_min = acc("link_minimality")
        _sphere_minimality_residuals(link, pts2, a_r, a_min)
        a_eig = acc("slope_eigenfunction")
        _eigenfunction_residuals(link, instance.aux["m_fn"], pts2, a_eig)
        notes["mixed_slope_ratio"] = _measure_mixed_slope_ratio(instance, samples)

    else:  # pragma: no cover
        raise ValueError(f"no validation defined for {ex}")

    report = finalize_report(
        f"construction hypotheses: {instance.id}", accs,
        seed=samples.seed, notes=notes,
    )
    return report


def _measure_mixed_slope_ratio(instance, samples) -> dict:
    """Measured (not asserted) ratio of the squared mixed derivative entry
    of the covariant slope tensor to curvature x radius^-3."""
    from .geometry import full_frame_data

    ratios = []
    for u in samples.base_points()[:24]:
        try:
            frame = full_frame_data(instance.chart, instance.mu, u)
        except GeometryError:
            continue
        B = frame.B
        A = frame.II[0]
        mixed_sq = B[0, 1] ** 2 + B[0, 2] ** 2
        h = np.linalg.norm(A) / math.sqrt(2.0)
        s = u[0]
        if h > 1e-12 and mixed_sq > 1e-14:
            ratios.append(mixed_sq * s**3 / h)
    if not ratios:
        return {"count": 0}
    return {
        "count": len(ratios),
        "mean": float(np.mean(ratios)),
        "std": float(np.std(ratios)),
    }
