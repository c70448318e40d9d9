"""Immersion construction and calibration residuals."""

import math

import numpy as np
import pytest

from conormal import jets, slag
from conormal.geometry import Chart, GeometryError, OneFormField
from conormal.sampling import SampleSpec


def flat_chart(n=3):
    return Chart(2, n, lambda u: [u[0], u[1]] + [0.0] * (n - 2),
                 ((-2, 2), (-2, 2)), name="flat")


def helicoid_chart():
    return Chart(
        2, 3, lambda u: [u[0], u[1], jets.arctan(u[1] / u[0])],
        ((0.5, 2.0), (0.5, 2.0)), normal_reference=(2,), name="helicoid graph",
    )


def helicoid_mu():
    def dh(u):
        r2 = u[0] * u[0] + u[1] * u[1]
        return [-u[1] / r2, u[0] / r2]

    return OneFormField(dh)


def paper_closed_form(u, v, t):
    """Frozen closed form of the twisted conormal over the helicoid graph.

    The fiber coordinate here scales the non-normalized conormal direction
    (-h_u, -h_v, 1); the pipeline's coordinate is along the unit normal.
    """
    r2 = u * u + v * v
    w = 1.0 + r2
    y1 = v * (t * w - r2) / (r2 * w)
    y2 = -u * (t * w - r2) / (r2 * w)
    y3 = (1.0 + t * w) / w
    return np.array([u, v, math.atan2(v, u)]), np.array([y1, y2, y3])


def conormal_scale(u, v):
    """Length of (-h_u, -h_v, 1) for the helicoid graph height."""
    r2 = u * u + v * v
    return math.sqrt(1.0 + 1.0 / r2)


def test_flat_base_zero_mu_is_coordinate_plane(rng):
    imm = slag.build_immersion(flat_chart(), None)
    for _ in range(5):
        u = rng.uniform(-1.5, 1.5, size=2)
        t = rng.uniform(-1, 1, size=1)
        x, y = imm.eval(u, t)
        assert np.allclose(x, [u[0], u[1], 0.0])
        assert np.allclose(y, [0.0, 0.0, t[0]])
        res = slag.calibration_residuals(imm, u, t, math.pi / 2)
        assert res.lagrangian < 1e-15
        assert res.phase < 1e-15


def test_helicoid_matches_closed_form(rng):
    imm = slag.build_immersion(helicoid_chart(), helicoid_mu())
    for _ in range(25):
        u, v = rng.uniform(0.6, 1.9, size=2)
        t = rng.uniform(-1.0, 1.0)
        x_want, y_want = paper_closed_form(u, v, t)
        x, y = imm.eval([u, v], [t * conormal_scale(u, v)])
        assert np.allclose(x, x_want, atol=1e-12)
        assert np.allclose(y, y_want, atol=1e-12)


def test_helicoid_anchor_value():
    imm = slag.build_immersion(helicoid_chart(), helicoid_mu())
    x, y = imm.eval([1.0, 1.0], [conormal_scale(1.0, 1.0)])
    assert np.allclose(x, [1.0, 1.0, math.pi / 4], atol=1e-15)
    assert np.allclose(y, [1 / 6, -1 / 6, 4 / 3], atol=1e-12)


def test_line_base_gives_affine_plane(rng):
    theta = 3 * math.pi / 4
    from conormal.austere import cophase

    a = -math.tan(cophase(theta, 3, 1))
    chart = Chart(1, 3, lambda u: [u[0], 0.0, 0.0], ((-2, 2),))
    mu = OneFormField(lambda u: [a * u[0] + 0.3])
    imm = slag.build_immersion(chart, mu)
    blocks = []
    for _ in range(4):
        u = rng.uniform(-1.5, 1.5, size=1)
        t = rng.uniform(-1, 1, size=2)
        x, y, X, Y = imm.differential(u, t)
        blocks.append((X, Y))
        res = slag.calibration_residuals(imm, u, t, theta)
        assert res.lagrangian < 1e-14
        assert res.phase < 1e-14
    for X, Y in blocks[1:]:
        assert np.allclose(X, blocks[0][0], atol=1e-13)
        assert np.allclose(Y, blocks[0][1], atol=1e-13)


def test_differential_matches_finite_differences(rng):
    imm = slag.build_immersion(helicoid_chart(), helicoid_mu())
    u0 = np.array([1.1, 0.9])
    t0 = np.array([0.4])
    _, _, X, Y = imm.differential(u0, t0)
    h = 1e-6
    for b in range(2):
        e = np.zeros(2)
        e[b] = h
        xp, yp = imm.eval(u0 + e, t0)
        xm, ym = imm.eval(u0 - e, t0)
        assert np.allclose(X[:, b], (xp - xm) / (2 * h), atol=1e-9)
        assert np.allclose(Y[:, b], (yp - ym) / (2 * h), atol=1e-9)
    xp, yp = imm.eval(u0, t0 + h)
    xm, ym = imm.eval(u0, t0 - h)
    assert np.allclose(X[:, 2], 0.0)
    assert np.allclose(Y[:, 2], (yp - ym) / (2 * h), atol=1e-9)


def test_corrupted_mu_detected(rng):
    def bad_mu(u):
        r2 = u[0] * u[0] + u[1] * u[1]
        return [-u[1] / r2 + 0.1 * u[1], u[0] / r2]

    imm = slag.build_immersion(helicoid_chart(), OneFormField(bad_mu))
    worst = 0.0
    for _ in range(10):
        u = rng.uniform(0.6, 1.9, size=2)
        res = slag.calibration_residuals(imm, u, [0.5], math.pi / 2)
        worst = max(worst, res.lagrangian)
    assert worst > 1e-3


def test_fiber_translation_invariance(rng):
    imm = slag.build_immersion(helicoid_chart(), helicoid_mu())
    u = np.array([1.3, 0.7])
    vals = []
    for t in (-0.9, -0.2, 0.5, 1.4, 3.0):
        res = slag.calibration_residuals(imm, u, [t], math.pi / 2)
        vals.append((res.lagrangian, res.phase))
    for lag, ph in vals:
        assert abs(lag - vals[0][0]) < 1e-9
        assert abs(ph - vals[0][1]) < 1e-9


def test_reparametrization_invariance(rng):
    theta = math.pi / 2
    imm1 = slag.build_immersion(helicoid_chart(), helicoid_mu())

    # compose base coordinates with a diffeomorphism of the parameter box
    def remap(s):
        return 0.6 + 0.5 * s[0] + 0.1 * jets.sin(s[1]), 0.7 + 0.4 * s[1]

    def chart_map(s):
        u, v = remap(s)
        return [u, v, jets.arctan(v / u)]

    def mu_map(s):
        # pull back the 1-form: mu'_a = mu_b du^b/ds^a
        u, v = remap(s)
        r2 = u * u + v * v
        mu_u, mu_v = -v / r2, u / r2
        du_ds = [0.5, 0.1 * jets.cos(s[1])]
        dv_ds = [0.0, 0.4]
        return [mu_u * du_ds[0] + mu_v * dv_ds[0],
                mu_u * du_ds[1] + mu_v * dv_ds[1]]

    chart2 = Chart(2, 3, chart_map, ((0.0, 1.5), (0.0, 1.5)),
                   normal_reference=(2,), name="reparametrized helicoid")
    imm2 = slag.build_immersion(chart2, OneFormField(mu_map))
    for _ in range(8):
        s = rng.uniform(0.1, 1.4, size=2)
        r2 = slag.calibration_residuals(imm2, s, [0.3], theta)
        assert r2.lagrangian < 1e-8
        assert r2.phase < 1e-8
    spec = SampleSpec(base_box=chart2.domain, base_counts=(5, 5), seed=6)
    rep = slag.verify_special_lagrangian(chart2, OneFormField(mu_map), theta, spec)
    assert rep.verdict == "pass"


def test_orientation_flip_leaves_phase_quotient(rng):
    # swapping the two base parameters flips orientation of the tangent
    # basis; the unsigned phase quotient must not move
    imm1 = slag.build_immersion(helicoid_chart(), helicoid_mu())
    swapped = Chart(
        2, 3, lambda u: [u[1], u[0], jets.arctan(u[0] / u[1])],
        ((0.5, 2.0), (0.5, 2.0)), normal_reference=(2,), name="swapped",
    )

    def mu_swapped(u):
        r2 = u[0] * u[0] + u[1] * u[1]
        return [u[1] / r2, -u[0] / r2]

    imm2 = slag.build_immersion(swapped, OneFormField(mu_swapped))
    u = np.array([1.2, 0.8])
    r1 = slag.calibration_residuals(imm1, u, [0.5], math.pi / 2)
    r2 = slag.calibration_residuals(imm2, u[::-1], [0.5], math.pi / 2)
    assert abs(r1.phase - r2.phase) < 1e-12
    assert r1.lagrangian < 1e-12 and r2.lagrangian < 1e-12


def test_non_minimal_base_phase_residual():
    chart = Chart(
        2, 3, lambda u: [u[0], u[1], 0.5 * (u[0] ** 2 + u[1] ** 2)],
        ((-1, 1), (-1, 1)), normal_reference=(2,), name="paraboloid",
    )
    spec = SampleSpec(base_box=chart.domain, base_counts=(5, 5), seed=8)
    rep = slag.verify_special_lagrangian(chart, None, math.pi / 2, spec)
    assert rep.verdict == "fail"
    assert rep.condition("phase").max > 1e-3
    assert rep.condition("lagrangian").max < 1e-12  # conormal is Lagrangian


def test_verify_report_counts_and_notes():
    chart = helicoid_chart()
    spec = SampleSpec(base_box=chart.domain, base_counts=(4, 4),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(3,), seed=9)
    rep = slag.verify_special_lagrangian(chart, helicoid_mu(), math.pi / 2, spec)
    assert rep.verdict == "pass"
    assert rep.condition("lagrangian").count == 48
    assert "re_sign_counts" in rep.notes


def test_sample_rows_fields():
    chart = helicoid_chart()
    spec = SampleSpec(base_box=chart.domain, base_counts=(3, 3),
                      fiber_box=((-1.0, 1.0),), fiber_counts=(2,), seed=10)
    rows = list(slag.sample_rows(chart, helicoid_mu(), math.pi / 2, spec))
    assert len(rows) == 18
    first = rows[0]
    assert first.x.shape == (3,) and first.y.shape == (3,)
    assert first.point_base.shape == (2,) and first.point_fiber.shape == (1,)
