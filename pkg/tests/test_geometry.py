"""Frames, curvature, and covariant derivatives against independent oracles."""

import math

import numpy as np
import pytest

from conormal import geometry as geo
from conormal import jets
from conormal.geometry import (
    Chart,
    DegenerateReferenceError,
    ImmersionError,
    OneFormField,
)

from conftest import fd_mean_curvature, fd_laplace_beltrami, fd_metric


def flat_chart():
    return Chart(2, 3, lambda u: [u[0], u[1], 0.0], ((-3, 3), (-3, 3)),
                 normal_reference=(2,), name="flat")


def helicoid_graph():
    return Chart(
        2, 3, lambda u: [u[0], u[1], jets.arctan(u[1] / u[0])],
        ((0.5, 2.0), (0.5, 2.0)), normal_reference=(2,), name="helicoid graph",
    )


def sphere_chart():
    def smap(u):
        th, ph = u
        return [
            jets.sin(th) * jets.cos(ph),
            jets.sin(th) * jets.sin(ph),
            jets.cos(th),
        ]

    return Chart(2, 3, smap, ((0.4, 2.6), (0.1, 3.0)), name="unit sphere")


def test_flat_chart_frame():
    fr = geo.frame_at(flat_chart(), [0.7, -1.2])
    assert np.allclose(fr.g, np.eye(2))
    assert np.abs(fr.christoffels).max() == 0.0
    assert np.allclose(fr.normal_frame[:, 0], [0, 0, 1])
    A = geo.second_fundamental_form(flat_chart(), [0.7, -1.2], fr)
    assert np.abs(A[0]).max() == 0.0


def test_helicoid_metric_hand_value():
    fr = geo.frame_at(helicoid_graph(), [1.0, 1.0])
    assert np.allclose(fr.g, [[1.25, -0.25], [-0.25, 1.25]], atol=1e-14)


def test_line_chart():
    line = Chart(1, 3, lambda u: [u[0], 0.0, 0.0], ((-3, 3),))
    fr = geo.frame_at(line, [0.4])
    assert np.allclose(fr.g, [[1.0]])
    assert np.allclose(fr.normal_frame.T, [[0, 1, 0], [0, 0, 1]])


def test_cylinder_second_fundamental_form():
    cyl = Chart(
        2, 3, lambda u: [jets.cos(u[0]), jets.sin(u[0]), u[1]],
        ((0.1, 3.0), (-1, 1)),
    )
    fr = geo.frame_at(cyl, [0.8, 0.2])
    A = geo.second_fundamental_form(cyl, [0.8, 0.2], fr)[0]
    # unit circle curvature: eigenvalue magnitudes (1, 0)
    eig = np.sort(np.abs(np.linalg.eigvalsh(A)))
    assert np.allclose(eig, [0.0, 1.0], atol=1e-12)


def test_frame_orthonormality_random_charts(rng):
    chart = sphere_chart()
    for _ in range(10):
        u = rng.uniform([0.5, 0.2], [2.5, 2.9])
        fr = geo.frame_at(chart, u)
        F = np.hstack([fr.tangent_frame, fr.normal_frame])
        assert np.abs(F.T @ F - np.eye(3)).max() < 1e-12


def test_trace_conversion_consistency(rng):
    chart = helicoid_graph()
    for _ in range(10):
        u = rng.uniform(0.6, 1.9, size=2)
        fr = geo.frame_at(chart, u)
        A = geo.second_fundamental_form(chart, u, fr)[0]
        _, _, H = geo.chart_jets(chart, u)
        h_coord = np.einsum("iab,i->ab", H, fr.normal_frame[:, 0])
        assert abs(np.trace(A) - np.einsum("ab,ab->", fr.g_inv, h_coord)) < 1e-10


def test_christoffels_against_metric_differences(rng):
    chart = sphere_chart()
    for _ in range(5):
        u = rng.uniform([0.6, 0.3], [2.4, 2.7])
        fr = geo.frame_at(chart, u)
        h = 1e-5
        dg = np.empty((2, 2, 2))
        for c in range(2):
            e = np.zeros(2)
            e[c] = h
            dg[c] = (fd_metric(chart, u + e) - fd_metric(chart, u - e)) / (2 * h)
        gamma_low = 0.5 * (
            np.einsum("abc->cab", dg) + np.einsum("bac->cab", dg) - dg
        )
        oracle = np.einsum("dc,cab->dab", fr.g_inv, gamma_low)
        assert np.abs(oracle - fr.christoffels).max() < 1e-5


def test_mean_curvature_sphere():
    chart = sphere_chart()
    h = geo.mean_curvature_vector(chart, [1.1, 0.9])
    assert np.linalg.norm(h) == pytest.approx(2.0, abs=1e-10)
    oracle = fd_mean_curvature(chart, [1.1, 0.9])
    assert np.allclose(h, oracle, atol=1e-5)


def test_covariant_mu_gradient_field():
    chart = flat_chart()
    mu = OneFormField(lambda u: [2.0 * u[0], 2.0 * u[1]])
    fr = geo.frame_at(chart, [1.0, 1.0])
    B, dresid = geo.covariant_mu(chart, mu, [1.0, 1.0], fr)
    assert np.allclose(B, 2.0 * np.eye(2))
    assert dresid == 0.0


def test_covariant_mu_detects_nonclosed():
    chart = flat_chart()
    mu = OneFormField(lambda u: [u[1], 0.0])
    fr = geo.frame_at(chart, [0.3, 0.3])
    _, dresid = geo.covariant_mu(chart, mu, [0.3, 0.3], fr)
    assert dresid == pytest.approx(1.0)


def test_covariant_mu_helicoid_trace():
    chart = helicoid_graph()

    def dh(u):
        r2 = u[0] * u[0] + u[1] * u[1]
        return [-u[1] / r2, u[0] / r2]

    u = [1.3, 0.8]
    fr = geo.frame_at(chart, u)
    B, dresid = geo.covariant_mu(chart, OneFormField(dh), u, fr)
    assert dresid < 1e-14
    assert abs(np.trace(B)) < 1e-12  # harmonic potential on a minimal graph
    assert np.abs(B - B.T).max() < 1e-12


def test_covariant_mu_matches_hessian_route(rng):
    # for mu = df, B in the orthonormal frame equals the congruence-converted
    # coordinate Hessian minus the Christoffel contraction
    chart = sphere_chart()

    def f_expr(u):
        return jets.sin(u[0]) * jets.cos(u[1])

    def df(u):
        fj = f_expr(u)
        return [
            jets.Jet2(fj.grad[0], fj.hess[0], np.zeros((2, 2))),
            jets.Jet2(fj.grad[1], fj.hess[1], np.zeros((2, 2))),
        ]

    for _ in range(5):
        u = rng.uniform([0.6, 0.3], [2.4, 2.7])
        fr = geo.frame_at(chart, u)
        B, _ = geo.covariant_mu(chart, OneFormField(df), u, fr)
        fj = jets.eval_jet2(f_expr, u)
        coord = fj.hess - np.einsum("cab,c->ab", fr.christoffels, fj.grad)
        S = fr.tangent_change
        assert np.abs(B - S.T @ coord @ S).max() < 1e-10
        # trace equals the Laplace-Beltrami of the potential
        lap = geo.laplace_beltrami(chart, f_expr, u)
        assert abs(np.trace(B) - lap) < 1e-10


def test_laplace_beltrami_sphere_eigenfunction(rng):
    chart = sphere_chart()
    for _ in range(5):
        u = rng.uniform([0.6, 0.3], [2.4, 2.7])
        lap = geo.laplace_beltrami(chart, lambda x: jets.cos(x[0]), u)
        assert lap == pytest.approx(-2.0 * math.cos(u[0]), abs=1e-10)
        oracle = fd_laplace_beltrami(
            chart, lambda p: math.cos(p[0]), u, h=5e-3
        )
        assert lap == pytest.approx(oracle, abs=1e-6)


def test_rank_deficient_jacobian_raises():
    degenerate = Chart(2, 3, lambda u: [u[0], u[0], 0.0], ((-1, 1), (-1, 1)))
    with pytest.raises(ImmersionError):
        geo.frame_at(degenerate, [0.1, 0.1])


def test_degenerate_normal_reference_raises():
    chart = Chart(2, 3, lambda u: [u[0], u[1], 0.0], ((-1, 1), (-1, 1)),
                  normal_reference=(0,))
    with pytest.raises(DegenerateReferenceError):
        geo.frame_at(chart, [0.0, 0.0])


def test_out_of_domain_point_rejected():
    with pytest.raises(geo.GeometryError):
        geo.frame_at(flat_chart(), [10.0, 0.0])


def test_chart_validation():
    with pytest.raises(ValueError):
        Chart(3, 3, lambda u: list(u), ((-1, 1),) * 3)
    with pytest.raises(ValueError):
        Chart(2, 3, lambda u: [u[0], u[1], 0.0], ((-1, 1),))
