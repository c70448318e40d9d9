"""Symmetric polynomial coefficients, adjugate, and the identity family."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conormal import polyalg


def well_conditioned(k, floor=0.1):
    return arrays(
        float, (k, k), elements=st.floats(-2, 2, allow_nan=False)
    ).filter(lambda a: abs(np.linalg.det(a)) > floor)


def test_sigma_identity_matrix():
    assert np.allclose(polyalg.sigma_all(np.eye(3)), [1, 3, 3, 1])


def test_sigma_diagonal():
    assert np.allclose(polyalg.sigma_all(np.diag([1.0, 2.0, 3.0])), [1, 6, 11, 6])


def test_sigma_complex_shift_parts():
    # det(I + iB) has real part 1 - sigma_2(B), imaginary sigma_1 - sigma_3
    rng = np.random.default_rng(5)
    for _ in range(20):
        lam = rng.uniform(-2, 2)
        B = np.diag([lam, lam, lam])
        s = polyalg.sigma_all(B)
        det = np.linalg.det(np.eye(3) + 1j * B)
        assert det.real == pytest.approx(1 - s[2], rel=1e-12, abs=1e-12)
        assert det.imag == pytest.approx(s[1] - s[3], rel=1e-12, abs=1e-12)


def test_adjugate_diagonal():
    got = polyalg.adjugate(np.diag([2.0, 3.0, 5.0]))
    assert np.allclose(got, np.diag([15.0, 10.0, 6.0]))


def test_adjugate_identity_and_1x1():
    for k in (1, 2, 3, 4, 5):
        assert np.allclose(polyalg.adjugate(np.eye(k)), np.eye(k))
    assert np.allclose(polyalg.adjugate(np.array([[7.0]])), [[1.0]])


def test_adjugate_against_lu_inverse():
    rng = np.random.default_rng(0)
    A = rng.uniform(-2, 2, size=(4, 4))
    while abs(np.linalg.det(A)) < 0.5:
        A = rng.uniform(-2, 2, size=(4, 4))
    oracle = np.linalg.det(A) * np.linalg.inv(A)
    rel = np.abs(polyalg.adjugate(A) - oracle) / (1.0 + np.abs(oracle))
    assert rel.max() < 1e-10


def test_adjugate_defining_property_singular_too():
    rng = np.random.default_rng(1)
    v = rng.normal(size=3)
    A = np.outer(v, v)  # rank one, det 0
    assert np.allclose(polyalg.adjugate(A) @ A, 0.0, atol=1e-12)


def test_sigma2_form_values():
    assert polyalg.sigma2_form(np.eye(3), np.eye(3)) == pytest.approx(3.0)
    assert polyalg.sigma2_form(np.eye(3), np.zeros((3, 3))) == 0.0
    with pytest.raises(ValueError):
        polyalg.sigma2_form(np.eye(2), np.eye(3))


@given(well_conditioned(3), well_conditioned(3))
@settings(max_examples=40, deadline=None)
def test_sigma2_form_symmetric_bilinear(A, B):
    assert polyalg.sigma2_form(A, B) == pytest.approx(
        polyalg.sigma2_form(B, A), rel=1e-9, abs=1e-9
    )
    assert polyalg.sigma2_form(A, A) == pytest.approx(
        polyalg.sigma_all(A)[2], rel=1e-9, abs=1e-9
    )
    two = polyalg.sigma2_form(2.0 * A, B)
    assert two == pytest.approx(2.0 * polyalg.sigma2_form(A, B), rel=1e-9, abs=1e-9)


def test_gram_signature_lorentzian():
    assert polyalg.sigma2_gram_signature(3) == (1, 5, 0)
    assert polyalg.sigma2_gram_signature(2) == (1, 2, 0)
    assert polyalg.sigma2_gram_signature(4) == (1, 9, 0)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_polynomial_identity_in_t(k, rng):
    A = rng.uniform(-2, 2, size=(k, k))
    s = polyalg.sigma_all(A)
    ts = rng.uniform(-1.5, 1.5, size=k + 1)
    for t in ts:
        lhs = np.linalg.det(np.eye(k) + t * A)
        rhs = sum(t**j * s[j] for j in range(k + 1))
        scale = 1.0 + max(abs(t), 1.0) ** k * np.linalg.norm(A) ** k
        assert abs(lhs - rhs) < 1e-9 * scale


@pytest.mark.parametrize("k", [2, 3, 4])
def test_similarity_invariance(k, rng):
    A = rng.uniform(-2, 2, size=(k, k))
    P = rng.uniform(-2, 2, size=(k, k))
    while abs(np.linalg.det(P)) < 0.3:
        P = rng.uniform(-2, 2, size=(k, k))
    s1 = polyalg.sigma_all(A)
    s2 = polyalg.sigma_all(np.linalg.inv(P) @ A @ P)
    assert np.allclose(s1, s2, rtol=1e-9, atol=1e-9)


def test_homogeneity(rng):
    k = 4
    A = rng.uniform(-2, 2, size=(k, k))
    lam = 1.7
    s = polyalg.sigma_all(A)
    s_scaled = polyalg.sigma_all(lam * A)
    assert np.allclose(s_scaled, [lam**j * s[j] for j in range(k + 1)], rtol=1e-12)
    assert np.allclose(
        polyalg.adjugate(lam * A), lam ** (k - 1) * polyalg.adjugate(A), rtol=1e-12
    )


def test_sigma_of_inverse_literal(rng):
    # the divided form of the inverse identity on well-conditioned input
    for k in (2, 3, 4, 5):
        A = rng.uniform(-2, 2, size=(k, k))
        while abs(np.linalg.det(A)) < 0.5:
            A = rng.uniform(-2, 2, size=(k, k))
        lhs = polyalg.sigma_all(np.linalg.inv(A))
        rhs = polyalg.sigma_all(A)[::-1] / np.linalg.det(A)
        assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_sigma_adj_reversal(rng):
    for k in (2, 3, 4, 5):
        A = rng.uniform(-2, 2, size=(k, k))
        s = polyalg.sigma_all(A)
        d = np.linalg.det(A)
        got = polyalg.sigma_all(polyalg.adjugate(A))
        want = [d ** (j - 1) * s[k - j] if j >= 1 else 1.0 for j in range(k + 1)]
        assert np.allclose(got[1:], want[1:], rtol=1e-8, atol=1e-8)


def test_quotient_identity_complex_entries(rng):
    # complex matrices, kept well conditioned
    k = 3
    A = rng.uniform(-2, 2, size=(k, k)) + 1j * rng.uniform(-2, 2, size=(k, k))
    C = rng.uniform(-2, 2, size=(k, k)) + 1j * rng.uniform(-2, 2, size=(k, k))
    C += 3 * np.eye(k)
    for j in range(k + 1):
        lhs = polyalg.sigma_all(A @ np.linalg.inv(C))[j]
        rhs = (
            np.linalg.det(A) ** (j + 1 - k)
            / np.linalg.det(C)
            * polyalg.sigma_all(C @ polyalg.adjugate(A))[k - j]
        )
        assert abs(lhs - rhs) < 1e-9 * (1 + abs(lhs) + abs(rhs))


def test_complex_shift_adjugate_example():
    # B = diag(1,2,3), z = i: entry (1,1) of adj(I+iB) is (1+2i)(1+3i) = -5+5i
    B = np.diag([1.0, 2.0, 3.0])
    adj = polyalg.adjugate(np.eye(3) + 1j * B)
    assert adj[0, 0] == pytest.approx(-5 + 5j)
    formula = (
        np.eye(3)
        + 1j * (np.trace(B) * np.eye(3) - B)
        + (1j) ** 2 * polyalg.adjugate(B)
    )
    assert formula[0, 0] == pytest.approx(1 + 1j * (6 - 1) - 6)
    assert np.allclose(adj, formula)


def test_subleading_identity_trivial_case():
    # A = I3, B = 0: sigma_2(I I^-1) = 3 with no imaginary correction
    lhs = polyalg.sigma_all(np.eye(3))[2]
    rhs = polyalg.sigma_all(np.eye(3))[2] + 1j * np.trace(
        np.zeros((3, 3)) @ polyalg.adjugate(np.eye(3))
    )
    assert lhs == pytest.approx(3.0)
    assert rhs == pytest.approx(3.0)


@given(
    arrays(float, (3, 3), elements=st.floats(-2, 2, allow_nan=False))
)
@settings(max_examples=60, deadline=None)
def test_complex_shift_determinant_modulus(Braw):
    # |det(I + iB)| >= 1 for real symmetric B
    B = 0.5 * (Braw + Braw.T)
    assert abs(np.linalg.det(np.eye(3) + 1j * B)) >= 1.0 - 1e-12


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_identity_suite_passes(k):
    report = polyalg.identity_suite(k, trials=300, seed=42)
    assert report.verdict == "pass"
    expected = {
        "sigma_of_inverse",
        "sigma_of_adjugate",
        "sigma_quotient_adjugate",
        "subleading_sigma_complex",
        "newton_sigma2",
    }
    if k == 3:
        expected |= {"adjugate_of_complex_shift", "trace_sigma2_polarization"}
    assert {c.name for c in report.conditions} == expected


def test_identity_suite_rejects_bad_arguments():
    with pytest.raises(ValueError):
        polyalg.identity_suite(7, 10, 0)
    with pytest.raises(ValueError):
        polyalg.identity_suite(3, 0, 0)


def test_identity_suite_deterministic():
    r1 = polyalg.identity_suite(3, trials=100, seed=9)
    r2 = polyalg.identity_suite(3, trials=100, seed=9)
    assert r1.to_json() == r2.to_json()


def test_input_validation():
    with pytest.raises(ValueError):
        polyalg.sigma_all(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        polyalg.sigma_all(np.ones((2, 3)))
