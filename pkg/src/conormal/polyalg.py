"""Elementary symmetric polynomials, adjugates, and their identity suite.

The coefficients sigma_j are defined by det(I + t A) = sum_j t^j sigma_j(A)
and are computed by the trace-based Newton recursion (no eigendecomposition,
valid over real and complex entries, batched over leading axes).  The adjugate
is assembled from the same coefficients through the characteristic polynomial,
so (adj A) A = det(A) I holds to machine precision for any square A.

``identity_suite`` replays the full identity family relating sigma_j, adj, and
the complex shift C = I + iB on seeded random matrices and reports the worst
relative residual for each identity.
"""

from __future__ import annotations

import numpy as np

from .report import CheckReport, ConditionStat

__all__ = [
    "sigma_all",
    "sigma",
    "det",
    "adjugate",
    "sigma2_form",
    "sym_basis",
    "sigma2_gram",
    "sigma2_gram_signature",
    "identity_suite",
]

SUPPORTED_SUITE_DIMS = (2, 3, 4, 5)
RESAMPLE_DET_FLOOR = 1e-6
SAMPLE_HALF_WIDTH = 2.0


def _as_square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2] or A.shape[-1] < 1:
        raise ValueError(f"expected square matrices, got shape {A.shape}")
    if not np.all(np.isfinite(A.view(float) if A.dtype != object else A)):
        raise ValueError("matrix entries must be finite")
    return A


def sigma_all(A) -> np.ndarray:
    """All coefficients sigma_0..sigma_k of det(I + t A), batched.

    Newton's identities over the power sums p_m = tr(A^m):
    m e_m = sum_{i=1..m} (-1)^(i-1) e_{m-i} p_i.
    """
    A = _as_square(A)
    k = A.shape[-1]
    batch = A.shape[:-2]
    p = np.empty((k + 1,) + batch, dtype=A.dtype)
    power = A
    for m in range(1, k + 1):
        p[m] = np.trace(power, axis1=-2, axis2=-1)
        if m < k:
            power = power @ A
    e = np.zeros((k + 1,) + batch, dtype=A.dtype)
    e[0] = 1.0
    for m in range(1, k + 1):
        acc = np.zeros(batch, dtype=A.dtype)
        sign = 1.0
        for i in range(1, m + 1):
            acc = acc + sign * e[m - i] * p[i]
            sign = -sign
        e[m] = acc / m
    return np.moveaxis(e, 0, -1)


def sigma(A, j: int):
    """sigma_j(A); sigma_1 is the trace and sigma_k the determinant."""
    s = sigma_all(A)
    return s[..., j]


def det(A):
    """Determinant via LU with partial pivoting (real or complex, batched)."""
    return np.linalg.det(_as_square(A))


def adjugate(A) -> np.ndarray:
    """Adjugate matrix: (adj A) A = A (adj A) = det(A) I, batched.

    adj A = sum_{m=0..k-1} (-1)^m sigma_{k-1-m}(A) A^m, which needs no
    inverse and is exact for singular A; for k = 1 this is [[1]].
    """
    A = _as_square(A)
    k = A.shape[-1]
    eye = np.broadcast_to(np.eye(k, dtype=A.dtype), A.shape)
    if k == 1:
        return np.ones_like(A)
    s = sigma_all(A)
    out = np.zeros_like(A)
    power = eye
    sign = 1.0
    for m in range(k):
        out = out + sign * s[..., k - 1 - m, None, None] * power
        if m < k - 1:
            power = power @ A
        sign = -sign
    return out


def sigma2_form(A, B):
    """Polarization of sigma_2: {A,B} = (tr(A) tr(B) - tr(AB)) / 2."""
    A = _as_square(A)
    B = _as_square(B)
    if A.shape[-1] != B.shape[-1]:
        raise ValueError(f"dimension mismatch: {A.shape[-1]} vs {B.shape[-1]}")
    trA = np.trace(A, axis1=-2, axis2=-1)
    trB = np.trace(B, axis1=-2, axis2=-1)
    trAB = np.einsum("...ij,...ji->...", A, B)
    return 0.5 * (trA * trB - trAB)


def sym_basis(k: int = 3) -> list:
    """Frobenius-orthonormal basis of the symmetric k x k matrices."""
    basis = []
    for i in range(k):
        e = np.zeros((k, k))
        e[i, i] = 1.0
        basis.append(e)
    r = 1.0 / np.sqrt(2.0)
    for i in range(k):
        for j in range(i + 1, k):
            e = np.zeros((k, k))
            e[i, j] = r
            e[j, i] = r
            basis.append(e)
    return basis


def sigma2_gram(k: int = 3) -> np.ndarray:
    """Gram matrix of the {,} form on the orthonormal symmetric basis."""
    basis = sym_basis(k)
    m = len(basis)
    gram = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            gram[i, j] = sigma2_form(basis[i], basis[j])
    return gram


def sigma2_gram_signature(k: int = 3, threshold: float = 1e-10):
    """Eigenvalue sign counts (positive, negative, zero) of the {,} Gram."""
    gram = sigma2_gram(k)
    scale = np.linalg.norm(gram)
    eig = np.linalg.eigvalsh(gram)
    cut = threshold * scale
    pos = int(np.sum(eig > cut))
    neg = int(np.sum(eig < -cut))
    return pos, neg, gram.shape[0] - pos - neg


# identity suite --------------------------------------------------------------


def _rel_residual(lhs, rhs, scale=None) -> np.ndarray:
    """Componentwise |lhs-rhs| / (1 + max(|lhs|,|rhs|) + scale), reduced.

    ``scale`` carries the per-trial data scale of the two evaluation routes
    (products of input norms to the degree of the polynomial being compared),
    so the residual measures error relative to what float64 evaluation of
    that degree can resolve, not relative to a possibly cancelled value.
    """
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    den = 1.0 + np.maximum(np.abs(lhs), np.abs(rhs))
    if scale is not None:
        den = den + scale
    r = np.abs(lhs - rhs) / den
    while r.ndim > 1:
        r = r.max(axis=-1)
    return r


def _fro(M) -> np.ndarray:
    return np.linalg.norm(M, axis=(-2, -1))


def _sample_invertible(rng, trials: int, k: int, floor=RESAMPLE_DET_FLOOR):
    """Uniform [-2,2] entries, rows resampled until |det| >= floor."""
    A = rng.uniform(-SAMPLE_HALF_WIDTH, SAMPLE_HALF_WIDTH, size=(trials, k, k))
    while True:
        bad = np.abs(np.linalg.det(A)) < floor
        if not bad.any():
            return A
        A[bad] = rng.uniform(
            -SAMPLE_HALF_WIDTH, SAMPLE_HALF_WIDTH, size=(int(bad.sum()), k, k)
        )


def identity_suite(k: int, trials: int, seed: int) -> CheckReport:
    """Replay the sigma/adjugate identity family on seeded random matrices.

    Per trial: A, C uniform [-2,2] entries resampled while |det| < 1e-6,
    B symmetrized, z complex with uniform [-2,2] parts.  The 3 x 3-specific
    identities run only at k = 3.  Pass requires every relative residual
    below 1e-9.
    """
    if k not in SUPPORTED_SUITE_DIMS:
        raise ValueError(f"identity suite supports k in {SUPPORTED_SUITE_DIMS}")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    tol = 1e-9

    A = _sample_invertible(rng, trials, k)
    B = rng.uniform(-SAMPLE_HALF_WIDTH, SAMPLE_HALF_WIDTH, size=(trials, k, k))
    B = 0.5 * (B + np.swapaxes(B, -1, -2))
    C = _sample_invertible(rng, trials, k)
    z = rng.uniform(-SAMPLE_HALF_WIDTH, SAMPLE_HALF_WIDTH, size=(trials, 2))
    z = z[:, 0] + 1j * z[:, 1]

    detA = np.linalg.det(A)
    detC = np.linalg.det(C)
    adjA = adjugate(A)
    sigA = sigma_all(A)
    eye = np.eye(k)
    results = []

    def record(name: str, residuals):
        r = float(np.max(residuals))
        results.append(
            ConditionStat(
                name=name,
                max=r,
                mean=float(np.mean(residuals)),
                count=trials,
                tolerance=tol,
            )
        )

    j = np.arange(k + 1)
    normA = _fro(A)

    # sigma_j(A^-1) = sigma_{k-j}(A) / det A, exercised through the LU inverse
    # but on the well-scaled matrix M = det(A) A^-1 (same identity by degree-j
    # homogeneity; sigma of the raw inverse is hopeless near the det floor).
    M = detA[:, None, None] * np.linalg.inv(A)
    lhs = sigma_all(M)
    rhs = detA[:, None] ** np.clip(j - 1, 0, None) * sigA[:, ::-1]
    rhs[:, 0] = sigA[:, k] / detA  # j = 0: recursion det against LU det
    scale = _fro(M)[:, None] ** j + np.abs(rhs)
    record("sigma_of_inverse", _rel_residual(lhs, rhs, scale))

    # sigma_j(adj A) = det(A)^(j-1) sigma_{k-j}(A)
    lhs = sigma_all(adjA)[:, 1:]
    rhs = detA[:, None] ** np.arange(0, k) * sigA[:, ::-1][:, 1:]
    scale = _fro(adjA)[:, None] ** j[1:] + np.abs(rhs)
    record("sigma_of_adjugate", _rel_residual(lhs, rhs, scale))

    # sigma_j(A C^-1) = det(A)^(j+1-k) det(C)^-1 sigma_{k-j}(C adj A),
    # verified with denominators cleared: negative powers of a small det
    # would amplify roundoff far beyond the identity's own error.
    ACinv = A @ np.linalg.inv(C)
    sig_quot = sigma_all(ACinv)
    sig_CadjA = sigma_all(C @ adjA)[:, ::-1]
    pow_lhs = np.abs(detA[:, None]) ** np.clip(k - 1 - j, 0, None)
    pow_rhs = np.abs(detA[:, None]) ** np.clip(j + 1 - k, 0, None)
    lhs = detA[:, None] ** np.clip(k - 1 - j, 0, None) * sig_quot * detC[:, None]
    rhs = detA[:, None] ** np.clip(j + 1 - k, 0, None) * sig_CadjA
    scale = (
        pow_lhs * _fro(ACinv)[:, None] ** j * np.abs(detC)[:, None]
        + pow_rhs * _fro(C @ adjA)[:, None] ** (k - j)
    )
    record("sigma_quotient_adjugate", _rel_residual(lhs, rhs, scale))

    # sigma_{k-1}(A Cb^-1) det Cb = sigma_{k-1}(A) + i tr(B adj A), Cb = I + iB
    Cb = eye + 1j * B
    detCb = np.linalg.det(Cb)
    ACbinv = A @ np.linalg.inv(Cb)
    lhs = sigma_all(ACbinv)[:, k - 1] * detCb
    rhs = sigA[:, k - 1] + 1j * np.einsum("tij,tji->t", B, adjA)
    scale = _fro(ACbinv) ** (k - 1) * np.abs(detCb) + normA ** (k - 1)
    record("subleading_sigma_complex", _rel_residual(lhs, rhs, scale))

    # Newton: sigma_2(A) = (tr A)^2 / 2 - tr(A^2) / 2
    rhs = 0.5 * sigA[:, 1] ** 2 - 0.5 * np.einsum("tij,tji->t", A, A)
    record("newton_sigma2", _rel_residual(sigA[:, 2], rhs, normA**2))

    if k == 3:
        # adj(I + zB) = I + z (tr(B) I - B) + z^2 adj B for symmetric 3x3 B
        zc = z[:, None, None]
        lhs = adjugate(eye + zc * B)
        trB = np.trace(B, axis1=-2, axis2=-1)[:, None, None]
        rhs = eye + zc * (trB * eye - B) + zc**2 * adjugate(B)
        scale = ((1.0 + np.abs(z)) * (1.0 + _fro(B))) ** 2
        record(
            "adjugate_of_complex_shift",
            _rel_residual(lhs, rhs, scale[:, None, None]),
        )

        # sigma_1(A Cb^-1) det Cb = tr(A (I - adj B)) + 2i {A, B}
        lhs = sigma_all(ACbinv)[:, 1] * detCb
        rhs = np.einsum(
            "tij,tji->t", A, eye - adjugate(B)
        ) + 2j * sigma2_form(A, B)
        scale = _fro(ACbinv) * np.abs(detCb) + normA * (1.0 + _fro(B)) ** 2
        record("trace_sigma2_polarization", _rel_residual(lhs, rhs, scale))

    return CheckReport(
        title=f"symmetric-polynomial identity suite (k={k}, trials={trials})",
        conditions=results,
        verdict="pass" if all(c.passed for c in results) else "fail",
        seed=seed,
    )
