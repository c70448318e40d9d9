"""Linear classification of singular symmetric spans and tableau prolongation.

A span of symmetric matrices is *singular* when the determinant vanishes
identically on it; for 3 x 3 matrices the maximal such spans are, up to
orthogonal conjugation, the two model shapes

    KERNEL_SHAPE = { (* * 0 / * * 0 / 0 0 0) }    common kernel e3,
    AXIS_SHAPE   = { (* * * / * 0 0 / * 0 0) }    distinguished axis e1.

``is_singular_span`` decides membership in the determinant variety through
the full polarization of det; ``classify_singular_3span`` recovers the model
shape and the conjugating rotation, verifying the result a posteriori.

``prolongation`` computes L^(1) = V* (x) L  intersect  S^(order+1) V* (x) W
for a tableau L, via a rank-revealing nullspace.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SymSpan",
    "Tableau",
    "ClassificationError",
    "kernel_shape_basis",
    "axis_shape_basis",
    "traceless_axis_basis",
    "det_polarization",
    "is_singular_span",
    "classify_singular_3span",
    "span_shape",
    "prolongation",
    "full_quadratic_tableau",
    "off_diagonal_block_tableau",
    "sym_tensor_basis",
    "singular_2span_search",
]

RANK_THRESHOLD = 1e-10


class ClassificationError(RuntimeError):
    """Raised when a span fails the post-hoc model-shape verification."""


@dataclass
class SymSpan:
    """Linearly independent basis of a subspace of symmetric k x k matrices."""

    basis: list

    @classmethod
    def from_matrices(cls, mats, threshold=RANK_THRESHOLD) -> "SymSpan":
        """Orthonormalize and drop dependent directions (SVD rank cut)."""
        mats = [np.asarray(m, dtype=float) for m in mats]
        if not mats:
            return cls(basis=[])
        k = mats[0].shape[0]
        for m in mats:
            if m.shape != (k, k) or not np.allclose(m, m.T, atol=1e-12):
                raise ValueError("span requires symmetric matrices of equal size")
        stack = np.array([m.ravel() for m in mats])
        u, s, vt = np.linalg.svd(stack, full_matrices=False)
        keep = s > threshold * (s[0] if s[0] > 0 else 1.0)
        basis = [vt[i].reshape(k, k) * s[i] for i in range(len(s)) if keep[i]]
        basis = [0.5 * (b + b.T) / np.linalg.norm(b) for b in basis]
        return cls(basis=basis)

    def __post_init__(self):
        self.basis = [np.asarray(b, dtype=float) for b in self.basis]
        if self.basis:
            stack = np.array([b.ravel() for b in self.basis])
            s = np.linalg.svd(stack, compute_uv=False)
            if s[-1] <= RANK_THRESHOLD * s[0]:
                raise ValueError("span basis is linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def k(self) -> int:
        return self.basis[0].shape[0] if self.basis else 0


def kernel_shape_basis() -> list:
    """Basis of the common-kernel model shape (zero last row and column)."""
    out = []
    for i, j in ((0, 0), (1, 1), (0, 1)):
        e = np.zeros((3, 3))
        e[i, j] = e[j, i] = 1.0
        out.append(e)
    return out


def axis_shape_basis() -> list:
    """Basis of the distinguished-axis model shape (first row/column only)."""
    out = []
    for i, j in ((0, 0), (0, 1), (0, 2)):
        e = np.zeros((3, 3))
        e[i, j] = e[j, i] = 1.0
        out.append(e)
    return out


def traceless_axis_basis() -> list:
    """The 2-dimensional traceless variant of the axis shape (zero corner)."""
    out = []
    for i, j in ((0, 2), (1, 2)):
        e = np.zeros((3, 3))
        e[i, j] = e[j, i] = 1.0
        out.append(e)
    return out


def det_polarization(mats) -> float:
    """Full polarization of det on a tuple of k matrices of size k x k.

    D(X_1,..,X_k) = (1/k!) sum over nonempty subsets S of (-1)^(k-|S|)
    det(sum_S X_i); D(X,..,X) = det X.
    """
    mats = [np.asarray(m, dtype=float) for m in mats]
    k = mats[0].shape[0]
    if len(mats) != k:
        raise ValueError("polarization takes exactly k matrices")
    total = 0.0
    for r in range(1, k + 1):
        for subset in itertools.combinations(range(k), r):
            acc = sum(mats[i] for i in subset)
            total += (-1.0) ** (k - r) * np.linalg.det(acc)
    return total / math.factorial(k)


def is_singular_span(span: SymSpan, tol=RANK_THRESHOLD):
    """Whether det vanishes identically on the span.

    Checks the polarization D on every basis multi-combination (with
    repetition), which spans all values of det on the subspace.  Returns
    (True, None) or (False, certificate) with the violating index triple and
    value.
    """
    if span.dim == 0:
        return True, None
    k = span.k
    if k > 4:
        raise ValueError("singular-span test supports k <= 4")
    scale = max(np.linalg.norm(b) for b in span.basis)
    for combo in itertools.combinations_with_replacement(range(span.dim), k):
        value = det_polarization([span.basis[i] for i in combo])
        if abs(value) > tol * max(1.0, scale**k):
            return False, {"indices": combo, "value": value}
    return True, None


def _rotation_with_column(v, column: int) -> np.ndarray:
    """Rotation matrix whose given column is the unit vector v."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    n = v.shape[0]
    cols = [v]
    for e in np.eye(n):
        w = e - sum(np.dot(e, c) * c for c in cols)
        norm = np.linalg.norm(w)
        if norm > 1e-8:
            cols.append(w / norm)
        if len(cols) == n:
            break
    R = np.array(cols).T
    # place v at the requested column, keeping the complement order
    perm = list(range(1, column + 1)) + [0] + list(range(column + 1, n))
    R = R[:, perm]
    if np.linalg.det(R) < 0:
        flip = (column + 1) % n
        R[:, flip] = -R[:, flip]
    return R


def _common_kernel(span: SymSpan, tol=RANK_THRESHOLD) -> np.ndarray:
    stack = np.vstack(span.basis)
    _, s, vt = np.linalg.svd(stack)
    s0 = s[0] if s[0] > 0 else 1.0
    null = [vt[i] for i in range(vt.shape[0]) if i >= len(s) or s[i] <= tol * s0]
    return np.array(null)


def _shape_residual(span: SymSpan, R: np.ndarray, kind: str) -> float:
    scale = max(np.linalg.norm(b) for b in span.basis)
    worst = 0.0
    for b in span.basis:
        m = R.T @ b @ R
        if kind == "kernel":
            resid = max(abs(m[0, 2]), abs(m[1, 2]), abs(m[2, 2]))
        else:
            resid = max(abs(m[1, 1]), abs(m[1, 2]), abs(m[2, 2]))
        worst = max(worst, resid)
    return worst / max(1.0, scale)


def classify_singular_3span(span: SymSpan, tol=1e-8):
    """Classify a maximal (3-dimensional) singular span of 3 x 3 symmetrics.

    Returns (kind, R, residual) with kind "kernel" (common null direction,
    rotated to e3) or "axis" (distinguished image axis, rotated to e1), and R
    the conjugating rotation verified by the post-hoc shape residual.
    """
    if span.dim != 3 or span.k != 3:
        raise ValueError("classification requires a 3-dimensional span of 3x3")
    singular, certificate = is_singular_span(span)
    if not singular:
        raise ClassificationError(f"span is not singular: {certificate}")
    kernel = _common_kernel(span)
    if kernel.shape[0] >= 1:
        R = _rotation_with_column(kernel[0], 2)
        resid = _shape_residual(span, R, "kernel")
        if resid < tol:
            return "kernel", R, resid
        raise ClassificationError(f"common-kernel shape residual {resid:.3e}")
    axis = _distinguished_axis(span)
    R = _rotation_with_column(axis, 0)
    resid = _shape_residual(span, R, "axis")
    if resid < tol:
        return "axis", R, resid
    raise ClassificationError(f"distinguished-axis shape residual {resid:.3e}")


def _distinguished_axis(span: SymSpan, tol=RANK_THRESHOLD) -> np.ndarray:
    """Common image axis: intersection of the column spaces of the span.

    For symmetric matrices the column space is the orthocomplement of the
    kernel, so the intersection is the nullspace of all stacked kernels.
    """
    rows = []
    for b in span.basis:
        _, s, vt = np.linalg.svd(b)
        s0 = s[0] if s[0] > 0 else 1.0
        for i in range(3):
            if s[i] <= tol * s0:
                rows.append(vt[i])
    if not rows:
        raise ClassificationError("no kernel directions found in span")
    stack = np.array(rows)
    _, s, vt = np.linalg.svd(stack)
    s0 = s[0] if s[0] > 0 else 1.0
    null = [vt[i] for i in range(vt.shape[0]) if i >= len(s) or s[i] <= 1e-6 * s0]
    if len(null) != 1:
        raise ClassificationError(
            f"column-space intersection has dimension {len(null)}, expected 1"
        )
    return null[0]


def span_shape(span: SymSpan) -> str:
    """Shape compatibility of a (not necessarily maximal) singular span."""
    if span.dim == 0:
        return "zero"
    if span.dim == 3:
        kind, _, _ = classify_singular_3span(span)
        return kind
    kernel = _common_kernel(span)
    if kernel.shape[0] >= 1:
        return "kernel"
    axis = _distinguished_axis(span)
    R = _rotation_with_column(axis, 0)
    resid = _shape_residual(span, R, "axis")
    if resid < 1e-8:
        return "axis"
    raise ClassificationError(f"axis-shape residual {resid:.3e}")


# tableau prolongation ---------------------------------------------------------


def sym_tensor_basis(n: int, order: int) -> list:
    """Multisets indexing a basis of the symmetric tensors S^order(R^n)*."""
    return list(itertools.combinations_with_replacement(range(n), order))


def _sym_tensor_from_multiset(n: int, multiset) -> np.ndarray:
    order = len(multiset)
    t = np.zeros((n,) * order)
    perms = set(itertools.permutations(multiset))
    for p in perms:
        t[p] = 1.0
    return t / math.sqrt(len(perms))


@dataclass
class Tableau:
    """Subspace L of S^order V* (x) W given by a basis of coefficient arrays.

    Each basis element has shape (V,)*order + (W,) and is symmetric in its
    first ``order`` indices.
    """

    V_dim: int
    W_dim: int
    order: int
    basis: list

    def __post_init__(self):
        shape = (self.V_dim,) * self.order + (self.W_dim,)
        self.basis = [np.asarray(b, dtype=float) for b in self.basis]
        for b in self.basis:
            if b.shape != shape:
                raise ValueError(f"tableau element has shape {b.shape}, want {shape}")
            for a in range(self.order - 1):
                if not np.allclose(b, np.swapaxes(b, a, a + 1), atol=1e-12):
                    raise ValueError("tableau element not symmetric in V indices")

    @classmethod
    def from_symmetric_matrices(cls, mats, W_dim: int = 1) -> "Tableau":
        mats = [np.asarray(m, dtype=float) for m in mats]
        n = mats[0].shape[0]
        return cls(n, W_dim, 2, [m.reshape(n, n, 1) for m in mats])


def full_quadratic_tableau(n: int) -> Tableau:
    """All of S^2 V* for V = R^n (scalar W)."""
    basis = []
    for i, j in sym_tensor_basis(n, 2):
        m = np.zeros((n, n))
        m[i, j] = m[j, i] = 1.0
        basis.append(m)
    return Tableau.from_symmetric_matrices(basis)


def off_diagonal_block_tableau(p: int, q: int) -> Tableau:
    """Symmetric (p+q) x (p+q) matrices with zero diagonal blocks."""
    n = p + q
    basis = []
    for i in range(p):
        for j in range(p, n):
            m = np.zeros((n, n))
            m[i, j] = m[j, i] = 1.0
            basis.append(m)
    return Tableau.from_symmetric_matrices(basis)


def prolongation(tab: Tableau, threshold=RANK_THRESHOLD):
    """Dimension and basis of L^(1) (symmetric tensors of one higher order
    whose every V-contraction lies in L), via a rank-revealing nullspace."""
    n, w, order = tab.V_dim, tab.W_dim, tab.order
    slice_dim = n**order * w

    # Orthonormal basis of L as flattened slice vectors, then the projector
    # complement: a slice X lies in L iff X - Q Q^T X = 0.
    def flatten_slice(t):
        return np.asarray(t, dtype=float).ravel()

    unknowns = sym_tensor_basis(n, order + 1)
    n_unknown = len(unknowns) * w
    if tab.basis:
        q_rows = []
        for b in tab.basis:
            q_rows.append(flatten_slice(b))
        Q, _ = np.linalg.qr(np.array(q_rows).T)
        proj = np.eye(slice_dim) - Q @ Q.T
    else:
        proj = np.eye(slice_dim)

    rows = []
    for col, (multiset, wi) in enumerate(
        (m, wi) for m in unknowns for wi in range(w)
    ):
        big = _sym_tensor_from_multiset(n, multiset)
        col_vec = np.zeros((n, slice_dim))
        for i in range(n):
            slice_t = big[i, ...]  # shape (n,)*order
            t_full = np.zeros((n,) * order + (w,))
            t_full[..., wi] = slice_t
            col_vec[i] = proj @ flatten_slice(t_full)
        rows.append(col_vec.ravel())
    M = np.array(rows).T  # constraints x unknowns

    u, s, vt = np.linalg.svd(M)
    # constraints are built from unit tensors, so O(1) is the honest scale
    # even when every constraint row degenerates to zero
    cut = threshold * max(float(s[0]) if len(s) else 0.0, 1.0)
    null = [vt[i] for i in range(vt.shape[0]) if i >= len(s) or s[i] <= cut]
    basis = []
    for coeffs in null:
        t = np.zeros((n,) * (order + 1) + (w,))
        for col, (multiset, wi) in enumerate(
            (m, wi) for m in unknowns for wi in range(w)
        ):
            t[..., wi] += coeffs[col] * _sym_tensor_from_multiset(n, multiset)
        basis.append(t)
    return len(basis), basis


# low-dimensional probe ---------------------------------------------------------


def singular_2span_search(trials: int, seed: int, grid: int = 72) -> int:
    """Count 2-dimensional spans of singular symmetric 2 x 2 matrices that
    land entirely inside the determinant variety.

    Singular symmetric 2 x 2 matrices are +/- v v^T; the polarized determinant
    of two independent ones never vanishes together with both determinants, so
    the expected count is zero.  Searches an exhaustive angle grid plus seeded
    random pairs; returns the number of accepted candidates.
    """
    def pair_accepted(v1, s1, v2, s2):
        m1 = s1 * np.outer(v1, v1)
        m2 = s2 * np.outer(v2, v2)
        cross = v1[0] * v2[1] - v1[1] * v2[0]
        if abs(cross) < 1e-9:  # dependent: not a 2-dimensional span
            return False
        # det is quadratic: identically zero on span{m1,m2} iff det m1 =
        # det m2 = polarized det = 0; the first two vanish by construction.
        polar = 0.5 * (np.linalg.det(m1 + m2) - np.linalg.det(m1) - np.linalg.det(m2))
        scale = max(1.0, np.linalg.norm(m1) * np.linalg.norm(m2))
        return abs(polar) < RANK_THRESHOLD * scale

    accepted = 0
    angles = np.linspace(0.0, np.pi, grid, endpoint=False)
    for a1 in angles:
        v1 = np.array([np.cos(a1), np.sin(a1)])
        for a2 in angles:
            v2 = np.array([np.cos(a2), np.sin(a2)])
            for s1, s2 in ((1, 1), (1, -1)):
                if pair_accepted(v1, s1, v2, s2):
                    accepted += 1
    rng = np.random.default_rng(seed)
    remaining = max(0, trials - 2 * grid * grid)
    for _ in range(remaining):
        v1 = rng.normal(size=2)
        v2 = rng.normal(size=2)
        v1 /= np.linalg.norm(v1)
        v2 /= np.linalg.norm(v2)
        r1, r2 = rng.uniform(0.2, 2.0, size=2)
        s1, s2 = rng.choice([-1.0, 1.0], size=2)
        if pair_accepted(v1 * r1, s1, v2 * r2, s2):
            accepted += 1
    return accepted
