"""Algebra of operator subspaces under the Hilbert-Schmidt inner product.

Subspaces of matrices are handled through their vectorizations; rank
decisions are SVD-based with a single relative tolerance shared across the
package so results are reproducible from one knob.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, dagger

# Relative singular-value cutoff for all subspace rank decisions.
SPAN_TOL = 1e-8

# A matrix counts as a member of a span when its normalized projection
# residual is below this.
MEMBERSHIP_TOL = 1e-7


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """tr(A† B)."""
    return complex(np.sum(a.conj() * b))


def hs_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


@dataclass(frozen=True)
class OperatorSpan:
    """Orthonormal basis of a subspace of rows x cols matrices."""

    shape: tuple
    basis: np.ndarray  # (k, rows, cols); k may be 0
    tolerance: float = SPAN_TOL

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _vec_basis(self) -> np.ndarray:
        return self.basis.reshape(self.dim, -1)

    def project(self, a: np.ndarray) -> np.ndarray:
        """Orthogonal projection of ``a`` onto the span."""
        a = as_matrix(a, *self.shape)
        if self.dim == 0:
            return np.zeros(self.shape, dtype=np.complex128)
        vb = self._vec_basis()
        coeffs = vb.conj() @ a.ravel()
        return (coeffs @ vb).reshape(self.shape)


def span_from(mats, tolerance: float = SPAN_TOL) -> OperatorSpan:
    """Orthonormalize the linear hull of a list of same-shaped matrices.

    Zero matrices (and linear dependencies) are discarded by singular-value
    filtering of the stacked vectorizations.
    """
    mats = [as_matrix(m) for m in mats]
    if not mats:
        raise ValueError("cannot span an empty list of matrices")
    shape = mats[0].shape
    for m in mats:
        if m.shape != shape:
            raise ValueError("matrices in a span must share one shape")
    stack = np.stack([m.ravel() for m in mats])
    u, s, vh = np.linalg.svd(stack, full_matrices=False)
    if s.size == 0 or s[0] < 1e-14:
        basis = np.zeros((0,) + shape, dtype=np.complex128)
    else:
        keep = s > tolerance * s[0]
        basis = vh[keep].reshape(-1, *shape)
    return OperatorSpan(shape=shape, basis=basis, tolerance=tolerance)


def contains(span: OperatorSpan, a: np.ndarray) -> tuple[bool, float]:
    """Membership test with the normalized projection residual.

    Returns ``(member, residual)`` where residual = ||A - Pi(A)|| / ||A||.
    The zero matrix is contained with residual 0 by convention.
    """
    a = as_matrix(a, *span.shape)
    na = hs_norm(a)
    if na < 1e-14:
        return True, 0.0
    residual = hs_norm(a - span.project(a)) / na
    return residual < MEMBERSHIP_TOL, residual


def intersect(s0: OperatorSpan, s1: OperatorSpan, tolerance: float | None = None) -> OperatorSpan:
    """Orthonormal basis of the intersection of two operator spans.

    Computed from the null space of the stacked system [B0 | -B1] acting on
    vectorized coefficient pairs.
    """
    if s0.shape != s1.shape:
        raise ValueError("spans must share one matrix shape")
    tol = tolerance if tolerance is not None else max(s0.tolerance, s1.tolerance)
    if s0.dim == 0 or s1.dim == 0:
        empty = np.zeros((0,) + s0.shape, dtype=np.complex128)
        return OperatorSpan(shape=s0.shape, basis=empty, tolerance=tol)
    a0 = s0._vec_basis().T  # (rc, k0)
    a1 = s1._vec_basis().T
    system = np.hstack([a0, -a1])
    u, s, vh = np.linalg.svd(system, full_matrices=True)
    # Null vectors: right singular vectors whose singular value is ~0.
    null_mask = np.ones(vh.shape[0], dtype=bool)
    null_mask[: s.size] = s < tol
    members = []
    for row in vh[null_mask]:
        x = row.conj()[: s0.dim]
        members.append((x @ s0._vec_basis()).reshape(s0.shape))
    if not members:
        empty = np.zeros((0,) + s0.shape, dtype=np.complex128)
        return OperatorSpan(shape=s0.shape, basis=empty, tolerance=tol)
    return span_from(members, tolerance=tol)


def complement_projection(span: OperatorSpan, a: np.ndarray) -> np.ndarray:
    """The component of ``a`` orthogonal to the span: A - Pi(A).

    For A = I this is the canonical trace witness: tr(M) = ||M||² is real and
    positive exactly when I is outside the span.
    """
    a = as_matrix(a, *span.shape)
    return a - span.project(a)


def column_space_intersection_dim(u: np.ndarray, v: np.ndarray, tolerance: float = SPAN_TOL) -> int:
    """Dimension of the intersection of two column spaces (orthonormal inputs)."""
    u = np.atleast_2d(np.asarray(u, dtype=np.complex128))
    v = np.atleast_2d(np.asarray(v, dtype=np.complex128))
    if u.shape[1] == 0 or v.shape[1] == 0:
        return 0
    s = np.linalg.svd(dagger(u) @ v, compute_uv=False)
    return int(np.count_nonzero(s > 1.0 - tolerance))
