"""Maximal fidelity between density operators and the constructive
transformation channel that maps a mixed pair onto a prescribed pure pair.

The transform exists exactly when the maximal fidelity of the sources does
not exceed the overlap of the targets; infeasibility is reported as a
refusal error carrying both numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DensityOperator,
    DimensionMismatch,
    PureState,
    QuantumChannel,
    dagger,
    support_projector,
)

SV_TOL = 1e-8
DEGENERATE_TOL = 1e-10


class TransformInfeasible(ValueError):
    """No channel can map the given sources to the given targets."""

    def __init__(self, source_fidelity: float, target_overlap: float):
        self.source_fidelity = source_fidelity
        self.target_overlap = target_overlap
        super().__init__(
            f"source maximal fidelity {source_fidelity:.6g} exceeds "
            f"target overlap {target_overlap:.6g}"
        )


def max_fidelity(rho0: DensityOperator, rho1: DensityOperator) -> float:
    """Largest overlap between unit vectors drawn from the two supports.

    Equals the top singular value of the product of the support projectors,
    clamped to [0, 1].
    """
    if rho0.dim != rho1.dim:
        raise DimensionMismatch("density operators live on different dimensions")
    b0, b1 = rho0.support_basis, rho1.support_basis
    if b0.shape[1] == 0 or b1.shape[1] == 0:
        return 0.0
    sv = np.linalg.svd(dagger(b0) @ b1, compute_uv=False)
    return float(min(max(sv[0], 0.0), 1.0))


@dataclass(frozen=True)
class SupportPairDecomposition:
    """SVD of P0 P1 restricted to its nonzero singular values.

    left[:, k] lies in supp(rho0), right[:, k] in supp(rho1) and
    ⟨left_i | right_j⟩ = delta_ij * singulars[i].  The residual projectors
    cover the parts of each support orthogonal to the paired blocks.
    """

    singulars: np.ndarray
    left: np.ndarray  # (d, r)
    right: np.ndarray  # (d, r)
    p0_residual: np.ndarray
    p1_residual: np.ndarray

    @property
    def rank(self) -> int:
        return self.singulars.size

    def block_projector(self, k: int) -> np.ndarray:
        """Projector onto span{left_k, right_k}."""
        u = self.left[:, k]
        v = self.right[:, k]
        lam = np.vdot(u, v)
        proj = np.outer(u, u.conj())
        w = v - lam * u
        nw = np.linalg.norm(w)
        if nw > DEGENERATE_TOL:
            w = w / nw
            proj = proj + np.outer(w, w.conj())
        return proj


def support_pair_decompose(rho0: DensityOperator, rho1: DensityOperator) -> SupportPairDecomposition:
    if rho0.dim != rho1.dim:
        raise DimensionMismatch("density operators live on different dimensions")
    p = support_projector(rho0)
    q = support_projector(rho1)
    u, s, vh = np.linalg.svd(p @ q)
    if s.size == 0 or s[0] < 1e-12:
        r = 0
    else:
        r = int(np.count_nonzero(s > SV_TOL * s[0]))
    left = u[:, :r]
    right = vh[:r].conj().T
    p0_res = p - left @ dagger(left)
    p1_res = q - right @ dagger(right)
    return SupportPairDecomposition(
        singulars=s[:r].copy(),
        left=left,
        right=right,
        p0_residual=p0_res,
        p1_residual=p1_res,
    )


def _align_phase(reference: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate v's global phase so ⟨reference|v⟩ is real non-negative."""
    ip = np.vdot(reference, v)
    if abs(ip) < DEGENERATE_TOL:
        return v
    return v * (abs(ip) / ip)


def _orthonormal_complement(columns: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the given columns."""
    if columns.shape[1] == 0:
        return np.eye(dim, dtype=np.complex128)
    proj = columns @ dagger(columns)
    w, v = np.linalg.eigh(np.eye(dim) - proj)
    return v[:, w > 0.5]


def two_pure_transform(a0: PureState, a1: PureState, t0: PureState, t1: PureState,
                       enforce_feasible: bool = True) -> QuantumChannel:
    """Channel mapping the pure pair (a0, a1) onto the pure pair (t0, t1).

    An isometry with a 2-dim ancilla carries the overlap deficit: the ancilla
    states are chosen so ⟨a0|a1⟩ = ⟨t0|t1⟩⟨phi0|phi1⟩ after phase alignment,
    then the ancilla is discarded.  Inputs outside span{a0, a1} are mapped to
    t0.
    """
    if a0.dim != a1.dim or t0.dim != t1.dim:
        raise DimensionMismatch("state pairs must share dimensions")
    s = abs(a0.overlap(a1))
    t = abs(t0.overlap(t1))
    if enforce_feasible and s > t + 1e-10:
        raise TransformInfeasible(s, t)
    s = min(s, 1.0)

    din, dt = a0.dim, t0.dim
    v0 = a0.vector
    v1 = _align_phase(v0, a1.vector)
    w0 = t0.vector
    w1 = _align_phase(w0, t1.vector)

    if s > 1.0 - DEGENERATE_TOL:
        # Sources coincide; feasibility forces coinciding targets.
        basis = np.eye(din, dtype=np.complex128)
        return QuantumChannel(
            tuple(np.outer(w0, basis[:, j].conj()) for j in range(din))
        )

    e0 = v0
    e1 = (v1 - s * v0) / np.sqrt(1.0 - s * s)

    ratio = 0.0 if t < 1e-12 else min(s / t, 1.0)
    phi0 = np.array([1.0, 0.0], dtype=np.complex128)
    phi1 = np.array([ratio, np.sqrt(max(0.0, 1.0 - ratio * ratio))], dtype=np.complex128)
    g0 = np.kron(w0, phi0)
    g1 = np.kron(w1, phi1)
    # V e0 = g0 and V e1 = (g1 - s g0)/sqrt(1-s²), so V a1 = g1 exactly when
    # the ancilla overlap matches (ratio unclamped).
    g1 = g1 - np.vdot(g0, g1) * g0
    g1 = g1 / np.linalg.norm(g1)
    iso = np.outer(g0, e0.conj()) + np.outer(g1, e1.conj())
    kraus = [iso.reshape(dt, 2, din)[:, b, :] for b in range(2)]
    comp = _orthonormal_complement(np.column_stack([e0, e1]), din)
    for j in range(comp.shape[1]):
        kraus.append(np.outer(w0, comp[:, j].conj()))
    kraus = [k for k in kraus if np.max(np.abs(k)) > 1e-14]
    return QuantumChannel(tuple(kraus))


def build_transform(rho0: DensityOperator, rho1: DensityOperator,
                    t0: PureState, t1: PureState,
                    enforce_feasible: bool = True) -> QuantumChannel:
    """Channel T with T(rho0) = t0 and T(rho1) = t1.

    Projects with the family derived from the support-pair decomposition:
    residual outcomes prepare the matching target directly, paired 2-dim
    blocks run the two-pure-state transform, and everything outside
    supp(P+Q) maps to t0 (a fixed completion keeping trace preservation).
    """
    f = max_fidelity(rho0, rho1)
    t = abs(t0.overlap(t1))
    if enforce_feasible and f > t + 1e-10:
        raise TransformInfeasible(f, t)

    d = rho0.dim
    dec = support_pair_decompose(rho0, rho1)
    kraus: list[np.ndarray] = []
    captured: list[np.ndarray] = []

    def residual_prepare(res_proj: np.ndarray, target: np.ndarray):
        w, v = np.linalg.eigh(res_proj)
        for col in v[:, w > 0.5].T:
            kraus.append(np.outer(target, col.conj()))
            captured.append(col)

    residual_prepare(dec.p0_residual, t0.vector)
    residual_prepare(dec.p1_residual, t1.vector)

    for k in range(dec.rank):
        lam = dec.singulars[k]
        u = dec.left[:, k]
        v = dec.right[:, k]
        if lam > 1.0 - DEGENERATE_TOL:
            # Supports share this direction; feasibility forces t0 = t1 up to
            # phase, so a direct-prepare branch avoids dividing by 1 - lam².
            kraus.append(np.outer(t0.vector, u.conj()))
            captured.append(u)
            continue
        block = two_pure_transform(
            PureState.from_vector(u), PureState.from_vector(v), t0, t1,
            enforce_feasible=enforce_feasible,
        )
        proj = dec.block_projector(k)
        for bk in block.kraus:
            kb = bk @ proj
            if np.max(np.abs(kb)) > 1e-13:
                kraus.append(kb)
        captured.append(u)
        w = v - np.vdot(u, v) * u
        nw = np.linalg.norm(w)
        if nw > DEGENERATE_TOL:
            captured.append(w / nw)

    cap = (np.column_stack(captured) if captured
           else np.zeros((d, 0), dtype=np.complex128))
    comp = _orthonormal_complement(cap, d)
    for j in range(comp.shape[1]):
        kraus.append(np.outer(t0.vector, comp[:, j].conj()))

    return QuantumChannel(tuple(kraus))
