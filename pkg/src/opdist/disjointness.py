"""Entanglement-assisted disjointness of two channels.

The decision procedure iteratively intersects the Kraus spans, projects out
the support of the intersection Gram operator, and restricts the channels to
the remaining input subspace.  It terminates in at most d rounds; the
leftover projector yields a witness input state when it is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    RANK_TOL,
    DensityOperator,
    DimensionMismatch,
    PureState,
    QuantumChannel,
    apply_channel,
    dagger,
    extend_with_ancilla,
    max_entangled,
)
from .fidelity import max_fidelity
from .spans import column_space_intersection_dim, intersect, span_from


@dataclass(frozen=True)
class DisjointnessReport:
    disjoint: bool
    witness: PureState | None
    projector_chain: tuple
    iterations: int
    leftover_projector: np.ndarray


def _supp_projector_of(x: np.ndarray, rel_tol: float = RANK_TOL) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (x + dagger(x)))
    cut = rel_tol * max(w[-1], 0.0)
    cols = v[:, w > cut]
    return cols @ dagger(cols)


def ea_disjoint(e0: QuantumChannel, e1: QuantumChannel) -> DisjointnessReport:
    """Decide entanglement-assisted disjointness and produce a witness.

    The witness, when it exists, is the normalized (I ⊗ P)|alpha⟩ with P the
    projector onto the input subspace surviving the reduction loop.
    """
    if e0.dim_in != e1.dim_in or e0.dim_out != e1.dim_out:
        raise DimensionMismatch("channels must share input and output dimensions")
    d = e0.dim_in
    eye = np.eye(d, dtype=np.complex128)

    chain: list[np.ndarray] = []
    iterations = 0
    disjoint = False
    while iterations <= d:
        perp = eye - sum(chain, np.zeros_like(eye))
        if np.max(np.abs(perp)) < 1e-10:
            break  # remaining input subspace vanished
        k0 = [k @ perp for k in e0.kraus]
        k1 = [k @ perp for k in e1.kraus]
        s0 = span_from(k0)
        s1 = span_from(k1)
        if s0.dim == 0 or s1.dim == 0:
            break
        inter = intersect(s0, s1)
        if inter.dim == 0:
            disjoint = True
            break
        x = sum(dagger(dm) @ dm for dm in inter.basis)
        chain.append(_supp_projector_of(x))
        iterations += 1

    leftover = eye - sum(chain, np.zeros_like(eye))
    leftover = 0.5 * (leftover + dagger(leftover))
    rank = int(np.count_nonzero(np.linalg.eigvalsh(leftover) > 0.5))
    disjoint = disjoint and rank > 0

    witness = None
    if disjoint:
        alpha = max_entangled(d)
        vec = np.kron(eye, leftover) @ alpha.vector
        witness = PureState.from_vector(vec)

    return DisjointnessReport(
        disjoint=disjoint,
        witness=witness,
        projector_chain=tuple(chain),
        iterations=iterations,
        leftover_projector=leftover,
    )


def verify_witness(e0: QuantumChannel, e1: QuantumChannel, psi: PureState) -> bool:
    """Check that psi on system⊗ancilla yields disjoint outputs.

    Requires both the maximal fidelity of the two outputs to be below 1 and
    the support intersection to be zero-dimensional.
    """
    d = e0.dim_in
    if psi.dim != d * d:
        raise DimensionMismatch(f"witness must live on {d * d} dims, got {psi.dim}")
    rho = psi.density()
    out0 = apply_channel(extend_with_ancilla(e0, d), rho)
    out1 = apply_channel(extend_with_ancilla(e1, d), rho)
    fid_ok = max_fidelity(out0, out1) < 1.0 - 1e-7
    rank = column_space_intersection_dim(out0.support_basis, out1.support_basis)
    return fid_ok and rank == 0
