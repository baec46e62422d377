"""Zero-error discrimination of two channels in finitely many queries.

The verdict combines entanglement-assisted disjointness with the identity
membership test on the span of cross products of Kraus operators.  When it
holds, an explicit (N+1)-query protocol is assembled: N parallel probes on
the disjointness witness, one Lemma-style transform onto a non-orthogonal
pure pair whose single-query outputs are orthogonal, and one final query
resolved by a two-outcome projective measurement.

Tensor powers of the probe outputs are kept support-restricted: all Gram
and transform computations run on tensor products of the support bases and
the physical state is compressed through a stored isometry, so the full
(d d')^N-dimensional matrices are never materialized.

When the per-copy product of support projectors has rank one, every tensor
power factorizes through a single (u, w) singular pair: the paired block of
the N-copy transform is spanned by u^{⊗N} and w^{⊗N}, all block matrix
elements are N-th powers of per-copy inner products, and the residual
weights follow from support traces.  That path has cost independent of N
and is taken whenever the materialized bases would exceed the rank cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import (
    DensityOperator,
    DimensionMismatch,
    PureState,
    QuantumChannel,
    apply_channel,
    dagger,
    extend_with_ancilla,
    max_entangled,
    support_projector,
)
from .disjointness import DisjointnessReport, ea_disjoint
from .fidelity import (
    build_transform,
    max_fidelity,
    support_pair_decompose,
    two_pure_transform,
)
from .spans import OperatorSpan, complement_projection, contains, span_from

TENSOR_RANK_CAP = 4096


class NotDistinguishable(ValueError):
    """The channel pair fails the finite-query distinguishability conditions."""


@dataclass(frozen=True)
class DistinguishabilityVerdict:
    distinguishable: bool
    condition_i: bool
    condition_ii: bool
    disjointness: DisjointnessReport
    identity_residual: float


@dataclass(frozen=True)
class DiscriminationProtocol:
    witness: PureState  # probe state on d² dims
    copies: int  # N parallel probe queries
    transform: QuantumChannel  # acts on compressed coordinates
    compression: np.ndarray  # (D^N, m) isometry onto the joint support
    final_pair: tuple  # (psi0, psi1) on d² dims
    final_projector: np.ndarray  # Pi; measurement is {Pi, I - Pi}
    pair_overlap: float
    probe_fidelity: float
    # In factored mode compression holds the per-copy singular pair (u, w)
    # as its two columns and the transform acts on 2-dim block coordinates.
    factored: bool = False

    @property
    def total_queries(self) -> int:
        return self.copies + 1


def _cross_span(e0: QuantumChannel, e1: QuantumChannel) -> OperatorSpan:
    return span_from([dagger(a) @ b for a in e0.kraus for b in e1.kraus])


def check_distinguishable(e0: QuantumChannel, e1: QuantumChannel) -> DistinguishabilityVerdict:
    if e0.dim_in != e1.dim_in or e0.dim_out != e1.dim_out:
        raise DimensionMismatch("channels must share input and output dimensions")
    report = ea_disjoint(e0, e1)
    member, residual = contains(_cross_span(e0, e1), np.eye(e0.dim_in))
    cond_ii = not member
    return DistinguishabilityVerdict(
        distinguishable=report.disjoint and cond_ii,
        condition_i=report.disjoint,
        condition_ii=cond_ii,
        disjointness=report,
        identity_residual=residual,
    )


def find_final_pair(e0: QuantumChannel, e1: QuantumChannel):
    """Pure pair with nonzero overlap but orthogonal one-query outputs.

    The witness operator is the identity's component orthogonal to the span
    of E1j† E0i; that orientation makes tr(E0i† E1j A1) vanish for all i, j,
    which is the orthogonality of the extended outputs.

    Returns (psi0, psi1, q) with q = |⟨psi0|psi1⟩|.
    """
    d = e0.dim_in
    span = span_from([dagger(b) @ a for a in e0.kraus for b in e1.kraus])
    m = complement_projection(span, np.eye(d))
    norm = np.linalg.norm(m)
    if norm < 1e-7 or abs(np.trace(m)) < 1e-9:
        raise NotDistinguishable("identity lies in the cross span; no final pair exists")
    a1 = m / norm
    alpha = max_entangled(d)
    psi0 = alpha
    psi1 = PureState.from_vector(np.kron(np.eye(d), a1) @ alpha.vector)
    q = abs(psi0.overlap(psi1))
    return psi0, psi1, q


def _copies_needed(f: float, q: float) -> int:
    """Minimal N with f^N <= q (conventions for the f=0 / q=1 edges)."""
    if q > 1.0 - 1e-12:
        return 0
    if f < 1e-12:
        return 1
    raw = math.log(q) / math.log(f)
    n = max(1, math.ceil(raw - 1e-12))
    while f ** n > q + 1e-12:
        n += 1
    return n


def _kron_power(m: np.ndarray, n: int) -> np.ndarray:
    return reduce(np.kron, [m] * n)


def _compressed_tensor_power(rho: DensityOperator, n: int, basis: np.ndarray) -> np.ndarray:
    """B† rho^{⊗n} B without materializing the full tensor power."""
    w, v = rho._eig
    keep = w > rho.rank_tolerance * max(w[-1], 0.0)
    lam = w[keep]
    vecs = v[:, keep]
    vn = _kron_power(vecs, n)
    lam_n = _kron_power(lam.reshape(1, -1), n).ravel()
    m = dagger(basis) @ vn
    out = (m * lam_n) @ dagger(m)
    return 0.5 * (out + dagger(out))


def build_protocol(e0: QuantumChannel, e1: QuantumChannel,
                   copies: int | None = None,
                   enforce_feasible: bool = True) -> DiscriminationProtocol:
    """Assemble the explicit zero-error protocol for a distinguishable pair.

    ``copies`` overrides the computed N (used for diagnostics); with
    ``enforce_feasible=False`` the transform is built best-effort even when
    the fidelity bound fails, producing a protocol with nonzero error.
    """
    verdict = check_distinguishable(e0, e1)
    if not verdict.distinguishable:
        raise NotDistinguishable(
            f"conditions hold: i)={verdict.condition_i} ii)={verdict.condition_ii}"
        )
    d = e0.dim_in
    phi = verdict.disjointness.witness
    ext0 = extend_with_ancilla(e0, d)
    ext1 = extend_with_ancilla(e1, d)
    rho0 = apply_channel(ext0, phi.density())
    rho1 = apply_channel(ext1, phi.density())
    f = max_fidelity(rho0, rho1)

    psi0, psi1, q = find_final_pair(e0, e1)
    n = _copies_needed(f, q) if copies is None else copies

    factored = False
    if n == 0:
        # Single-query branch: "transform" just prepares psi0 (= psi1).
        transform = QuantumChannel((psi0.vector.reshape(-1, 1),))
        compression = np.ones((1, 1), dtype=np.complex128)
    elif ((rho0.rank ** n) * (rho1.rank ** n) <= TENSOR_RANK_CAP
          and rho0.dim ** n <= 1 << 22):
        vn0 = _kron_power(rho0.support_basis, n)
        vn1 = _kron_power(rho1.support_basis, n)
        joint = np.hstack([vn0, vn1])
        u, s, _ = np.linalg.svd(joint, full_matrices=False)
        compression = u[:, s > 1e-10 * s[0]]
        c0 = _compressed_tensor_power(rho0, n, compression)
        c1 = _compressed_tensor_power(rho1, n, compression)
        transform = build_transform(
            DensityOperator(c0), DensityOperator(c1), psi0, psi1,
            enforce_feasible=enforce_feasible,
        )
    else:
        dec = support_pair_decompose(rho0, rho1)
        if dec.rank != 1:
            raise ValueError(
                f"support-restricted tensor power exceeds rank cap: "
                f"{rho0.rank}^{n} * {rho1.rank}^{n} > {TENSOR_RANK_CAP} "
                f"and the projector product has rank {dec.rank} > 1"
            )
        # Single singular pair per copy: the N-copy paired block is spanned
        # by u^{⊗N}, w^{⊗N} with overlap f^N; the transform acts on those
        # block coordinates and residual weights prepare the targets.
        s_n = dec.singulars[0] ** n
        a0 = PureState.from_vector(np.array([1.0, 0.0], dtype=np.complex128))
        a1 = PureState.from_vector(np.array(
            [s_n, math.sqrt(max(0.0, 1.0 - s_n * s_n))], dtype=np.complex128))
        transform = two_pure_transform(a0, a1, psi0, psi1,
                                       enforce_feasible=enforce_feasible)
        compression = np.column_stack([dec.left[:, 0], dec.right[:, 0]])
        factored = True

    tau0 = apply_channel(ext0, psi0.density())
    projector = support_projector(tau0)
    return DiscriminationProtocol(
        witness=phi,
        copies=n,
        transform=transform,
        compression=compression,
        final_pair=(psi0, psi1),
        final_projector=projector,
        pair_overlap=q,
        probe_fidelity=f,
        factored=factored,
    )


def _factored_transform_output(protocol: DiscriminationProtocol,
                               rho: DensityOperator,
                               p_copy: np.ndarray, q_copy: np.ndarray) -> np.ndarray:
    """Transform output for one hypothesis without materializing powers.

    All N-copy quantities reduce to N-th powers: the block Gram entries to
    powers of per-copy inner products with the singular pair (u, w), the
    residual weights to powers of the support traces.
    """
    n = protocol.copies
    u = protocol.compression[:, 0]
    w = protocol.compression[:, 1]
    s = protocol.probe_fidelity ** n
    c = math.sqrt(max(0.0, 1.0 - s * s))
    mat = rho.matrix
    guu = float(np.vdot(u, mat @ u).real) ** n
    gww = float(np.vdot(w, mat @ w).real) ** n
    guw = complex(np.vdot(u, mat @ w)) ** n
    # Block coordinates in the orthonormal pair {u^n, (w^n - s u^n)/c}.
    s11 = guu
    s12 = (guw - s * guu) / c
    s22 = (gww - 2.0 * s * guw.real + s * s * guu) / (c * c)
    block = np.array([[s11, s12], [np.conj(s12), s22]], dtype=np.complex128)
    r_p = max(0.0, float(np.trace(p_copy @ mat).real) ** n - guu)
    r_q = max(0.0, float(np.trace(q_copy @ mat).real) ** n - gww)

    psi0, psi1 = protocol.final_pair
    out = np.zeros((protocol.transform.dim_out,) * 2, dtype=np.complex128)
    for k in protocol.transform.kraus:
        out += k @ block @ dagger(k)
    out += r_p * np.outer(psi0.vector, psi0.vector.conj())
    out += r_q * np.outer(psi1.vector, psi1.vector.conj())
    return 0.5 * (out + dagger(out))


def simulate_protocol(protocol: DiscriminationProtocol,
                      e0: QuantumChannel, e1: QuantumChannel):
    """Run both hypotheses through the protocol.

    Returns (guess_when_e0, guess_when_e1, error_bound): the guess emitted
    under each true channel and the worst wrong-outcome probability.  Weight
    leaking outside the compression subspace counts as error, so a corrupted
    protocol reports a positive bound instead of raising.
    """
    d = e0.dim_in
    ext = (extend_with_ancilla(e0, d), extend_with_ancilla(e1, d))
    pi = protocol.final_projector

    if protocol.factored:
        probes = [apply_channel(ch, protocol.witness.density()) for ch in ext]
        p_copy = support_projector(probes[0])
        q_copy = support_projector(probes[1])

    probs = []
    for idx, channel in enumerate(ext):
        if protocol.copies == 0:
            sigma = np.outer(protocol.final_pair[0].vector,
                             protocol.final_pair[0].vector.conj())
        elif protocol.factored:
            sigma = _factored_transform_output(protocol, probes[idx],
                                               p_copy, q_copy)
        else:
            rho = apply_channel(channel, protocol.witness.density())
            comp = _compressed_tensor_power(rho, protocol.copies, protocol.compression)
            leak = max(0.0, 1.0 - float(np.trace(comp).real))
            sigma = np.zeros((protocol.transform.dim_out,) * 2, dtype=np.complex128)
            for k in protocol.transform.kraus:
                sigma += k @ comp @ dagger(k)
            sigma = 0.5 * (sigma + dagger(sigma))
            # sub-normalized by the leaked weight; kept as-is
        out = np.zeros((channel.dim_out,) * 2, dtype=np.complex128)
        for k in channel.kraus:
            out += k @ sigma @ dagger(k)
        p_pi = float(np.trace(pi @ out).real)
        p_total = float(np.trace(out).real)
        probs.append((p_pi, p_total))

    guess0 = 0 if probs[0][0] >= probs[0][1] - probs[0][0] else 1
    guess1 = 0 if probs[1][0] >= probs[1][1] - probs[1][0] else 1
    err0 = max(0.0, 1.0 - probs[0][0])  # wrong or leaked under E0
    err1 = max(0.0, probs[1][0] + (1.0 - probs[1][1]))  # Pi outcome or leak under E1
    return guess0, guess1, max(err0, err1)
