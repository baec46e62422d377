"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import time from the ``OPDIST_BACKEND``
environment variable: ``numba`` (default when numba imports cleanly) or
``numpy``.  Both implementations are exported with ``_nb``/``_np`` suffixes
so the benchmark can time them against each other.

Kernels:
  support_sweep      eigenvalue sweep for numerical-range boundaries
  shell_sweep        joint sweep for the upper shell of the DW set
  output_fidelity    maximal fidelity between two channel outputs on pure
                     inputs (the optimizer objective)
"""

from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("OPDIST_BACKEND", "numba").strip().lower()
if _REQUESTED not in ("numba", "numpy"):
    raise ValueError(f"OPDIST_BACKEND must be 'numba' or 'numpy', got {_REQUESTED!r}")

_HAVE_NUMBA = False
if _REQUESTED == "numba":
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False

BACKEND = "numba" if _HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy implementations (vectorized over the sweep axis)

def support_sweep_np(a: np.ndarray, angles: np.ndarray):
    """For each angle t: top eigenpair of (e^{it}A + e^{-it}A†)/2.

    Returns (boundary points z_j = x†Ax, support values s_j = top eigenvalue).
    """
    ph = np.exp(1j * angles)
    herm = 0.5 * (ph[:, None, None] * a[None] + np.conj(ph)[:, None, None] * a.conj().T[None])
    w, v = np.linalg.eigh(herm)
    x = v[..., -1]
    z = np.einsum("ni,ij,nj->n", x.conj(), a, x)
    return z, w[:, -1]


def shell_sweep_np(a: np.ndarray, dirs: np.ndarray):
    """Top eigenpairs of c1*Re(A) + c2*Im(A) + c3*A†A over unit directions.

    Returns (z samples, t samples, support values) with z = x†Ax and
    t = x†A†Ax for the top eigenvector x of each direction.
    """
    re = 0.5 * (a + a.conj().T)
    im = (a - a.conj().T) / 2j
    ata = a.conj().T @ a
    herm = (
        dirs[:, 0, None, None] * re[None]
        + dirs[:, 1, None, None] * im[None]
        + dirs[:, 2, None, None] * ata[None]
    )
    w, v = np.linalg.eigh(herm)
    x = v[..., -1]
    z = np.einsum("ni,ij,nj->n", x.conj(), a, x)
    t = np.einsum("ni,ij,nj->n", x.conj(), ata, x).real
    return z, t, w[:, -1]


def output_fidelity_np(kraus0: np.ndarray, kraus1: np.ndarray,
                       psi0: np.ndarray, psi1: np.ndarray,
                       rank_tol: float = 1e-8) -> float:
    """Maximal fidelity between E0(psi0) and E1(psi1) on pure inputs.

    The output of a channel on a pure state is C C† with C the stack of
    K_i psi as columns, so the support basis is read off one SVD and the
    fidelity is the top singular value of the cross-Gram of the two bases.
    """
    c0 = (kraus0 @ psi0).T  # (dout, m0)
    c1 = (kraus1 @ psi1).T
    u0, s0, _ = np.linalg.svd(c0, full_matrices=False)
    u1, s1, _ = np.linalg.svd(c1, full_matrices=False)
    b0 = u0[:, s0 > rank_tol * s0[0]]
    b1 = u1[:, s1 > rank_tol * s1[0]]
    cross = b0.conj().T @ b1
    sv = np.linalg.svd(cross, compute_uv=False)
    if sv.size == 0:
        return 0.0
    return float(min(sv[0], 1.0))


def output_fidelity_batch_np(kraus0: np.ndarray, kraus1: np.ndarray,
                             psi0: np.ndarray, psi1: np.ndarray,
                             rank_tol: float = 1e-8) -> np.ndarray:
    """Batched output_fidelity over stacked input pairs (batch, d)."""
    c0 = np.einsum("mij,bj->bim", kraus0, psi0)  # (batch, dout, m0)
    c1 = np.einsum("mij,bj->bim", kraus1, psi1)
    u0, s0, _ = np.linalg.svd(c0, full_matrices=False)
    u1, s1, _ = np.linalg.svd(c1, full_matrices=False)
    # Zero out columns below the rank cut instead of slicing (keeps batching).
    m0 = s0 > rank_tol * s0[:, :1]
    m1 = s1 > rank_tol * s1[:, :1]
    b0 = u0 * m0[:, None, :]
    b1 = u1 * m1[:, None, :]
    cross = np.einsum("bim,bin->bmn", b0.conj(), b1)
    sv = np.linalg.svd(cross, compute_uv=False)
    return np.minimum(sv[:, 0], 1.0)


# ---------------------------------------------------------------------------
# numba implementations

if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def support_sweep_nb(a, angles):
        n = angles.shape[0]
        d = a.shape[0]
        z = np.empty(n, dtype=np.complex128)
        s = np.empty(n, dtype=np.float64)
        ad = a.conj().T
        for j in range(n):
            ph = np.exp(1j * angles[j])
            herm = 0.5 * (ph * a + np.conj(ph) * ad)
            w, v = np.linalg.eigh(herm)
            x = v[:, d - 1].copy()
            z[j] = np.vdot(x, a @ x)
            s[j] = w[d - 1]
        return z, s

    @numba.njit(cache=True)
    def shell_sweep_nb(a, dirs):
        n = dirs.shape[0]
        d = a.shape[0]
        re = 0.5 * (a + a.conj().T)
        im = (a - a.conj().T) / 2j
        ata = a.conj().T @ a
        z = np.empty(n, dtype=np.complex128)
        t = np.empty(n, dtype=np.float64)
        s = np.empty(n, dtype=np.float64)
        for j in range(n):
            herm = dirs[j, 0] * re + dirs[j, 1] * im + dirs[j, 2] * ata
            w, v = np.linalg.eigh(herm)
            x = v[:, d - 1].copy()
            z[j] = np.vdot(x, a @ x)
            t[j] = np.vdot(x, ata @ x).real
            s[j] = w[d - 1]
        return z, t, s

    @numba.njit(cache=True)
    def output_fidelity_nb(kraus0, kraus1, psi0, psi1, rank_tol=1e-8):
        m0 = kraus0.shape[0]
        m1 = kraus1.shape[0]
        dout = kraus0.shape[1]
        c0 = np.empty((dout, m0), dtype=np.complex128)
        for i in range(m0):
            c0[:, i] = kraus0[i] @ psi0
        c1 = np.empty((dout, m1), dtype=np.complex128)
        for i in range(m1):
            c1[:, i] = kraus1[i] @ psi1
        u0, s0, _ = np.linalg.svd(c0, full_matrices=False)
        u1, s1, _ = np.linalg.svd(c1, full_matrices=False)
        r0 = 0
        for i in range(s0.shape[0]):
            if s0[i] > rank_tol * s0[0]:
                r0 += 1
        r1 = 0
        for i in range(s1.shape[0]):
            if s1[i] > rank_tol * s1[0]:
                r1 += 1
        if r0 == 0 or r1 == 0:
            return 0.0
        cross = u0[:, :r0].conj().T @ np.ascontiguousarray(u1[:, :r1])
        sv = np.linalg.svd(cross, full_matrices=False)[1]
        return min(sv[0], 1.0)

    support_sweep = support_sweep_nb
    shell_sweep = shell_sweep_nb
    output_fidelity = output_fidelity_nb
else:
    support_sweep_nb = None
    shell_sweep_nb = None
    output_fidelity_nb = None
    support_sweep = support_sweep_np
    shell_sweep = shell_sweep_np
    output_fidelity = output_fidelity_np

# The batched screen is vectorized numpy either way; per-batch LAPACK calls
# dominate and numba would only re-serialize them.
output_fidelity_batch = output_fidelity_batch_np
