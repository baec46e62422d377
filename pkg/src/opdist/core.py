"""Quantum object model: pure states, density operators, channels, measurements.

All values are immutable after construction and validated against their
defining constraints (unit norm, positivity, trace preservation).  Matrices
are dense complex128 numpy arrays; dimensions beyond a few dozen are out of
scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

# Eigenvalues above RANK_TOL * (largest eigenvalue) count as support.
RANK_TOL = 1e-8

HERMITICITY_TOL = 1e-10
NORM_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
PHASE_TOL = 1e-10


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


def as_matrix(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a finite complex 2-D array, optionally checking the shape."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m.view(np.float64))):
        raise ValueError("matrix contains non-finite entries")
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatch(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise DimensionMismatch(f"expected {cols} cols, got {m.shape[1]}")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the first sizable component is real positive."""
    idx = np.flatnonzero(np.abs(v) > PHASE_TOL)
    if idx.size == 0:
        return v
    pivot = v[idx[0]]
    return v * (abs(pivot) / pivot)


@dataclass(frozen=True)
class PureState:
    """Unit vector with a canonical global phase."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.complex128).ravel()
        if v.size == 0:
            raise ValueError("empty state vector")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("state vector contains non-finite entries")
        n = np.linalg.norm(v)
        if abs(n - 1.0) > 1e-8:
            raise ValueError(f"state vector norm {n} is not 1")
        v = _canonical_phase(v / n)
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_vector(cls, v) -> "PureState":
        """Normalize an arbitrary nonzero vector into a PureState."""
        v = np.asarray(v, dtype=np.complex128).ravel()
        n = np.linalg.norm(v)
        if n < 1e-14:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / n)

    @property
    def dim(self) -> int:
        return self.vector.size

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.vector, self.vector.conj()))

    def projector(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())

    def overlap(self, other: "PureState") -> complex:
        if self.dim != other.dim:
            raise DimensionMismatch("states live on different dimensions")
        return complex(np.vdot(self.vector, other.vector))


@dataclass(frozen=True)
class DensityOperator:
    """Positive unit-trace operator with a lazily computed support basis."""

    matrix: np.ndarray
    rank_tolerance: float = RANK_TOL

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("density operator must be square")
        if np.max(np.abs(m - dagger(m))) > 1e-8:
            raise ValueError("density operator is not Hermitian")
        m = 0.5 * (m + dagger(m))
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"density operator trace {tr} is not 1")
        if np.linalg.eigvalsh(m)[0] < -1e-8:
            raise ValueError("density operator has a significantly negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eig(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = np.linalg.eigh(self.matrix)
        return w, v

    @cached_property
    def support_basis(self) -> np.ndarray:
        """Orthonormal columns spanning the eigenspaces above the rank cut."""
        w, v = self._eig
        cut = self.rank_tolerance * max(w[-1], 0.0)
        basis = v[:, w > cut]
        basis.setflags(write=False)
        return basis

    @property
    def rank(self) -> int:
        return self.support_basis.shape[1]


@dataclass(frozen=True)
class QuantumChannel:
    """Trace-preserving completely positive map given by Kraus operators."""

    kraus: tuple
    has_zero_kraus: bool = field(init=False, default=False)

    def __post_init__(self):
        if len(self.kraus) == 0:
            raise ValueError("channel needs at least one Kraus operator")
        mats = tuple(as_matrix(k) for k in self.kraus)
        shape = mats[0].shape
        for k in mats:
            if k.shape != shape:
                raise DimensionMismatch("Kraus operators have inconsistent shapes")
        gram = sum(dagger(k) @ k for k in mats)
        if np.max(np.abs(gram - np.eye(shape[1]))) > COMPLETENESS_TOL:
            raise ValueError("Kraus operators do not satisfy sum K†K = I")
        for k in mats:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", mats)
        object.__setattr__(
            self, "has_zero_kraus", any(np.max(np.abs(k)) < 1e-14 for k in mats)
        )

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    @classmethod
    def identity(cls, d: int) -> "QuantumChannel":
        return cls((np.eye(d),))

    @classmethod
    def from_unitary(cls, u) -> "QuantumChannel":
        return cls.from_isometry(u)

    @classmethod
    def from_isometry(cls, v) -> "QuantumChannel":
        v = as_matrix(v)
        if np.max(np.abs(dagger(v) @ v - np.eye(v.shape[1]))) > COMPLETENESS_TOL:
            raise ValueError("matrix is not an isometry")
        return cls((v,))

    @classmethod
    def amplitude_damping(cls, gamma: float) -> "QuantumChannel":
        if not 0.0 <= gamma <= 1.0:
            raise ValueError("gamma must be in [0, 1]")
        k0 = np.diag([1.0, np.sqrt(1.0 - gamma)]).astype(np.complex128)
        k1 = np.zeros((2, 2), dtype=np.complex128)
        k1[0, 1] = np.sqrt(gamma)
        return cls((k0, k1))

    @classmethod
    def preparation(cls, target: PureState, dim_in: int) -> "QuantumChannel":
        """Constant channel mapping every input state to ``target``."""
        t = target.vector.reshape(-1, 1)
        basis = np.eye(dim_in, dtype=np.complex128)
        return cls(tuple(t @ basis[i : i + 1, :] for i in range(dim_in)))


@dataclass(frozen=True)
class Measurement:
    """Ordered tuple of measurement operators with sum M†M = I."""

    operators: tuple

    def __post_init__(self):
        if len(self.operators) == 0:
            raise ValueError("measurement needs at least one operator")
        mats = tuple(as_matrix(m) for m in self.operators)
        shape = mats[0].shape
        for m in mats:
            if m.shape != shape:
                raise DimensionMismatch("measurement operators have inconsistent shapes")
        gram = sum(dagger(m) @ m for m in mats)
        if np.max(np.abs(gram - np.eye(shape[1]))) > COMPLETENESS_TOL:
            raise ValueError("measurement operators do not satisfy sum M†M = I")
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "operators", mats)


def apply_channel(channel: QuantumChannel, rho: DensityOperator) -> DensityOperator:
    """Evaluate sum_i K_i rho K_i†."""
    if rho.dim != channel.dim_in:
        raise DimensionMismatch(
            f"state dim {rho.dim} does not match channel input dim {channel.dim_in}"
        )
    out = np.zeros((channel.dim_out, channel.dim_out), dtype=np.complex128)
    for k in channel.kraus:
        out += k @ rho.matrix @ dagger(k)
    return DensityOperator(out, rank_tolerance=rho.rank_tolerance)


def extend_with_ancilla(channel: QuantumChannel, d_ancilla: int) -> QuantumChannel:
    """Tensor an untouched ancilla of dimension ``d_ancilla`` on the left."""
    if d_ancilla < 1:
        raise ValueError("ancilla dimension must be positive")
    eye = np.eye(d_ancilla, dtype=np.complex128)
    return QuantumChannel(tuple(np.kron(eye, k) for k in channel.kraus))


def channel_from_measurement(meas: Measurement) -> QuantumChannel:
    """Kraus operators M_k ⊗ |k⟩ with a classical outcome register appended.

    Zero measurement operators yield zero Kraus blocks; they are retained so
    the outcome ordering of the register is preserved.
    """
    m = len(meas.operators)
    reg = np.eye(m, dtype=np.complex128)
    return QuantumChannel(
        tuple(np.kron(op, reg[:, k : k + 1]) for k, op in enumerate(meas.operators))
    )


def max_entangled(d: int) -> PureState:
    """(1/sqrt(d)) sum_k |k⟩|k⟩ on dimension d²."""
    if d < 1:
        raise ValueError("dimension must be positive")
    v = np.zeros(d * d, dtype=np.complex128)
    v[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(v)


def support_projector(rho: DensityOperator) -> np.ndarray:
    """Hermitian idempotent onto the support of rho."""
    b = rho.support_basis
    return b @ dagger(b)
