"""Worked channel instances used in the examples and golden tests.

Includes the data-hiding pair: two state preparations that are disjoint but
leave the identity inside the cross span, and two three-outcome qubit
measurements with the opposite profile.
"""

from __future__ import annotations

import numpy as np

from .core import Measurement, PureState, QuantumChannel


def hiding_states() -> tuple[PureState, PureState]:
    """(|0⟩ + sqrt(2)|1⟩)/sqrt(3) and (|0⟩ - sqrt(2)|1⟩)/sqrt(3)."""
    s2 = np.sqrt(2.0)
    psi0 = PureState.from_vector(np.array([1.0, s2]) / np.sqrt(3.0))
    psi1 = PureState.from_vector(np.array([1.0, -s2]) / np.sqrt(3.0))
    return psi0, psi1


def preparation_pair() -> tuple[QuantumChannel, QuantumChannel]:
    """Constant qubit channels preparing the two hiding states."""
    psi0, psi1 = hiding_states()
    return (
        QuantumChannel.preparation(psi0, 2),
        QuantumChannel.preparation(psi1, 2),
    )


def measurement_pair() -> tuple[Measurement, Measurement]:
    """Three-outcome qubit measurements differing only in outcome ordering.

    The zero operator is a genuine outcome slot and is kept in place.
    """
    s = 1.0 / np.sqrt(2.0)
    m_big = np.diag([1.0, s]).astype(np.complex128)
    m_small = np.diag([0.0, s]).astype(np.complex128)
    zero = np.zeros((2, 2), dtype=np.complex128)
    return (
        Measurement((m_big, m_small, zero)),
        Measurement((m_big, zero, m_small)),
    )


def unitary_pair_identity_x() -> tuple[QuantumChannel, QuantumChannel]:
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    return QuantumChannel.identity(2), QuantumChannel.from_unitary(x)


def identity_vs_amplitude_damping(gamma: float = 0.5):
    return QuantumChannel.identity(2), QuantumChannel.amplitude_damping(gamma)


def diag_isometry_pair(lam0: float = 0.8, lam1: float = 0.5):
    """2 -> 4 isometries with U0†U1 = diag(lam0, lam1) (positive definite)."""
    u0 = np.zeros((4, 2), dtype=np.complex128)
    u0[0, 0] = 1.0
    u0[1, 1] = 1.0
    u1 = np.zeros((4, 2), dtype=np.complex128)
    u1[0, 0] = lam0
    u1[2, 0] = np.sqrt(1.0 - lam0 * lam0)
    u1[1, 1] = lam1
    u1[3, 1] = np.sqrt(1.0 - lam1 * lam1)
    return u0, u1


def diag_isometry_channels(lam0: float = 0.8, lam1: float = 0.5):
    u0, u1 = diag_isometry_pair(lam0, lam1)
    return QuantumChannel.from_isometry(u0), QuantumChannel.from_isometry(u1)
