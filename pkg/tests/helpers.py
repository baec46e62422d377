"""Shared random-instance generators for the test suite."""

import numpy as np

from opdist.core import DensityOperator, PureState, QuantumChannel


def random_pure(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.from_vector(v)


def random_density(d, rng, rank=None):
    r = rank if rank is not None else int(rng.integers(1, d + 1))
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def random_isometry(d_in, d_out, rng):
    g = rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in))
    q, r = np.linalg.qr(g)
    return q @ np.diag(np.sign(np.diag(r).real + 1e-30))


def random_channel(d, rng, n_kraus=2, d_out=None):
    d_out = d if d_out is None else d_out
    iso = random_isometry(d, n_kraus * d_out, rng)
    return QuantumChannel(tuple(iso[i * d_out:(i + 1) * d_out] for i in range(n_kraus)))


def random_unitary(d, rng):
    return random_isometry(d, d, rng)
