import numpy as np
import pytest

from opdist import kernels
from opdist.catalog import (
    preparation_pair,
    unitary_pair_identity_x,
)
from opdist.core import QuantumChannel, apply_channel
from opdist.fidelity import max_fidelity
from opdist.qfidelity import (
    QFidOptions,
    _pair_from_params,
    n_min,
    q_fidelity,
    q_fidelity_ea,
    q_max,
    q_sequence,
    unassisted_disjoint_search,
)
from helpers import random_channel, random_pure

FAST = QFidOptions(starts=4, screen=64)
MEDIUM = QFidOptions(starts=8, screen=128)


def diag_phase_isometry_channels():
    """2 -> 2 isometry pair with U0†U1 = diag(1, i)."""
    u0 = np.eye(2, dtype=np.complex128)
    u1 = np.diag([1.0, 1j])
    return QuantumChannel.from_unitary(u0), QuantumChannel.from_unitary(u1)


class TestQFidelity:
    def test_constant_channel_pair(self):
        prep, _ = preparation_pair()
        for q in (0.0, 0.5, 1.0):
            assert q_fidelity(prep, prep, q, MEDIUM).value == pytest.approx(
                1.0, abs=1e-9)

    def test_identity_pair_returns_q(self):
        ident = QuantumChannel.identity(2)
        for q in (0.0, 0.3, 0.7, 1.0):
            assert q_fidelity(ident, ident, q, MEDIUM).value == pytest.approx(
                q, abs=1e-6)

    def test_identity_vs_x_vanishes_at_one(self):
        e0, e1 = unitary_pair_identity_x()
        assert q_fidelity(e0, e1, 1.0, MEDIUM).value < 1e-8

    def test_invalid_q_rejected(self):
        e0, e1 = unitary_pair_identity_x()
        with pytest.raises(ValueError):
            q_fidelity(e0, e1, 1.5)

    def test_result_invariants(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            e0 = random_channel(2, rng, n_kraus=2)
            e1 = random_channel(2, rng, n_kraus=2)
            q = float(rng.uniform(0.1, 0.9))
            res = q_fidelity(e0, e1, q, MEDIUM)
            assert abs(abs(res.psi0.overlap(res.psi1)) - q) < 1e-8
            out0 = apply_channel(e0, res.psi0.density())
            out1 = apply_channel(e1, res.psi1.density())
            assert abs(res.value - max_fidelity(out0, out1)) < 1e-8

    def test_seed_determinism(self):
        rng = np.random.default_rng(1)
        e0 = random_channel(2, rng, n_kraus=2)
        e1 = random_channel(2, rng, n_kraus=2)
        a = q_fidelity(e0, e1, 0.4, FAST)
        b = q_fidelity(e0, e1, 0.4, FAST)
        assert a.value == b.value
        assert np.array_equal(a.psi0.vector, b.psi0.vector)

    def test_brute_force_never_beats_optimizer(self):
        rng = np.random.default_rng(2)
        for _ in range(3):
            e0 = random_channel(2, rng, n_kraus=2)
            e1 = random_channel(2, rng, n_kraus=2)
            q = float(rng.uniform(0.2, 0.9))
            opt = q_fidelity(e0, e1, q, MEDIUM).value
            xs = rng.standard_normal((10_000, 8))
            p0 = np.empty((10_000, 2), dtype=np.complex128)
            p1 = np.empty((10_000, 2), dtype=np.complex128)
            for i, x in enumerate(xs):
                p0[i], p1[i] = _pair_from_params(x, 2, q)
            k0 = np.ascontiguousarray(np.stack(e0.kraus))
            k1 = np.ascontiguousarray(np.stack(e1.kraus))
            brute = float(kernels.output_fidelity_batch(k0, k1, p0, p1).min())
            assert opt <= brute + 2e-3


class TestQFidelityEa:
    def test_identical_channels_return_q(self):
        # Parking the overlap in the ancilla gives output fidelity exactly q,
        # and monotonicity of fidelity under channels forbids anything less.
        rng = np.random.default_rng(3)
        chan = random_channel(2, rng, n_kraus=2)
        for q in (0.25, 0.75):
            assert q_fidelity_ea(chan, chan, q, FAST).value == pytest.approx(
                q, abs=1e-6)

    def test_hiding_preparations(self):
        e0, e1 = preparation_pair()
        res = q_fidelity_ea(e0, e1, 1.0, FAST)
        assert res.value == pytest.approx(1.0 / 3.0, abs=1e-8)


class TestQSequence:
    def test_identity_vs_x(self):
        seq = q_sequence(*unitary_pair_identity_x(), opts=FAST)
        assert seq.values[0] == 1.0
        assert seq.values[1] == 0.0
        assert seq.n_min == 1

    def test_identical_channels(self):
        rng = np.random.default_rng(4)
        chan = random_channel(2, rng, n_kraus=2)
        seq = q_sequence(chan, chan, k_cap=3, opts=FAST)
        assert seq.n_min is None
        assert all(v > 1.0 - 1e-6 for v in seq.values)

    def test_diag_phase_isometries(self):
        e0, e1 = diag_phase_isometry_channels()
        seq = q_sequence(e0, e1, opts=MEDIUM)
        assert seq.values[1] == pytest.approx(1 / np.sqrt(2), abs=2e-3)
        assert seq.values[2] == 0.0
        assert seq.n_min == 2

    def test_kcap_guard(self):
        e0, e1 = unitary_pair_identity_x()
        with pytest.raises(ValueError):
            q_sequence(e0, e1, k_cap=17)

    def test_monotone_decay(self):
        rng = np.random.default_rng(5)
        for _ in range(3):
            e0 = random_channel(2, rng, n_kraus=2)
            e1 = random_channel(2, rng, n_kraus=2)
            seq = q_sequence(e0, e1, k_cap=4, opts=MEDIUM)
            q1 = seq.values[1]
            for k in range(1, len(seq.values) - 1):
                assert seq.values[k + 1] <= seq.values[k] * q1 + 2e-3


class TestQMax:
    def test_identity_vs_x(self):
        assert q_max(*unitary_pair_identity_x(), opts=FAST) == pytest.approx(
            1.0, abs=1e-9)

    def test_identical_channels(self):
        rng = np.random.default_rng(6)
        chan = random_channel(2, rng, n_kraus=2)
        assert q_max(chan, chan, opts=FAST) == pytest.approx(0.0, abs=1e-4)


class TestNMin:
    def test_identity_vs_x(self):
        nm, bound = n_min(*unitary_pair_identity_x(), opts=FAST)
        assert nm == 1 and bound == 1

    def test_identical_channels(self):
        rng = np.random.default_rng(7)
        chan = random_channel(2, rng, n_kraus=2)
        nm, bound = n_min(chan, chan, opts=FAST)
        assert nm is None and bound is None

    def test_diag_phase_isometries(self):
        e0, e1 = diag_phase_isometry_channels()
        seq = q_sequence(e0, e1, opts=MEDIUM)
        qm = q_max(e0, e1, opts=MEDIUM)
        nm, bound = n_min(e0, e1, opts=MEDIUM, seq=seq, qmax=qm)
        assert nm == 2
        # q1 equals q_max exactly here, so the log-ratio bound sits on the
        # integer boundary; only its existence is asserted.
        assert bound in (1, 2)


class TestUnassistedSearch:
    def test_identity_vs_x(self):
        e0, e1 = unitary_pair_identity_x()
        psi = unassisted_disjoint_search(e0, e1, FAST)
        assert psi is not None
        out0 = apply_channel(e0, psi.density())
        out1 = apply_channel(e1, psi.density())
        assert max_fidelity(out0, out1) < 1.0 - 1e-6

    def test_identical_channels(self):
        rng = np.random.default_rng(8)
        chan = random_channel(2, rng, n_kraus=2)
        assert unassisted_disjoint_search(chan, chan, FAST) is None

    def test_hiding_preparations_found_without_ancilla(self):
        # Constant preparations always output the same non-orthogonal pure
        # pair; any input certifies the fixed output fidelity of 1/3.
        e0, e1 = preparation_pair()
        psi = unassisted_disjoint_search(e0, e1, FAST)
        assert psi is not None
        out0 = apply_channel(e0, psi.density())
        out1 = apply_channel(e1, psi.density())
        assert max_fidelity(out0, out1) == pytest.approx(1.0 / 3.0, abs=1e-9)
