"""End-to-end acceptance checks; one test per criterion, named so the
``pytest -v`` line doubles as the pass/fail report."""

import math

import numpy as np
import pytest

from opdist.catalog import (
    diag_isometry_channels,
    diag_isometry_pair,
    hiding_states,
    identity_vs_amplitude_damping,
    measurement_pair,
    unitary_pair_identity_x,
)
from opdist.core import (
    DensityOperator,
    QuantumChannel,
    channel_from_measurement,
    dagger,
)
from opdist.discrimination import (
    build_protocol,
    check_distinguishable,
    simulate_protocol,
)
from opdist.disjointness import ea_disjoint, verify_witness
from opdist.fidelity import (
    TransformInfeasible,
    build_transform,
    max_fidelity,
)
from opdist.qfidelity import (
    QFidOptions,
    n_min,
    q_fidelity,
    q_fidelity_ea,
    q_max,
    q_sequence,
)
from opdist.qrange import (
    check_tensor_identity,
    inner_radius,
    numerical_range,
    pd_n_min,
    shell_upper,
)
from helpers import random_channel, random_density, random_isometry, random_pure

OPT = QFidOptions(starts=8, screen=128)
FAST = QFidOptions(starts=6, screen=96)


def test_criterion_01_hiding_example_orthogonality_and_verdict():
    psi0, psi1 = hiding_states()
    weight = np.diag([1.0, 0.5])
    residual = abs(np.vdot(psi1.vector, weight @ psi0.vector))
    assert residual < 1e-12
    m0, m1 = measurement_pair()
    verdict = check_distinguishable(channel_from_measurement(m0),
                                    channel_from_measurement(m1))
    assert verdict.condition_i is False
    assert verdict.condition_ii is True


def test_criterion_02_identity_vs_x_one_query():
    e0, e1 = unitary_pair_identity_x()
    assert check_distinguishable(e0, e1).distinguishable
    nm, _ = n_min(e0, e1, opts=OPT)
    assert nm == 1
    protocol = build_protocol(e0, e1)
    assert protocol.total_queries == 1
    g0, g1, err = simulate_protocol(protocol, e0, e1)
    assert (g0, g1) == (0, 1)
    assert err < 1e-12


def test_criterion_03_amplitude_damping_zero_error_protocol():
    e0, e1 = identity_vs_amplitude_damping(0.5)
    verdict = check_distinguishable(e0, e1)
    assert verdict.condition_i and verdict.condition_ii
    protocol = build_protocol(e0, e1)
    f, q = protocol.probe_fidelity, protocol.pair_overlap
    assert 0.0 < f < 1.0 and 0.0 < q < 1.0
    assert protocol.copies == math.ceil(math.log(q) / math.log(f))
    g0, g1, err = simulate_protocol(protocol, e0, e1)
    assert (g0, g1) == (0, 1)
    assert err < 1e-7


def test_criterion_04_transform_constructor_suite():
    rng = np.random.default_rng(104)
    built = refused = 0
    while built + refused < 200:
        d = int(rng.integers(2, 4))
        rho0 = random_density(d, rng)
        rho1 = random_density(d, rng)
        f = max_fidelity(rho0, rho1)
        t = float(rng.uniform(0.0, 1.0))
        if abs(f - t) <= 1e-6:
            continue
        t0 = random_pure(d, rng)
        w = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        w = w - np.vdot(t0.vector, w) * t0.vector
        w /= np.linalg.norm(w)
        from opdist.core import PureState
        t1 = PureState.from_vector(t * t0.vector + np.sqrt(1 - t * t) * w)
        if f > t + 1e-6:
            with pytest.raises(TransformInfeasible):
                build_transform(rho0, rho1, t0, t1)
            refused += 1
            continue
        chan = build_transform(rho0, rho1, t0, t1)
        comp = sum(dagger(k) @ k for k in chan.kraus)
        assert np.abs(comp - np.eye(d)).max() < 1e-9
        for rho, target in ((rho0, t0), (rho1, t1)):
            out = sum(k @ rho.matrix @ dagger(k) for k in chan.kraus)
            fid = float(np.vdot(target.vector, out @ target.vector).real)
            assert fid >= 1.0 - 1e-8
        built += 1
    assert built > 0 and refused > 0


def test_criterion_05_multiplicativity_and_tensor_powers():
    rng = np.random.default_rng(105)
    for _ in range(20):
        rho, rhop = random_density(2, rng), random_density(2, rng)
        sig, sigp = random_density(3, rng), random_density(3, rng)
        lhs = max_fidelity(DensityOperator(np.kron(rho.matrix, sig.matrix)),
                           DensityOperator(np.kron(rhop.matrix, sigp.matrix)))
        assert abs(lhs - max_fidelity(rho, rhop) * max_fidelity(sig, sigp)) < 1e-8
    for _ in range(10):
        rho0, rho1 = random_density(2, rng), random_density(2, rng)
        f = max_fidelity(rho0, rho1)
        p0, p1 = rho0.matrix, rho1.matrix
        for n in (2, 3):
            p0 = np.kron(p0, rho0.matrix)
            p1 = np.kron(p1, rho1.matrix)
            fn = max_fidelity(DensityOperator(p0), DensityOperator(p1))
            assert abs(fn - f ** n) < 1e-7


def test_criterion_06_separability_monotonicity():
    rng = np.random.default_rng(106)
    grid = (0.2, 0.4, 0.6, 0.8, 1.0)
    stronger = (QFidOptions(starts=24, screen=384),
                QFidOptions(starts=64, screen=1024, seed=5),
                QFidOptions(starts=128, screen=2048, seed=9))
    for _ in range(50):
        e0 = random_channel(2, rng, n_kraus=2)
        e1 = random_channel(2, rng, n_kraus=2)
        vals = {q: q_fidelity_ea(e0, e1, q, FAST).value for q in grid}
        for i, q in enumerate(grid):
            for qp in grid[i + 1:]:
                bound = (q / qp) * vals[qp] + 2e-3
                for opts in stronger:
                    if vals[q] <= bound:
                        break
                    # Reported values only upper-bound the true minimum;
                    # tighten the optimization before judging the inequality.
                    vals[q] = min(vals[q], q_fidelity_ea(e0, e1, q, opts).value)
                assert vals[q] <= bound


def test_criterion_07_isometry_cross_oracle():
    rng = np.random.default_rng(107)
    shapes = ((2, 2), (2, 3), (3, 3))
    for i in range(20):
        din, dout = shapes[i % 3]
        u0 = random_isometry(din, dout, rng)
        u1 = random_isometry(din, dout, rng)
        a = dagger(u0) @ u1
        model = shell_upper(a)
        e0 = QuantumChannel.from_isometry(u0)
        e1 = QuantumChannel.from_isometry(u1)
        for q in (0.25, 0.5, 0.75, 1.0):
            r = inner_radius(a, q, model=model)
            assert abs(q_fidelity(e0, e1, q, OPT).value - r) < 2e-3
            assert abs(q_fidelity_ea(e0, e1, q, OPT).value - r) < 2e-3
        if i < 3:
            _, _, delta = check_tensor_identity(a, 0.5)
            assert delta < 1e-3


def test_criterion_08_positive_definite_worked_instance():
    e0, e1 = diag_isometry_channels(0.8, 0.5)
    seq = q_sequence(e0, e1, opts=OPT)
    expected = (1.0, 0.5, 0.175, 0.0)
    assert len(seq.values) == 4
    for got, want in zip(seq.values, expected):
        assert abs(got - want) < 1e-3
    recursion_n, formula_n = pd_n_min(0.8, 0.5)
    assert recursion_n == 3
    assert isinstance(formula_n, int)  # surfaced, not asserted equal
    qm = q_max(e0, e1, opts=OPT)
    assert abs(qm - 0.3 / 1.3) < 1e-4
    first_zero = next(k for k, v in enumerate(seq.values) if k >= 1 and v == 0.0)
    first_below = next(k for k in range(1, len(seq.values))
                       if seq.values[k - 1] <= qm + 1e-4)
    assert first_zero == first_below == 3
    nm, _ = n_min(e0, e1, opts=OPT, seq=seq, qmax=qm)
    assert nm == 3


def test_criterion_09_disjointness_procedure():
    rng = np.random.default_rng(109)
    witnesses = 0
    for _ in range(40):
        d = int(rng.integers(2, 4))
        e0 = random_channel(d, rng, n_kraus=int(rng.integers(1, 3)))
        e1 = random_channel(d, rng, n_kraus=int(rng.integers(1, 3)))
        report = ea_disjoint(e0, e1)
        assert report.iterations <= d
        if report.disjoint:
            witnesses += 1
            assert verify_witness(e0, e1, report.witness)
        same = ea_disjoint(e0, e0)
        assert not same.disjoint
        assert same.iterations <= d
    assert witnesses > 0


def test_criterion_10_qrange_engine():
    jordan = np.array([[0, 1], [0, 0]], dtype=np.complex128)
    model = numerical_range(jordan)
    radius = float(np.abs(model.boundary).max())
    assert abs(radius - 0.5) < 1e-4
    rng = np.random.default_rng(110)
    v = rng.standard_normal((100_000, 2)) + 1j * rng.standard_normal((100_000, 2))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    brute = float(np.abs(np.einsum("bi,ij,bj->b", v.conj(), jordan, v)).max())
    assert abs(radius - brute) < 1e-3

    for a in (jordan, rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))):
        shell = shell_upper(a)
        assert np.all(shell.shell_heights >= np.abs(shell.shell_points) ** 2 - 1e-9)

    u = np.diag([1.0, np.exp(0.3j), np.exp(-1.1j)])
    shell = shell_upper(u)
    assert np.abs(shell.shell_heights - 1.0).max() < 1e-9
