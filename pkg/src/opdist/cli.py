"""Command-line front end.

Exit codes: 0 success / affirmative, 3 definite negative, 1 input error,
2 internal numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import catalog, io, qrange
from .core import dagger
from .discrimination import (
    NotDistinguishable,
    build_protocol,
    check_distinguishable,
    simulate_protocol,
)
from .fidelity import TransformInfeasible
from .io import ChannelFileError
from .qfidelity import QFidOptions, n_min, q_max, q_sequence

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_NEGATIVE = 3


def _state_to_json(psi):
    return [[float(c.real), float(c.imag)] for c in psi.vector]


def cmd_check(args) -> int:
    e0 = io.load_channel(args.file_a)
    e1 = io.load_channel(args.file_b)
    verdict = check_distinguishable(e0, e1)
    report = {
        "distinguishable": verdict.distinguishable,
        "conditionI": verdict.condition_i,
        "conditionII": verdict.condition_ii,
        "identityResidual": verdict.identity_residual,
        "iterations": verdict.disjointness.iterations,
    }
    if verdict.disjointness.witness is not None:
        report["witness"] = _state_to_json(verdict.disjointness.witness)
    print(io.dumps_canonical(report), end="")
    return EXIT_OK if verdict.distinguishable else EXIT_NEGATIVE


def cmd_protocol(args) -> int:
    e0 = io.load_channel(args.file_a)
    e1 = io.load_channel(args.file_b)
    try:
        protocol = build_protocol(e0, e1)
    except NotDistinguishable as exc:
        print(f"not distinguishable: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    g0, g1, err = simulate_protocol(protocol, e0, e1)
    psi0, psi1 = protocol.final_pair
    payload = {
        "N": protocol.copies,
        "totalQueries": protocol.total_queries,
        "errorBound": err,
        "guesses": [g0, g1],
        "pairOverlap": protocol.pair_overlap,
        "probeFidelity": protocol.probe_fidelity,
        "witness": _state_to_json(protocol.witness),
        "finalPair": [_state_to_json(psi0), _state_to_json(psi1)],
        "transformKraus": [io.matrix_to_json(k) for k in protocol.transform.kraus],
        "compression": io.matrix_to_json(protocol.compression),
        "finalProjector": io.matrix_to_json(protocol.final_projector),
    }
    if args.out:
        io.write_json(args.out, payload)
    summary = {"N": protocol.copies, "totalQueries": protocol.total_queries,
               "errorBound": err}
    print(io.dumps_canonical(summary), end="")
    return EXIT_OK


def cmd_nmin(args) -> int:
    e0 = io.load_channel(args.file_a)
    e1 = io.load_channel(args.file_b)
    opts = QFidOptions(seed=args.seed, starts=args.starts)
    seq = q_sequence(e0, e1, k_cap=args.kcap, opts=opts)
    qm = q_max(e0, e1, opts=opts)
    nm, bound = n_min(e0, e1, opts=opts, seq=seq, qmax=qm)
    report = {"q": list(seq.values), "qMax": qm}
    if nm is not None:
        report["nMin"] = nm
    if bound is not None:
        report["upperBound"] = bound
    print(io.dumps_canonical(report), end="")
    return EXIT_OK


def cmd_qrange(args) -> int:
    if args.file_b is not None:
        c0 = io.load_channel(args.file_a)
        c1 = io.load_channel(args.file_b)
        if len(c0.kraus) != 1 or len(c1.kraus) != 1:
            print("isometry pair expected (one Kraus operator each)", file=sys.stderr)
            return EXIT_INPUT
        a = dagger(c0.kraus[0]) @ c1.kraus[0]
    else:
        a = io.load_operator(args.file_a)

    model = qrange.shell_upper(a)
    radius = qrange.inner_radius(a, args.q, model=model)
    zs = model.shell_points[: args.points] if args.points else model.shell_points
    heights = model.shell_height(zs)
    moduli = qrange._disk_min_modulus(args.q, zs, heights)
    io.write_qrange_csv(args.csv, zs, heights, moduli, radius)
    if args.svg:
        qbar = np.sqrt(max(0.0, 1.0 - args.q ** 2))
        spread = np.sqrt(np.maximum(0.0, heights - np.abs(zs) ** 2))
        rng = np.random.default_rng(0)
        w = rng.standard_normal(zs.size) + 1j * rng.standard_normal(zs.size)
        w /= np.maximum(np.abs(w), 1e-12)
        cloud = args.q * zs + qbar * w * spread
        io.write_qrange_svg(args.svg, model.boundary, cloud)
    print(io.dumps_canonical({"innerRadius": radius, "q": args.q}), end="")
    return EXIT_OK


def cmd_examples(args) -> int:
    import os

    os.makedirs(args.outdir, exist_ok=True)

    def put(name, payload):
        io.write_json(os.path.join(args.outdir, name), payload)

    prep0, prep1 = catalog.preparation_pair()
    put("prepare_psi0.json", io.channel_to_dict(prep0))
    put("prepare_psi1.json", io.channel_to_dict(prep1))
    m0, m1 = catalog.measurement_pair()
    put("measurement_e0.json", io.measurement_to_dict(m0))
    put("measurement_e1.json", io.measurement_to_dict(m1))
    ident, xconj = catalog.unitary_pair_identity_x()
    put("identity.json", io.channel_to_dict(ident))
    put("unitary_x.json", io.channel_to_dict(xconj))
    for gamma in (0.25, 0.5, 0.75):
        _, ad = catalog.identity_vs_amplitude_damping(gamma)
        put(f"amplitude_damping_{gamma:g}.json", io.channel_to_dict(ad))
    u0, u1 = catalog.diag_isometry_pair()
    put("isometry_u0.json", io.channel_to_dict(
        catalog.QuantumChannel.from_isometry(u0), kind="isometry"))
    put("isometry_u1.json", io.channel_to_dict(
        catalog.QuantumChannel.from_isometry(u1), kind="isometry"))
    put("operator_pd.json", {"kind": "operator",
                             "matrix": io.matrix_to_json(np.diag([0.8, 0.5]))})

    # The hiding identity: tr((|0><0| + 1/2 |1><1|) |psi0><psi1|) = 0.
    psi0, psi1 = catalog.hiding_states()
    weight = np.diag([1.0, 0.5])
    residual = abs(np.vdot(psi1.vector, weight @ psi0.vector))
    print(io.dumps_canonical({
        "outdir": args.outdir,
        "hidingOrthogonalityResidual": residual,
    }), end="")
    return EXIT_OK if residual < 1e-12 else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opdist",
        description="Zero-error discrimination of quantum operations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide finite-query distinguishability")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("protocol", help="construct and simulate the protocol")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--out", default=None, help="write the full protocol JSON here")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("nmin", help="q-sequence, q_max and minimal query count")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--kcap", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=32)
    p.set_defaults(func=cmd_nmin)

    p = sub.add_parser("qrange", help="export q-numerical-range data")
    p.add_argument("file_a", help="operator file, or first isometry")
    p.add_argument("file_b", nargs="?", default=None, help="second isometry")
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--points", type=int, default=0, help="cap on CSV sample rows")
    p.add_argument("--csv", default="qrange.csv")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_qrange)

    p = sub.add_parser("examples", help="write the worked channel instances")
    p.add_argument("--outdir", default="opdist-examples")
    p.set_defaults(func=cmd_examples)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChannelFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TransformInfeasible, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
