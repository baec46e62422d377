"""Flat-file formats: JSON channel files, CSV tables, and static SVG plots.

Channel files carry ``dims: [dimIn, dimOut]`` and a list of Kraus matrices
whose entries are [re, im] pairs in row-major nested arrays, plus an
optional ``kind`` tag ("channel", "isometry", "measurement" or "operator").
Floats are serialized with 17 significant digits so that
serialize -> parse -> serialize is byte-identical.
"""

from __future__ import annotations

import json

import numpy as np

from .core import Measurement, QuantumChannel, channel_from_measurement


class ChannelFileError(ValueError):
    """Malformed channel file or violated channel invariant."""


def _fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def _encode(obj) -> str:
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj)}")


def dumps_canonical(obj) -> str:
    return _encode(obj) + "\n"


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(e.real), float(e.imag)] for e in row] for row in np.asarray(m, dtype=np.complex128)]


def matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array(
            [[complex(e[0], e[1]) for e in row] for row in rows], dtype=np.complex128
        )
    except (TypeError, IndexError) as exc:
        raise ChannelFileError(f"matrix entries must be [re, im] pairs: {exc}") from exc


def channel_to_dict(channel: QuantumChannel, kind: str = "channel") -> dict:
    return {
        "kind": kind,
        "dims": [channel.dim_in, channel.dim_out],
        "kraus": [matrix_to_json(k) for k in channel.kraus],
    }


def measurement_to_dict(meas: Measurement) -> dict:
    shape = meas.operators[0].shape
    return {
        "kind": "measurement",
        "dims": [shape[1], shape[0]],
        "kraus": [matrix_to_json(m) for m in meas.operators],
    }


def channel_from_dict(data: dict) -> QuantumChannel:
    if not isinstance(data, dict) or "kraus" not in data:
        raise ChannelFileError("channel file needs a 'kraus' list")
    kind = data.get("kind", "channel")
    mats = [matrix_from_json(k) for k in data["kraus"]]
    if "dims" in data:
        din, dout = data["dims"]
        for m in mats:
            if kind == "measurement":
                continue
            if m.shape != (dout, din):
                raise ChannelFileError(
                    f"Kraus shape {m.shape} does not match dims [{din}, {dout}]"
                )
    try:
        if kind == "measurement":
            return channel_from_measurement(Measurement(tuple(mats)))
        if kind == "isometry":
            if len(mats) != 1:
                raise ChannelFileError("isometry files carry exactly one matrix")
            return QuantumChannel.from_isometry(mats[0])
        return QuantumChannel(tuple(mats))
    except ValueError as exc:
        raise ChannelFileError(str(exc)) from exc


def load_channel(path) -> QuantumChannel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ChannelFileError(f"cannot parse {path}: {exc}") from exc
    return channel_from_dict(data)


def load_operator(path) -> np.ndarray:
    """Read a bare square operator (kind 'operator', field 'matrix')."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ChannelFileError(f"cannot parse {path}: {exc}") from exc
    if isinstance(data, dict) and "matrix" in data:
        m = matrix_from_json(data["matrix"])
    elif isinstance(data, dict) and "kraus" in data and len(data["kraus"]) == 1:
        m = matrix_from_json(data["kraus"][0])
    else:
        raise ChannelFileError("operator file needs a 'matrix' field")
    if m.shape[0] != m.shape[1]:
        raise ChannelFileError("operator must be square")
    return m


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(obj))


def write_qrange_csv(path, zs: np.ndarray, heights: np.ndarray, moduli: np.ndarray,
                     radius: float) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("z_re,z_im,h,wq_min_modulus\n")
        for z, h, m in zip(zs, heights, moduli):
            fh.write(f"{_fmt_float(z.real)},{_fmt_float(z.imag)},"
                     f"{_fmt_float(h)},{_fmt_float(m)}\n")
        fh.write(f"# inner_radius,{_fmt_float(radius)}\n")


def write_qrange_svg(path, hull: np.ndarray, samples: np.ndarray) -> None:
    """Static 800x800 plot: W(A) hull as a polyline, W_q samples as circles."""
    size = 800
    pts = np.concatenate([hull, samples]) if samples.size else hull
    lo = min(pts.real.min(), pts.imag.min()) - 0.1
    hi = max(pts.real.max(), pts.imag.max()) + 0.1
    span = max(hi - lo, 1e-6)

    def sx(v):
        return (v - lo) / span * size

    def sy(v):
        return size - (v - lo) / span * size

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if hull.size:
        coords = " ".join(f"{sx(z.real):.2f},{sy(z.imag):.2f}" for z in hull)
        lines.append(
            f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="1.5"/>'
        )
    for z in samples:
        lines.append(
            f'<circle cx="{sx(z.real):.2f}" cy="{sy(z.imag):.2f}" r="1.5" '
            f'fill="steelblue" fill-opacity="0.5"/>'
        )
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
