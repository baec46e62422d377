import json
import os

import numpy as np
import pytest

from opdist import io
from opdist.catalog import (
    identity_vs_amplitude_damping,
    measurement_pair,
    unitary_pair_identity_x,
)
from opdist.cli import main
from opdist.core import QuantumChannel
from helpers import random_channel


def write_channel(path, chan, kind="channel"):
    io.write_json(path, io.channel_to_dict(chan, kind=kind))
    return str(path)


class TestCanonicalJson:
    def test_float_precision(self):
        assert io.dumps_canonical(1 / 3) == "0.33333333333333331\n"

    def test_bool_not_int(self):
        assert io.dumps_canonical({"a": True, "b": 0}) == '{"a": true, "b": 0}\n'

    def test_round_trip_byte_identical(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            chan = random_channel(3, rng, n_kraus=2)
            first = io.dumps_canonical(io.channel_to_dict(chan))
            reparsed = io.channel_from_dict(json.loads(first))
            second = io.dumps_canonical(io.channel_to_dict(reparsed))
            assert first == second

    def test_complex_entries_as_pairs(self):
        data = io.channel_to_dict(QuantumChannel.from_unitary(np.diag([1.0, 1j])))
        assert data["kraus"][0][1][1] == [0.0, 1.0]


class TestChannelFiles:
    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(io.ChannelFileError):
            io.load_channel(bad)

    def test_missing_kraus(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dims": [2, 2]}')
        with pytest.raises(io.ChannelFileError):
            io.load_channel(bad)

    def test_completeness_violation(self, tmp_path):
        data = io.channel_to_dict(QuantumChannel.identity(2))
        data["kraus"][0][0][0] = [0.999, 0.0]
        bad = tmp_path / "bad.json"
        bad.write_text(io.dumps_canonical(data))
        with pytest.raises(io.ChannelFileError):
            io.load_channel(bad)

    def test_shape_dims_mismatch(self, tmp_path):
        data = io.channel_to_dict(QuantumChannel.identity(2))
        data["dims"] = [3, 3]
        bad = tmp_path / "bad.json"
        bad.write_text(io.dumps_canonical(data))
        with pytest.raises(io.ChannelFileError):
            io.load_channel(bad)

    def test_measurement_kind(self, tmp_path):
        m0, _ = measurement_pair()
        path = tmp_path / "m.json"
        io.write_json(path, io.measurement_to_dict(m0))
        chan = io.load_channel(path)
        assert chan.dim_in == 2 and chan.dim_out == 6

    def test_isometry_kind(self, tmp_path):
        iso = np.zeros((3, 2), dtype=np.complex128)
        iso[0, 0] = iso[1, 1] = 1.0
        path = tmp_path / "iso.json"
        io.write_json(path, io.channel_to_dict(
            QuantumChannel.from_isometry(iso), kind="isometry"))
        chan = io.load_channel(path)
        assert chan.dim_in == 2 and chan.dim_out == 3

    def test_operator_file(self, tmp_path):
        path = tmp_path / "op.json"
        io.write_json(path, {"kind": "operator",
                             "matrix": io.matrix_to_json(np.diag([0.8, 0.5]))})
        m = io.load_operator(path)
        assert np.abs(m - np.diag([0.8, 0.5])).max() < 1e-15


class TestCliExitCodes:
    def test_check_distinguishable(self, tmp_path, capsys):
        e0, e1 = unitary_pair_identity_x()
        a = write_channel(tmp_path / "a.json", e0)
        b = write_channel(tmp_path / "b.json", e1)
        assert main(["check", a, b]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["distinguishable"] is True
        assert report["conditionI"] is True and report["conditionII"] is True

    def test_check_identical(self, tmp_path, capsys):
        chan = random_channel(2, np.random.default_rng(1), n_kraus=2)
        a = write_channel(tmp_path / "a.json", chan)
        b = write_channel(tmp_path / "b.json", chan)
        assert main(["check", a, b]) == 3
        report = json.loads(capsys.readouterr().out)
        assert report["distinguishable"] is False

    def test_check_input_error(self, tmp_path, capsys):
        data = io.channel_to_dict(QuantumChannel.identity(2))
        data["kraus"][0][0][0] = [0.999, 0.0]
        bad = tmp_path / "bad.json"
        bad.write_text(io.dumps_canonical(data))
        a = write_channel(tmp_path / "a.json", QuantumChannel.identity(2))
        assert main(["check", str(bad), a]) == 1

    def test_protocol_single_query(self, tmp_path, capsys):
        e0, e1 = unitary_pair_identity_x()
        a = write_channel(tmp_path / "a.json", e0)
        b = write_channel(tmp_path / "b.json", e1)
        out = tmp_path / "protocol.json"
        assert main(["protocol", a, b, "--out", str(out)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["N"] == 0 and summary["totalQueries"] == 1
        assert summary["errorBound"] < 1e-12
        payload = json.loads(out.read_text())
        assert payload["totalQueries"] == 1

    def test_protocol_amplitude_damping(self, tmp_path, capsys):
        e0, e1 = identity_vs_amplitude_damping(0.5)
        a = write_channel(tmp_path / "a.json", e0)
        b = write_channel(tmp_path / "b.json", e1)
        assert main(["protocol", a, b]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["N"] >= 1
        assert summary["errorBound"] < 1e-7

    def test_protocol_negative(self, tmp_path, capsys):
        chan = random_channel(2, np.random.default_rng(2), n_kraus=2)
        a = write_channel(tmp_path / "a.json", chan)
        b = write_channel(tmp_path / "b.json", chan)
        assert main(["protocol", a, b]) == 3

    def test_nmin_identity_vs_x(self, tmp_path, capsys):
        e0, e1 = unitary_pair_identity_x()
        a = write_channel(tmp_path / "a.json", e0)
        b = write_channel(tmp_path / "b.json", e1)
        assert main(["nmin", a, b, "--starts", "4"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["q"][0] == 1.0 and report["q"][1] == 0.0
        assert report["nMin"] == 1
        assert report["qMax"] == pytest.approx(1.0, abs=1e-9)

    def test_qrange_operator(self, tmp_path, capsys):
        op = tmp_path / "op.json"
        io.write_json(op, {"kind": "operator",
                           "matrix": io.matrix_to_json(np.diag([0.8, 0.5]))})
        csv = tmp_path / "out.csv"
        svg = tmp_path / "out.svg"
        assert main(["qrange", str(op), "--q", "0.5", "--points", "50",
                     "--csv", str(csv), "--svg", str(svg)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["innerRadius"] == pytest.approx(0.175, abs=1e-3)
        lines = csv.read_text().strip().splitlines()
        assert lines[0] == "z_re,z_im,h,wq_min_modulus"
        assert lines[-1].startswith("# inner_radius,")
        assert svg.read_text().startswith("<svg")

    def test_qrange_isometry_pair(self, tmp_path, capsys):
        from opdist.catalog import diag_isometry_pair
        u0, u1 = diag_isometry_pair()
        a = write_channel(tmp_path / "u0.json",
                          QuantumChannel.from_isometry(u0), kind="isometry")
        b = write_channel(tmp_path / "u1.json",
                          QuantumChannel.from_isometry(u1), kind="isometry")
        csv = tmp_path / "out.csv"
        assert main(["qrange", a, b, "--q", "1.0", "--points", "20",
                     "--csv", str(csv)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["innerRadius"] == pytest.approx(0.5, abs=1e-3)

    def test_examples_command(self, tmp_path, capsys):
        outdir = tmp_path / "examples"
        assert main(["examples", "--outdir", str(outdir)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["hidingOrthogonalityResidual"] < 1e-12
        m0 = outdir / "measurement_e0.json"
        m1 = outdir / "measurement_e1.json"
        assert m0.exists() and m1.exists()
        # The generated measurement pair is valid but not distinguishable.
        assert main(["check", str(m0), str(m1)]) == 3
        report = json.loads(capsys.readouterr().out)
        assert report["conditionI"] is False and report["conditionII"] is True

    def test_determinism(self, tmp_path, capsys):
        e0, e1 = unitary_pair_identity_x()
        a = write_channel(tmp_path / "a.json", e0)
        b = write_channel(tmp_path / "b.json", e1)
        main(["nmin", a, b, "--starts", "4", "--seed", "7"])
        first = capsys.readouterr().out
        main(["nmin", a, b, "--starts", "4", "--seed", "7"])
        second = capsys.readouterr().out
        assert first == second
