"""CLI client: exit codes, output formats, determinism."""

import json
import math

import pytest

from deltawell.cli import main


@pytest.fixture()
def packet_file(tmp_path):
    path = tmp_path / "packet.json"
    r = 1.0 / math.sqrt(2.0)
    path.write_text(json.dumps({
        "L": 1.0, "hbar": 1.0, "mass": 1.0,
        "coeffs": [{"re": r}, {"re": r}],
    }))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExitCodes:
    def test_spectrum_ok(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--n-max", "3", "--method", "both")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,k,energy,jump_left,jump_right,agree"
        assert len(lines) == 4
        assert lines[1].endswith(",true")

    def test_residual_pass_is_zero(self, capsys):
        code, out, _ = run(capsys, "residual", "--k", repr(math.pi),
                           "--amp-sin", repr(math.sqrt(2.0)),
                           "--energy", repr(math.pi**2 / 2.0))
        assert code == 0
        assert out.splitlines()[1].endswith("true")

    def test_residual_physics_failure_is_three(self, capsys):
        code, out, _ = run(capsys, "residual", "--k", "1.0",
                           "--amp-sin", "1.0", "--energy", "0.5")
        assert code == 3
        assert "true" in out.splitlines()[1]  # c2_divergent flag

    def test_usage_error_is_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(capsys, "spectrum")  # --n-max missing
        assert exc.value.code == 1

    def test_validation_error_is_one(self, capsys):
        code, _, err = run(capsys, "spectrum", "--n-max", "0")
        assert code == 1
        assert "rejected" in err

    def test_negative_depth_is_one(self, capsys):
        code, _, _ = run(capsys, "finite", "--v0", "-5.0")
        assert code == 1

    def test_unknown_command_is_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(capsys, "frobnicate")
        assert exc.value.code == 1

    def test_unnormalized_packet_is_one(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"coeffs": [{"re": 1.0}, {"re": 1.0}]}))
        code, _, err = run(capsys, "ehrenfest", "--packet", str(path),
                           "--steps", "1", "--oracle", "off")
        assert code == 1
        assert "rejected" in err

    def test_missing_packet_file_is_one(self, capsys):
        code, _, err = run(capsys, "ehrenfest", "--packet", "/no/such/file")
        assert code == 1
        assert "cannot read" in err


class TestEhrenfestCommand:
    def test_csv_rows(self, capsys, packet_file):
        code, out, _ = run(capsys, "ehrenfest", "--packet", packet_file,
                           "--t1", "0.2", "--steps", "2", "--grid", "2000")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t,p_series,dpdt_series,dVdx_series,residual,p_quadrature"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[2]) == pytest.approx(4.0 * math.pi**2)

    def test_normalize_flag(self, capsys, tmp_path):
        path = tmp_path / "unnorm.json"
        path.write_text(json.dumps({"coeffs": [{"re": 1.0}, {"re": 1.0}]}))
        code, _, _ = run(capsys, "ehrenfest", "--packet", str(path),
                         "--normalize", "--steps", "1", "--oracle", "off")
        assert code == 0


class TestFiniteCommand:
    def test_single_depth_csv(self, capsys):
        code, out, _ = run(capsys, "finite", "--v0", "50.0")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "k,q,a,A,energy,recovery_ok"
        assert len(lines) == 5
        assert all(line.endswith(",true") for line in lines[1:])

    def test_sweep_csv(self, capsys):
        code, out, _ = run(capsys, "finite", "--v0-list", "50,500", "--n", "1")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "V0,k,gap,edge_slope,exterior_prob"
        gaps = [float(line.split(",")[2]) for line in lines[1:]]
        assert gaps[0] > gaps[1] > 0


class TestSampleCommand:
    def test_vpsi_atom_comments(self, capsys):
        code, out, _ = run(capsys, "sample", "--kind", "vpsi", "--n", "1",
                           "--points", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,re,im"
        atom_lines = [line for line in lines if line.startswith("# atom")]
        assert len(atom_lines) == 2

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "sample", "--kind", "eigenstate", "--n", "2",
                           "--points", "3", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["command"] == "sample"
        assert "seed" in doc
        assert len(doc["rows"]) == 3


class TestDeterminism:
    def test_byte_identical_reruns(self, capsys, tmp_path, packet_file):
        cases = [
            ["spectrum", "--n-max", "5", "--method", "both"],
            ["residual", "--k", repr(math.pi), "--amp-sin",
             repr(math.sqrt(2.0)), "--energy", repr(math.pi**2 / 2.0)],
            ["ehrenfest", "--packet", packet_file, "--steps", "2",
             "--grid", "2000"],
            ["finite", "--v0", "50.0"],
            ["sample", "--kind", "vpsi", "--points", "11", "--format", "json"],
        ]
        for i, argv in enumerate(cases):
            p1, p2 = tmp_path / f"a{i}", tmp_path / f"b{i}"
            assert main(argv + ["--seed", "42", "--out", str(p1)]) in (0, 3)
            assert main(argv + ["--seed", "42", "--out", str(p2)]) in (0, 3)
            assert p1.read_bytes() == p2.read_bytes()

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        path = tmp_path / "o.csv"
        code, out, _ = run(capsys, "spectrum", "--n-max", "2")
        assert code == 0
        assert main(["spectrum", "--n-max", "2", "--out", str(path)]) == 0
        assert path.read_text() == out
