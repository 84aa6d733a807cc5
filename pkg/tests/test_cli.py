"""Command-line interface: formats, round trips, exit codes, determinism."""

import json

import numpy as np
import pytest

from qcorr.cli import main, read_state_file, write_state_file
from qcorr.errors import InvalidStateError
from qcorr.states import random_density


def run(argv):
    return main([str(a) for a in argv])


class TestStateFiles:
    def test_round_trip_bytes(self, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        rho = random_density(6, seed=42)
        write_state_file(first, rho, 2, 3)
        back, da, db = read_state_file(first)
        assert (da, db) == (2, 3)
        assert np.array_equal(back, rho)
        write_state_file(second, back, da, db)
        assert first.read_bytes() == second.read_bytes()

    def test_lf_line_endings(self, tmp_path):
        path = tmp_path / "w.json"
        write_state_file(path, random_density(4, seed=1), 2, 2)
        assert b"\r" not in path.read_bytes()

    def test_rejects_invalid_matrix(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"dims": [2, 2], "matrix": [[[0.6, 0]]]}')
        with pytest.raises(InvalidStateError):
            read_state_file(path)

    def test_rejects_non_density(self, tmp_path):
        path = tmp_path / "bad.json"
        body = {
            "dims": [1, 2],
            "matrix": [[[0.6, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.6, 0.0]]],
        }
        path.write_text(json.dumps(body))
        with pytest.raises(InvalidStateError):
            read_state_file(path)


class TestStateCommand:
    def test_werner_file(self, tmp_path):
        out = tmp_path / "w.json"
        assert run(["state", "werner", "--p", 0.5, "--out", out]) == 0
        rho, da, db = read_state_file(out)
        assert (da, db) == (2, 2)
        assert rho.shape == (4, 4)

    def test_tiles_bound_file(self, tmp_path):
        out = tmp_path / "be.json"
        assert run(["state", "tiles-bound", "--out", out]) == 0
        rho, da, db = read_state_file(out)
        assert (da, db) == (3, 3)
        assert rho.shape == (9, 9)

    def test_invalid_parameter_exits_2(self, tmp_path):
        assert run(["state", "werner", "--p", 1.5, "--out", tmp_path / "x.json"]) == 2

    def test_other_families(self, tmp_path):
        cases = [
            ["state", "bell", "--kind", "phi+", "--out", tmp_path / "b.json"],
            ["state", "pseudo-pure", "--p", 0.3, "--out", tmp_path / "pp.json"],
            [
                "state",
                "classical",
                "--probs",
                "0.5,0,0,0.5",
                "--dims",
                "2,2",
                "--out",
                tmp_path / "c.json",
            ],
            ["state", "tile-vector", "--index", "S", "--out", tmp_path / "t.json"],
            ["state", "cq", "--alphas", "0.7,0.3", "--out", tmp_path / "cq.json"],
            [
                "state",
                "random-density",
                "--dim-a",
                2,
                "--dim-b",
                3,
                "--seed",
                5,
                "--out",
                tmp_path / "r.json",
            ],
            ["state", "random-pure", "--seed", 2, "--out", tmp_path / "rp.json"],
        ]
        for argv in cases:
            assert run(argv) == 0
            read_state_file(argv[-1])


class TestMeasureCommand:
    @pytest.fixture()
    def werner_file(self, tmp_path):
        out = tmp_path / "w.json"
        run(["state", "werner", "--p", 0.5, "--out", out])
        return out

    @pytest.fixture()
    def singlet_file(self, tmp_path):
        out = tmp_path / "s.json"
        run(["state", "werner", "--p", 1.0, "--out", out])
        return out

    def test_d3_value(self, werner_file, capsys):
        assert run(["measure", "d3", "--state", werner_file]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert abs(float(lines[0]) - 0.2625) < 1e-4
        assert lines[1] == "degenerate true"

    def test_entropy_value(self, werner_file, capsys):
        assert run(["measure", "entropy", "--state", werner_file]) == 0
        assert abs(float(capsys.readouterr().out) - 1.5487949406953985) < 1e-10

    def test_concurrence_value(self, werner_file, capsys):
        assert run(["measure", "concurrence", "--state", werner_file]) == 0
        assert abs(float(capsys.readouterr().out) - 0.25) < 1e-10

    def test_mutual_info_singlet(self, singlet_file, capsys):
        assert run(["measure", "mutual-info", "--state", singlet_file]) == 0
        assert abs(float(capsys.readouterr().out) - 2.0) < 1e-10

    def test_chsh_werner(self, werner_file, capsys):
        assert run(["measure", "chsh", "--state", werner_file]) == 0
        assert abs(float(capsys.readouterr().out) - 2 * np.sqrt(2) * 0.5) < 1e-10

    def test_fidelity_two_states(self, werner_file, singlet_file, capsys):
        argv = ["measure", "fidelity", "--state", werner_file, "--state2", singlet_file]
        assert run(argv) == 0
        val = float(capsys.readouterr().out)
        assert 0.0 <= val <= 1.0

    def test_fidelity_missing_state2_exits_3(self, werner_file):
        assert run(["measure", "fidelity", "--state", werner_file]) == 3

    def test_schmidt_on_pure(self, singlet_file, capsys):
        assert run(["measure", "schmidt", "--state", singlet_file]) == 0
        out = capsys.readouterr().out
        coeffs = [float(tok) for tok in out.split()[1:]]
        assert np.allclose(coeffs, [1 / np.sqrt(2)] * 2)

    def test_schmidt_on_mixed_exits_3(self, werner_file):
        assert run(["measure", "schmidt", "--state", werner_file]) == 3

    def test_concurrence_wrong_dims_exits_3(self, tmp_path):
        out = tmp_path / "be.json"
        run(["state", "tiles-bound", "--out", out])
        assert run(["measure", "concurrence", "--state", out]) == 3

    def test_unreadable_state_exits_2(self, tmp_path):
        assert run(["measure", "d3", "--state", tmp_path / "missing.json"]) == 2

    def test_basis_computational(self, werner_file, capsys):
        argv = ["measure", "d3", "--state", werner_file, "--basis", "computational"]
        assert run(argv) == 0
        # the tie-break eigenbasis is computational, so the values coincide
        assert abs(float(capsys.readouterr().out) - 0.2624831837637342) < 1e-9

    def test_json_output(self, werner_file, capsys):
        assert run(["measure", "d3", "--state", werner_file, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["measure"] == "d3"
        assert payload["degenerate"] is True
        assert abs(payload["value"] - 0.2624831837637342) < 1e-9

    def test_classical_cq_verdicts(self, tmp_path, capsys):
        cc = tmp_path / "cc.json"
        run(["state", "classical", "--probs", "0.4,0.2,0.1,0.3", "--dims", "2,2", "--out", cc])
        assert run(["measure", "classical-cq", "--state", cc]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "classical-quantum"

        mixed = tmp_path / "m.json"
        run(["state", "werner", "--p", 0.0, "--out", mixed])
        assert run(["measure", "classical-cq", "--state", mixed]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "undetermined-by-d3"

    def test_ppt_output(self, werner_file, capsys):
        assert run(["measure", "ppt", "--state", werner_file]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "is_ppt false"
        assert float(lines[2].split()[1]) > 0.1

    def test_discord_opt(self, werner_file, capsys):
        assert run(["measure", "discord-opt", "--state", werner_file]) == 0
        assert abs(float(capsys.readouterr().out) - 0.2624831837637342) < 1e-5


class TestSweepCommand:
    def test_csv_header_and_shape(self, tmp_path):
        out = tmp_path / "sweep.csv"
        argv = [
            "sweep", "--eps0", 1e-2,
            "--omega-sigma-min", 0.5, "--omega-sigma-max", 2.0, "--omega-sigma-steps", 3,
            "--l-min", 0.5, "--l-max", 4.0, "--l-steps", 4,
            "--out", out,
        ]
        assert run(argv) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == (
            "omega_sigma,l_over_sigma,a_prob,abs_x,c_corr,e_joint,"
            "concurrence,d3_over_eps0_sq,corr_coeff,flags"
        )
        assert len(lines) == 1 + 3 * 4
        assert all(line.endswith("ok") for line in lines[1:])

    def test_single_point_spot_value(self, tmp_path, capsys):
        out = tmp_path / "one.csv"
        argv = [
            "sweep", "--eps0", 1e-2,
            "--omega-sigma-min", 1.0, "--omega-sigma-max", 1.0, "--omega-sigma-steps", 1,
            "--l-min", 1.0, "--l-max", 1.0, "--l-steps", 1,
            "--out", out,
        ]
        assert run(argv) == 0
        row = out.read_text().splitlines()[1].split(",")
        assert abs(float(row[2]) - 7.088e-3 * 1e-4) < 1e-6 * 1e-4

    def test_bad_ranges_exit_2(self, tmp_path):
        inverted = [
            "sweep", "--eps0", 1e-2,
            "--omega-sigma-min", 1.0, "--omega-sigma-max", 0.5, "--omega-sigma-steps", 2,
            "--l-min", 1.0, "--l-max", 2.0, "--l-steps", 2,
            "--out", tmp_path / "x.csv",
        ]
        assert run(inverted) == 2
        too_close = [
            "sweep", "--eps0", 1e-2,
            "--omega-sigma-min", 1.0, "--omega-sigma-max", 2.0, "--omega-sigma-steps", 2,
            "--l-min", 1e-5, "--l-max", 2.0, "--l-steps", 2,
            "--out", tmp_path / "y.csv",
        ]
        assert run(too_close) == 2

    def test_json_format(self, tmp_path):
        out = tmp_path / "sweep.json"
        argv = [
            "sweep", "--eps0", 1e-2,
            "--omega-sigma-min", 1.0, "--omega-sigma-max", 1.0, "--omega-sigma-steps", 1,
            "--l-min", 1.0, "--l-max", 2.0, "--l-steps", 2,
            "--out", out, "--format", "json",
        ]
        assert run(argv) == 0
        rows = json.loads(out.read_text())
        assert len(rows) == 2
        assert rows[0]["flags"] == "ok"

    def test_svg_heatmap(self, tmp_path):
        out = tmp_path / "sweep.csv"
        svg = tmp_path / "sweep.svg"
        argv = [
            "sweep", "--eps0", 1e-2,
            "--omega-sigma-min", 0.5, "--omega-sigma-max", 2.0, "--omega-sigma-steps", 4,
            "--l-min", 0.5, "--l-max", 4.0, "--l-steps", 4,
            "--out", out, "--svg", svg,
        ]
        assert run(argv) == 0
        body = svg.read_text()
        assert body.lstrip().startswith("<?xml")
        assert "svg" in body


class TestLogging:
    def test_diagnostics_stay_off_stdout(self, tmp_path):
        import os
        import subprocess
        import sys

        state = tmp_path / "w.json"
        run(["state", "werner", "--p", 0.5, "--out", state])
        outs = []
        for level in ("error", "debug"):
            env = dict(os.environ, QC_LOG=level)
            proc = subprocess.run(
                [sys.executable, "-m", "qcorr", "measure", "d3", "--state", str(state)],
                capture_output=True,
                text=True,
                env=env,
            )
            assert proc.returncode == 0
            outs.append(proc.stdout)
        assert outs[0] == outs[1]


class TestVerifyCommand:
    def test_core_suite_passes(self, capsys):
        assert run(["verify", "--suite", "core", "--seed", 7]) == 0
        out = capsys.readouterr().out
        assert "[PASS]" in out
        assert "[FAIL]" not in out

    def test_seeded_report_deterministic(self, capsys):
        run(["verify", "--suite", "core", "--seed", 7])
        first = capsys.readouterr().out
        run(["verify", "--suite", "core", "--seed", 7])
        second = capsys.readouterr().out
        assert first == second

    def test_failure_exits_1(self, monkeypatch, capsys):
        from qcorr import verify as verify_mod

        def broken_suite(seed=0):
            return [verify_mod.CheckResult("deliberately broken", False, "injected")]

        monkeypatch.setitem(verify_mod.SUITES, "core", broken_suite)
        assert run(["verify", "--suite", "core"]) == 1
        assert "[FAIL]" in capsys.readouterr().out
