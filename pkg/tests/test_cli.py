"""Command-line interface: behaviors and exit codes."""

import json
import math
import os

import pytest

from conftest import DATA_DIR
from uncrel import modelio, spin
from uncrel.cli import EXIT_ERROR, EXIT_OK, main

SPIN_MODEL = os.path.join(DATA_DIR, "spin_phi0_model.json")
SPIN_PROJECTIVE = os.path.join(DATA_DIR, "spin_phi0_projective.json")
SYNTHETIC = os.path.join(DATA_DIR, "synthetic_points.csv")


class TestSweep:
    def test_default_run(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        plot = tmp_path / "fig.plt"
        rc = main(["sweep", "--out", str(out), "--plot", str(plot)])
        assert rc == EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 66
        assert lines[0] == spin.CSV_HEADER
        assert plot.exists()
        assert (tmp_path / "sweep_bounds.png").exists()
        assert (tmp_path / "sweep_ratios.png").exists()

    def test_two_steps(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = main(["sweep", "--steps", "2", "--out", str(out),
                   "--plot", str(tmp_path / "f.plt")])
        assert rc == EXIT_OK
        assert len(out.read_text().splitlines()) == 3

    def test_single_step_is_usage_error(self, tmp_path):
        rc = main(["sweep", "--steps", "1", "--out", str(tmp_path / "s.csv"),
                   "--plot", str(tmp_path / "f.plt")])
        assert rc == EXIT_ERROR

    def test_byte_identical_reruns(self, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        main(["sweep", "--out", str(first), "--plot", str(tmp_path / "a.plt")])
        main(["sweep", "--out", str(second), "--plot", str(tmp_path / "b.plt")])
        assert first.read_bytes() == second.read_bytes()


class TestCheck:
    def test_shipped_spin_model(self, capsys):
        rc = main(["check", "--model", SPIN_MODEL, "--state", "0"])
        assert rc == EXIT_OK
        output = capsys.readouterr().out
        rows = {line.split(",")[0]: line for line in output.splitlines()[1:]}
        assert rows["HEDR13"].endswith("false")
        assert rows["UVH1"].endswith("true")

    def test_projective_model_dilated(self, capsys):
        rc = main(["check", "--model", SPIN_PROJECTIVE, "--state", "0",
                   "--relations", "UVH1,MAK9"])
        assert rc == EXIT_OK
        output = capsys.readouterr().out
        assert output.splitlines()[1].startswith("UVH1")

    def test_structured_format(self, tmp_path):
        out = tmp_path / "reports.json"
        rc = main(["check", "--model", SPIN_MODEL, "--format", "structured",
                   "--out", str(out)])
        assert rc == EXIT_OK
        docs = json.loads(out.read_text())
        by_id = {doc["relation_id"]: doc for doc in docs}
        assert by_id["UVH1"]["satisfied"] is True
        assert by_id["MAK9"]["satisfied"] is False
        assert by_id["TRI25"]["rhs_bottom"] is not None

    def test_state_file(self, tmp_path, capsys):
        from uncrel.operators import StateVector

        state_path = tmp_path / "state.json"
        modelio.save_state(StateVector.normalized([1.0, 1.0]), state_path)
        rc = main(["check", "--model", SPIN_MODEL, "--state", str(state_path)])
        assert rc == EXIT_OK

    def test_truncated_model_file(self, tmp_path, capsys):
        broken = tmp_path / "broken.json"
        text = open(SPIN_MODEL, encoding="utf-8").read()
        broken.write_text(text[: len(text) // 2])
        rc = main(["check", "--model", str(broken)])
        assert rc == EXIT_ERROR
        assert "line" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        rc = main(["check", "--model", "no-such-file.json"])
        assert rc == EXIT_ERROR

    def test_unknown_relation_id(self, capsys):
        rc = main(["check", "--model", SPIN_MODEL, "--relations", "R99"])
        assert rc == EXIT_ERROR

    def test_bad_state_index(self, capsys):
        rc = main(["check", "--model", SPIN_MODEL, "--state", "7"])
        assert rc == EXIT_ERROR


class TestSearch:
    def test_injected_spin_witnesses(self, tmp_path, capsys):
        out = tmp_path / "witnesses"
        rc = main(["search", "--target", "MAK9", "--trials", "4", "--seed", "1",
                   "--inject-spin", "0", "--out", str(out)])
        assert rc == EXIT_OK
        summary = (out / "summary.csv").read_text().splitlines()
        assert summary[0] == "rank,trial_index,relation_id,lhs,rhs,slack,margin,file"
        assert len(summary) == 2
        witness_file = out / summary[1].split(",")[-1]
        doc = json.loads(witness_file.read_text())
        assert abs(doc["margin"] - (2.0 - math.sqrt(3.0))) <= 1e-12
        from uncrel.search import verify_witness_doc

        verify_witness_doc(doc)

    def test_universal_target_empty(self, tmp_path, capsys):
        out = tmp_path / "witnesses"
        rc = main(["search", "--target", "UVH1", "--trials", "50", "--seed", "2",
                   "--out", str(out)])
        assert rc == EXIT_OK
        assert len((out / "summary.csv").read_text().splitlines()) == 1

    def test_bad_dims(self, tmp_path, capsys):
        rc = main(["search", "--target", "MAK9", "--trials", "1", "--dims", "oops",
                   "--out", str(tmp_path / "w")])
        assert rc == EXIT_ERROR

    def test_unknown_target(self, tmp_path, capsys):
        rc = main(["search", "--target", "R99", "--trials", "1",
                   "--out", str(tmp_path / "w")])
        assert rc == EXIT_ERROR


class TestBox:
    def test_plane_and_gaussian_profiles(self, tmp_path, capsys):
        out = tmp_path / "box.csv"
        rc = main(["box", "--profile", "plane:0", "--profile", "gaussian:0.05",
                   "--out", str(out)])
        assert rc == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "state_id,devX,devP,lhs,rhs,satisfied"
        plane = lines[1].split(",")
        assert plane[0] == "plane:0"
        assert float(plane[3]) <= 1e-12 and float(plane[4]) <= 1e-14
        assert lines[2].endswith("true")

    def test_state_file_input(self, tmp_path, capsys):
        from uncrel.box import make_band_limited, save_wavefunction

        state_path = tmp_path / "wave.txt"
        save_wavefunction(make_band_limited(8, 1.0, 128, 3), state_path)
        rc = main(["box", "--state-file", str(state_path),
                   "--out", str(tmp_path / "box.csv")])
        assert rc == EXIT_OK

    def test_grid_not_power_of_two(self, tmp_path, capsys):
        rc = main(["box", "--profile", "plane:0", "--grid", "1000",
                   "--out", str(tmp_path / "box.csv")])
        assert rc == EXIT_ERROR

    def test_bad_profile(self, tmp_path, capsys):
        rc = main(["box", "--profile", "wiggle:3",
                   "--out", str(tmp_path / "box.csv")])
        assert rc == EXIT_ERROR

    def test_no_states_requested(self, tmp_path, capsys):
        rc = main(["box", "--out", str(tmp_path / "box.csv")])
        assert rc == EXIT_ERROR


class TestReport:
    def _sweep_csv(self, tmp_path):
        path = tmp_path / "sweep.csv"
        spin.emit_csv(spin.sweep(65), path)
        return path

    def test_synthetic_points_residuals(self, tmp_path, capsys):
        rc = main(["report", "--in", str(self._sweep_csv(tmp_path)),
                   "--data", SYNTHETIC])
        assert rc == EXIT_OK
        output = capsys.readouterr().out
        assert "36 data point(s) compared" in output
        max_line = [l for l in output.splitlines() if l.startswith("max")][0]
        assert float(max_line.split("=")[1]) <= 1e-12
        assert (tmp_path / "sweep_overlay.png").exists()

    def test_empty_data_file(self, tmp_path, capsys):
        data = tmp_path / "points.csv"
        data.write_text("phi,quantity_id,value,uncertainty\n")
        rc = main(["report", "--in", str(self._sweep_csv(tmp_path)),
                   "--data", str(data)])
        assert rc == EXIT_OK
        assert "0 data point(s) compared" in capsys.readouterr().out

    def test_bad_data_header(self, tmp_path, capsys):
        data = tmp_path / "points.csv"
        data.write_text("wrong,header\n")
        rc = main(["report", "--in", str(self._sweep_csv(tmp_path)),
                   "--data", str(data)])
        assert rc == EXIT_ERROR

    def test_bad_sweep_header(self, tmp_path, capsys):
        bad = tmp_path / "sweep.csv"
        bad.write_text("nope\n")
        rc = main(["report", "--in", str(bad), "--data", SYNTHETIC])
        assert rc == EXIT_ERROR


class TestParser:
    def test_usage_error_exits_one(self, capsys):
        assert main(["sweep", "--steps", "abc"]) == EXIT_ERROR

    def test_unknown_subcommand_exits_one(self, capsys):
        assert main(["frobnicate"]) == EXIT_ERROR

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
