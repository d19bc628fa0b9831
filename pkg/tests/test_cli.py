import json
import os

import pytest

from agcodes import bounds
from agcodes.cli import (
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_VERIFICATION,
    main,
)


def test_goppa_build_and_verify(tmp_path):
    out = tmp_path / "g"
    rc = main(["goppa", "build", "--q", "5", "--divisor", "inf:2", "--out", str(out)])
    assert rc == EXIT_OK
    code_file = out / "goppa_code.txt"
    assert code_file.exists() and (out / "manifest.json").exists()
    assert main(["verify", "distance", "--code", str(code_file)]) == EXIT_OK


def test_build_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["xing", "build", "--q", "2", "--divisor", "1,1,0,1:1;1,1,1:-1",
            "--m", "1", "--radii", "1", "--strategy", "random", "--seed", "11",
            "--trials", "12"]
    assert main(argv + ["--out", str(a)]) == EXIT_OK
    assert main(argv + ["--out", str(b)]) == EXIT_OK
    assert (a / "xing_code.txt").read_bytes() == (b / "xing_code.txt").read_bytes()


def test_replay_manifest_byte_identical(tmp_path):
    out = tmp_path / "build"
    argv = ["combined", "build", "--q", "4", "--h", "2", "--s0", "1", "--d0", "2",
            "--strategy", "exhaustive", "--out", str(out)]
    assert main(argv) == EXIT_OK
    replay_out = tmp_path / "replay"
    rc = main(["replay", "manifest", str(out / "manifest.json"), "--out", str(replay_out)])
    assert rc == EXIT_OK
    assert (out / "combined_code.txt").read_bytes() == (replay_out / "combined_code.txt").read_bytes()


def test_replay_detects_divergence(tmp_path):
    out = tmp_path / "build"
    argv = ["goppa", "build", "--q", "5", "--divisor", "inf:2", "--out", str(out)]
    assert main(argv) == EXIT_OK
    doc = json.loads((out / "manifest.json").read_text())
    doc["artifact_sha256"] = "0" * 64
    (out / "manifest.json").write_text(json.dumps(doc))
    rc = main(["replay", "manifest", str(out / "manifest.json"),
               "--out", str(tmp_path / "r")])
    assert rc == EXIT_VERIFICATION


def test_verify_distance_catches_false_claim(tmp_path):
    out = tmp_path / "g"
    assert main(["goppa", "build", "--q", "5", "--divisor", "inf:2", "--out", str(out)]) == EXIT_OK
    text = (out / "goppa_code.txt").read_text()
    tampered = text.replace("claimed_distance: 3", "claimed_distance: 4")
    bad = tmp_path / "bad.txt"
    bad.write_text(tampered)
    assert main(["verify", "distance", "--code", str(bad)]) == EXIT_VERIFICATION


def test_verify_averaging_both_kinds():
    assert main(["verify", "averaging", "--kind", "xing", "--q", "2",
                 "--divisor", "1,1,0,1:1;1,1,1:-1", "--m", "1", "--radii", "1"]) == EXIT_OK
    assert main(["verify", "averaging", "--kind", "combined", "--q", "2",
                 "--h", "1", "--s0", "1"]) == EXIT_OK


def test_precondition_exit_code(tmp_path):
    rc = main(["goppa", "build", "--q", "5", "--divisor", "inf:7",
               "--out", str(tmp_path / "x")])
    assert rc == EXIT_PRECONDITION


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["goppa", "demolish"])
    assert exc.value.code == 2


def test_bounds_table_matches_library(tmp_path):
    out = tmp_path / "b"
    assert main(["bounds", "table", "--q", "49", "--grid", "99", "--out", str(out)]) == EXIT_OK
    assert (out / "frontier_q49.csv").read_text() == bounds.frontier_csv(49, 99)


def test_bounds_crossing_runs(capsys):
    assert main(["bounds", "crossing", "--q", "25"]) == EXIT_OK
    assert "crossing=false" in capsys.readouterr().out


def test_field_selftest():
    assert main(["field", "selftest", "--q", "4", "--q", "9"]) == EXIT_OK


def test_curve_info(capsys):
    assert main(["curve", "info", "--q", "4", "--curve", "hermitian"]) == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["n_points"] == 9 and info["genus"] == 1
    assert info["reference_ratio"] == 1


def test_sections_enumerate(tmp_path):
    out = tmp_path / "s"
    assert main(["sections", "enumerate", "--q", "2", "--h", "1", "--out", str(out)]) == EXIT_OK
    doc = json.loads((out / "manifest.json").read_text())
    assert doc["results"]["count"] == 8


def test_sections_proposition():
    assert main(["sections", "proposition", "--q", "3", "--pairs", "10",
                 "--seed", "1"]) == EXIT_OK


def test_points_index_selection(tmp_path):
    out = tmp_path / "p"
    rc = main(["goppa", "build", "--q", "5", "--divisor", "inf:2",
               "--points", "0,1,2,4", "--out", str(out)])
    assert rc == EXIT_OK
    doc = json.loads((out / "manifest.json").read_text())
    assert doc["results"]["n"] == 4
