import json

import pytest

from virtual_aperture.cli import main


def _small(tmp_path, **extra):
    doc = {"chirp": {"num_samples": 64}, "grid": {"nx": 9, "ny": 9}}
    doc.update(extra)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_run_success(tmp_path, capsys):
    assert main(["run", "--scenario", _small(tmp_path), "--out", str(tmp_path / "o")]) == 0
    measured = json.loads(capsys.readouterr().out)
    assert measured["peak"] == [4.0, 2.0]
    assert (tmp_path / "o" / "image.pgm").exists()


def test_rerun_is_byte_identical(tmp_path):
    scen = _small(tmp_path)
    for out in ("a", "b"):
        assert main(["run", "--scenario", scen, "--out", str(tmp_path / out), "--dump-cube"]) == 0
    for name in ("image.pgm", "image.csv", "metrics.json", "cube_real.csv", "cube_imag.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_seed_flag_changes_noise(tmp_path):
    scen = _small(tmp_path)
    main(["run", "--scenario", scen, "--out", str(tmp_path / "a"), "--dump-cube"])
    main(["run", "--scenario", scen, "--out", str(tmp_path / "b"), "--dump-cube", "--seed", "8"])
    assert (tmp_path / "a" / "cube_real.csv").read_bytes() != (tmp_path / "b" / "cube_real.csv").read_bytes()


def test_flags_override_file(tmp_path):
    scen = _small(tmp_path)
    main(["run", "--scenario", scen, "--out", str(tmp_path / "o"), "--window", "hamming", "--mode", "sar"])
    report = json.loads((tmp_path / "o" / "metrics.json").read_text())
    assert report["window"] == "hamming" and report["mode"] == "sar"


def test_scenario_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"chirp": {"carrier_hz": -1}}')
    assert main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "carrier_hz" in capsys.readouterr().err
    assert main(["run", "--scenario", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 2


def test_runtime_error_exit_code(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", "--scenario", _small(tmp_path), "--out", str(blocker / "o")]) == 3
    assert str(blocker) in capsys.readouterr().err


def test_zero_signal_is_runtime_error(tmp_path):
    scen = _small(tmp_path, scene={"targets": [{"position": [4, 2], "reflectivity": [0, 0]}]})
    assert main(["run", "--scenario", scen, "--out", str(tmp_path / "o")]) == 3


def test_list_scenarios(capsys):
    assert main(["scenarios"]) == 0
    assert "far_hamming" in capsys.readouterr().out.split()


def test_bad_flag_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["run", "--scenario", "x"])
    assert info.value.code == 2
