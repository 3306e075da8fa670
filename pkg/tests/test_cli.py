import json
from pathlib import Path

import pytest

from quadspin import cli


def run(argv, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ROOT_ENV, str(tmp_path))
    return cli.main(argv)


def test_levels_verb(tmp_path, monkeypatch):
    assert run(["levels", "--direction", "II"], tmp_path, monkeypatch) == 0
    csv = (tmp_path / "levels" / "levels.csv").read_text()
    lines = csv.splitlines()
    assert lines[0] == "m_doublet_x2,energy_mhz,g_khz_per_mt"
    assert len(lines) == 4
    manifest = json.loads((tmp_path / "levels" / "manifest.json").read_text())
    assert manifest["experiment"] == "levels"
    assert "config_hash" in manifest and "wall_time_s" in manifest


def test_eigenvalues_verb(tmp_path, monkeypatch):
    code = run(["eigenvalues", "--B", "2", "--omega0", "40"],
               tmp_path, monkeypatch)
    assert code == 0
    assert (tmp_path / "eigenvalues" / "modes.csv").exists()


def test_config_file_and_override(tmp_path, monkeypatch):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("B = 1.0\nduration = 600  # short run\n")
    code = run(["odnmr", "--config", str(cfgfile), "--B", "0"],
               tmp_path, monkeypatch)
    assert code == 0
    manifest = json.loads((tmp_path / "odnmr" / "manifest.json").read_text())
    assert manifest["config"]["B"] == "0"  # flag wins over file


def test_determinism(tmp_path, monkeypatch):
    args = ["odnmr", "--B", "0", "--set", "duration=600"]
    assert run(args, tmp_path, monkeypatch) == 0
    first = (tmp_path / "odnmr" / "spectrum.csv").read_bytes()
    assert run(args, tmp_path, monkeypatch) == 0
    assert (tmp_path / "odnmr" / "spectrum.csv").read_bytes() == first


def test_manifest_roundtrip(tmp_path, monkeypatch):
    args = ["odnmr", "--B", "0", "--set", "duration=600"]
    assert run(args, tmp_path, monkeypatch) == 0
    first = (tmp_path / "odnmr" / "spectrum.csv").read_bytes()
    manifest = tmp_path / "odnmr" / "manifest.json"
    code = run(["odnmr", "--config", str(manifest)], tmp_path, monkeypatch)
    assert code == 0
    assert (tmp_path / "odnmr" / "spectrum.csv").read_bytes() == first


def test_config_error_exit_code(tmp_path, monkeypatch):
    assert run(["levels", "--fixture", "/missing.toml"],
               tmp_path, monkeypatch) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("no equals sign here\n")
    assert run(["levels", "--config", str(bad)], tmp_path, monkeypatch) == 1


def test_numeric_failure_exit_code(tmp_path, monkeypatch):
    code = run(["afc-map", "--set", "b_grid=1", "--set", "cycles=2"],
               tmp_path, monkeypatch)
    assert code == 2


def test_grid_parsing():
    import numpy as np
    assert np.allclose(cli.parse_grid("0:1:0.5"), [0.0, 0.5, 1.0])
    assert np.allclose(cli.parse_grid("1,2,4"), [1.0, 2.0, 4.0])
    with pytest.raises(cli.ConfigParse):
        cli.parse_grid("1:2")
