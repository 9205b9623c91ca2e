import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cmvrmt import densities as dens
from cmvrmt import io as cio
from cmvrmt.cli import FIGURE_PRESETS, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def usage_exit(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    capsys.readouterr()
    return exc.value.code


SAMPLE = ["sample", "--ensemble", "trunc-o", "--n", "5", "--reps", "4", "--seed", "11"]


def test_sample_is_byte_identical(capsys):
    _, first, _ = run(SAMPLE, capsys)
    _, second, _ = run(SAMPLE, capsys)
    assert first == second
    assert first.splitlines()[0] == "rep,re,im"
    assert len(first.splitlines()) == 1 + 4 * 5


def test_workers_do_not_change_output(capsys):
    _, serial, _ = run(SAMPLE, capsys)
    _, parallel, _ = run(SAMPLE + ["--workers", "2"], capsys)
    assert serial == parallel


def test_seed_changes_output(capsys):
    _, a, _ = run(SAMPLE, capsys)
    _, b, _ = run(SAMPLE[:-1] + ["12"], capsys)
    assert a != b


def test_figure_shaped_sample(capsys):
    code, out, _ = run(["sample", "--ensemble", "trunc-cue", "--n", "301", "--reps", "1",
                        "--seed", "7", "--format", "json"], capsys)
    assert code == 0
    _, clouds = cio.clouds_from_json(out)
    assert len(clouds[0]) == 301
    assert np.abs(clouds[0].values).max() <= 1


def test_json_header(capsys):
    _, out, _ = run(["sample", "--ensemble", "cse", "--n", "2", "--seed", "1",
                     "--format", "json"], capsys)
    header, clouds = cio.clouds_from_json(out)
    assert header["ensemble"]["family"] == "CSE"
    assert len(clouds[0]) == 4


@pytest.mark.parametrize("argv", [
    ["sample", "--ensemble", "cue", "--n", "3"],
    ["sample", "--ensemble", "gue", "--n", "3", "--seed", "1"],
    ["sample", "--ensemble", "cue", "--seed", "1"],
    ["sample", "--ensemble", "cue", "--n", "3", "--seed", "1", "--beta", "4"],
    ["sample", "--ensemble", "cue", "--n", "3", "--seed", "1", "--coupling-r", "2"],
    ["sample", "--ensemble", "cue", "--n", "3", "--seed", "1", "--truncated",
     "--coupling-r", "0.5"],
    ["sample", "--ensemble", "cue", "--n", "3", "--seed", "1", "--reps", "0"],
    ["sample", "--bogus"],
    ["density", "--formula", "trunc-circular", "--input", "-"],
    ["density", "--formula", "spectral-orthogonal", "--beta", "2", "--input", "-"],
    ["verify", "--check", "nonsense"],
])
def test_invalid_usage_exits_2(argv, capsys):
    assert usage_exit(argv, capsys) == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('ensemble = "trunc-cue"\nn = 3\nseed = 5\nreps = 2\n')
    _, from_cfg, _ = run(["sample", "--config", str(cfg)], capsys)
    _, from_flags, _ = run(["sample", "--ensemble", "trunc-cue", "--n", "3", "--seed", "5",
                            "--reps", "2"], capsys)
    assert from_cfg == from_flags
    _, override, _ = run(["sample", "--config", str(cfg), "--n", "4"], capsys)
    assert len(override.splitlines()) == 1 + 2 * 4


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"ensemble": "cue", "n": 3, "colour": "red"}')
    assert usage_exit(["sample", "--config", str(cfg), "--seed", "1"], capsys) == 2


def test_output_file(tmp_path, capsys):
    out = tmp_path / "clouds.csv"
    run(SAMPLE + ["--out", str(out)], capsys)
    _, text, _ = run(SAMPLE, capsys)
    assert out.read_text() == text


def test_eigen_command(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(cio.matrix_to_json(np.diag([1, 1j, -1])))
    _, out, _ = run(["eigen", str(path)], capsys)
    vals = cio.clouds_from_csv(out)[0].values
    assert np.sort_complex(np.round(vals, 12)).tolist() == [-1, 1j, 1]


def test_measure_command(tmp_path, capsys):
    path = tmp_path / "swap.npy"
    np.save(path, np.array([[0.0, 1.0], [1.0, 0.0]]))
    _, out, _ = run(["measure", str(path)], capsys)
    doc = json.loads(out)
    np.testing.assert_allclose(doc["weights"], [0.5, 0.5])
    _, out, _ = run(["measure", str(path), "--block"], capsys)
    doc = json.loads(out)
    assert len(doc["nodes"]) == 2


def test_missing_matrix_file(tmp_path, capsys):
    code, _, err = run(["eigen", str(tmp_path / "none.json")], capsys)
    assert code == 1
    assert "error" in err


def _density(tmp_path, capsys, rows, *flags):
    path = tmp_path / "rows.json"
    path.write_text(json.dumps(rows))
    code, out, _ = run(["density", "--input", str(path), *flags], capsys)
    return code, json.loads(out)


def test_density_rows(tmp_path, capsys):
    rows = [[[0.3, 0.1]], [[0.2, 0.0], [0.2, 0.0]], [[1.5, 0.0]]]
    code, out = _density(tmp_path, capsys, rows, "--formula", "trunc-circular", "--beta", "2")
    assert code == 0
    assert out[0]["log_density"] == pytest.approx(math.log(1 / math.pi))
    assert out[1]["log_density"] == "-inf"
    assert "DomainError" in out[2]["error"]
    code, _ = _density(tmp_path, capsys, rows, "--formula", "trunc-circular", "--beta", "2",
                       "--strict")
    assert code == 1


def test_density_batch_matches_library(tmp_path, capsys, rng):
    rows = []
    for _ in range(100):
        z = 0.9 * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        rows.append([[v.real, v.imag] for v in z])
    _, out = _density(tmp_path, capsys, rows, "--formula", "trunc-circular", "--beta", "1.5")
    for row, entry in zip(rows, out):
        z = np.array([complex(*p) for p in row])
        assert entry["log_density"] == dens.log_density_trunc_circular(z, 1.5)


def test_density_orthogonal_and_spectral(tmp_path, capsys):
    _, out = _density(tmp_path, capsys, [[0.0]], "--formula", "trunc-orthogonal", "--beta", "2")
    assert out[0]["log_density"] == pytest.approx(-math.log(math.pi))
    assert out[0]["constants"]["log_P"] == pytest.approx(math.log(math.pi))
    rows = [{"thetas": [1.0], "weights": [1.0]}]
    _, out = _density(tmp_path, capsys, rows, "--formula", "spectral-orthogonal", "--case", "a",
                      "--beta", "2")
    assert out[0]["log_density"] == pytest.approx(-math.log(math.pi))
    _, out = _density(tmp_path, capsys, rows, "--formula", "spectral-circular", "--beta", "2")
    assert out[0]["log_density"] == pytest.approx(-math.log(2 * math.pi))


def test_verify_command(capsys):
    code, out, err = run(["verify", "--check", "charpoly", "--check", "log_gas"], capsys)
    assert code == 0
    assert [r["passed"] for r in json.loads(out)] == [True, True]
    assert err.count("PASS") == 2


def test_verify_mutation_exits_nonzero(monkeypatch, capsys):
    real = dens._log_D
    monkeypatch.setattr(dens, "_log_D", lambda n, beta: real(n, beta) + 0.05)
    code, _, err = run(["verify", "--check", "normalizations"], capsys)
    assert code != 0
    assert "FAIL" in err


def test_figure_presets(capsys):
    _, out, _ = run(["figure", "--format", "json"], capsys)
    header, clouds = cio.clouds_from_json(out)
    assert header["presets"] == list(FIGURE_PRESETS)
    assert [len(c) for c in clouds] == [301, 301, 302]
    assert all(np.abs(c.values).max() <= 1 + 1e-12 for c in clouds)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cmvrmt", "sample", "--ensemble", "cue",
                           "--n", "2", "--seed", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("rep,re,im")
    proc = subprocess.run([sys.executable, "-m", "cmvrmt", "sample", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
