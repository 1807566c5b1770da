import csv
import io

import numpy as np
import pytest

from bcsvqd.cli import HEADERS, main, run_command
from bcsvqd.config import ConfigError, ExperimentConfig, load_config, parse_text
from bcsvqd.pauli import eigenspectrum
from bcsvqd.bcs import BcsParams, build_qubit_hamiltonian


def rows(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def test_exact_two_level_gaps():
    out = rows(run_command("exact", ExperimentConfig(v=(0.5, 1.0, 0.0))))
    assert [float(r["gap"]) for r in out] == pytest.approx([1.0, 2.0, 0.0], abs=1e-9)
    assert float(out[0]["level0"]) == pytest.approx(-3.0)
    assert out[0]["level4"] == "" and out[0]["level5"] == ""


def test_exact_five_level_matches_oracle():
    cfg = ExperimentConfig(epsilons=(3, 3, 3, 4, 3), v=(0.5,), gap=0)
    row = rows(run_command("exact", cfg))[0]
    spec = eigenspectrum(build_qubit_hamiltonian(BcsParams((3, 3, 3, 4, 3), 0.5)))
    assert float(row["gap"]) == pytest.approx(spec[1] - spec[0], rel=1e-9)
    assert [float(row[f"level{i}"]) for i in range(6)] == pytest.approx(spec[:6], rel=1e-9)


def test_headers_and_hash_column():
    cfg = ExperimentConfig()
    for command, extra in (("exact", {}), ("spectrum", dict(shots=0, runs=1, depth=(1,)))):
        text = run_command(command, cfg.replace(**extra))
        header = text.splitlines()[0].split(",")
        assert header == HEADERS[command] + ["config_hash"]
        assert {r["config_hash"] for r in rows(text)} == {cfg.replace(**extra).config_hash()}


def test_spectrum_row_count_and_quality():
    cfg = ExperimentConfig(k_states=3, runs=2, shots=0)
    out = rows(run_command("spectrum", cfg))
    assert len(out) == 6
    assert [int(r["seed"]) for r in out] == [0, 0, 0, 1, 1, 1]
    for seed in (0, 1):
        energies = sorted(float(r["energy"]) for r in out if int(r["seed"]) == seed)
        assert energies == pytest.approx([-3, -1, 1], abs=0.05)


def test_single_qubit_depth_scan_is_exact_everywhere():
    cfg = ExperimentConfig(epsilons=(2.0,), v=(0.3,), depth=(1, 2), gap=0, shots=0, runs=3)
    for r in rows(run_command("depth-scan", cfg)):
        assert float(r["gap_mean"]) == pytest.approx(2.0, abs=1e-3)
        assert float(r["gap_exact"]) == pytest.approx(2.0)
        assert int(r["runs"]) == 3


def test_v_sweep_small():
    cfg = ExperimentConfig(v=(0.6, 1.0), shots=0, runs=3)
    out = rows(run_command("v-sweep", cfg))
    assert [float(r["v"]) for r in out] == [0.6, 1.0]
    for r in out:
        assert float(r["gap_exact"]) == pytest.approx(2 * float(r["v"]))
        z = abs(float(r["gap_mean"]) - float(r["gap_exact"])) / float(r["gap_std"])
        assert float(r["z_score"]) == pytest.approx(z, rel=1e-4)


def test_rerun_is_byte_identical(tmp_path):
    args = ["depth-scan", "--depth", "1,2", "--runs", "2", "--shots", "200", "--cobyla-max-iter", "40"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_offset_only_shifts_noisy_energies():
    base = dict(k_states=2, runs=1, shots=0, depth=(1,), cobyla_max_iter=30)
    ideal = rows(run_command("spectrum", ExperimentConfig(offset=5.0, **base)))
    plain = rows(run_command("spectrum", ExperimentConfig(**base)))
    assert [r["energy"] for r in ideal] == [r["energy"] for r in plain]
    noisy = rows(run_command("spectrum", ExperimentConfig(backend="noisy", **base)))
    shifted = rows(run_command("spectrum", ExperimentConfig(backend="noisy", offset=5.0, **base)))
    diffs = [float(b["energy"]) - float(a["energy"]) for a, b in zip(noisy, shifted)]
    assert diffs == pytest.approx([5.0, 5.0])


def test_config_file_and_overrides(tmp_path, capsys):
    path = tmp_path / "exp.cfg"
    path.write_text("# two-level system\nepsilons = 3, 3\nv = 0.5,1.0   # grid\ngap = 1\n")
    cfg = load_config(path, {"seed": 4})
    assert cfg.v == (0.5, 1.0) and cfg.seed == 4
    assert main(["exact", "--config", str(path), "--v", "0.25"]) == 0
    out = rows(capsys.readouterr().out)
    assert len(out) == 1 and float(out[0]["gap"]) == pytest.approx(0.5)


def test_config_hash_stability():
    a, b = ExperimentConfig(), ExperimentConfig(workers=4)
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != ExperimentConfig(seed=1).config_hash()
    assert load_config(None, parse_text(a.to_text())) == a


@pytest.mark.parametrize(
    "text",
    ["runs = 0", "backend = quantum", "nonsense = 1", "v =", "shots = -3", "t2 = 1.0\nt1 = 0.1", "just words"],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        load_config(None, parse_text(text))


def test_exit_codes(tmp_path, capsys):
    assert main(["exact", "--runs", "0"]) == 1
    assert main(["exact", "--config", str(tmp_path / "missing.cfg")]) == 1
    assert main(["v-sweep", "--depth", "1,2"]) == 1
    assert main(["exact", "--epsilons", ",".join(["1"] * 13)]) == 1
    # density-matrix simulation of 8 qubits exceeds the noisy backend's guard
    eight = ",".join(["1"] * 8)
    assert main(["spectrum", "--backend", "noisy", "--epsilons", eight, "--depth", "1", "--runs", "1", "--shots", "0"]) == 2
    err = capsys.readouterr().err
    assert "config error" in err and "runtime error" in err


def test_noisy_energies_shift_but_gap_survives():
    base = dict(k_states=2, runs=1, shots=0, depth=(3,), gap=0)
    ideal = sorted(float(r["energy"]) for r in rows(run_command("spectrum", ExperimentConfig(**base))))
    noisy = sorted(float(r["energy"]) for r in rows(run_command("spectrum", ExperimentConfig(backend="noisy", **base))))
    assert ideal != noisy
    assert (noisy[1] - noisy[0]) == pytest.approx(ideal[1] - ideal[0], abs=0.2)
    assert np.all(np.array(noisy) >= -3.0)
