import numpy as np

from sswalk.cli import main


def test_run_builtin_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "fig3"
    code = main(["run", "--builtin", "fig3", "--out", str(out), "--no-plot"])
    assert code == 0
    assert (out / "probability.csv").exists()
    assert (out / "summary.json").exists()
    captured = capsys.readouterr().out
    assert "fig3" in captured


def test_run_config_file_with_plots_and_seedless(tmp_path, capsys):
    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(
        "name = tiny\nL = 50\nn_sites = 16\nn_steps = 4\nmass = 0.04\n"
        "metric = flat\nlightcone = off\n"
    )
    out = tmp_path / "tiny_out"
    code = main(["run", str(cfg), "--out", str(out), "--seedless"])
    assert code == 0
    assert (out / "probability_map.png").exists()
    assert (out / "final_profile.png").exists()
    assert "byte-identical" in capsys.readouterr().out


def test_run_rejects_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("name = broken\n")
    assert main(["run", str(bad)]) == 2
    assert main(["run"]) == 2


def test_verify_quick(capsys):
    code = main(["verify", "--quick"])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] #1" in out and "[PASS] #2" in out


def test_decompose_writes_term_files(tmp_path):
    code = main(["decompose", "--qubits", "2", "--out", str(tmp_path)])
    assert code == 0
    text = (tmp_path / "shift_plus.txt").read_text()
    rows = [line.split() for line in text.strip().splitlines()]
    coeffs = {row[2]: complex(float(row[0]), float(row[1])) for row in rows}
    assert coeffs == {"IX": 0.5, "IY": -0.5j, "XX": 0.5, "XY": 0.5j}
    assert (tmp_path / "shift_plus_coin.txt").exists()


def test_decompose_stdout_and_validation(capsys):
    assert main(["decompose", "--qubits", "1"]) == 0
    out = capsys.readouterr().out
    assert "# shift_plus_coin.txt" in out
    assert main(["decompose", "--qubits", "0"]) == 2
