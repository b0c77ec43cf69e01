import csv

from secure_layered.cli import main


def test_solve_one(capsys):
    assert main(["solve-one", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    for word in ("Relaxed", "Scheme2", "BaselineMrt", "KKT", "rank certificate", "Csec1"):
        assert word in out


def test_sweep_eves_to_file(tmp_path):
    out = tmp_path / "eves.csv"
    rc = main(["sweep-eves", "--trials", "2", "--values", "1,2", "--schemes", "Relaxed,Scheme1",
               "--out", str(out), "--jsonl", str(tmp_path / "t.jsonl")])
    assert rc == 0
    rows = list(csv.reader(out.open()))
    assert len(rows) == 5
    assert len((tmp_path / "t.jsonl").read_text().splitlines()) == 4


def test_sweep_antennas_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("n_trials: 50\nschemes: [Relaxed]\nsweep_values: [4, 5]\n")
    assert main(["sweep-antennas", "--config", str(cfg), "--trials", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert all(",1,1," in line for line in lines[1:])


def test_validate(tmp_path):
    out = tmp_path / "v.txt"
    assert main(["validate", "--trials", "3", "--out", str(out)]) == 0
    assert "validated 3/3" in out.read_text()


def test_bad_input_reports_error(capsys):
    assert main(["sweep-eves", "--trials", "0"]) == 2
    assert "error" in capsys.readouterr().err
