import numpy as np
import pytest

from critopt.cli import main
from critopt.complexes import write_raw_field
from critopt.reduction import diagram_from_csv


@pytest.fixture
def signal_file(tmp_path):
    path = tmp_path / "sig.txt"
    path.write_text("0 3 1 2\n")
    return path


def test_persistence_signal_stdout(signal_file, capsys):
    assert main(["persistence", str(signal_file)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "dim,birth,death,birth_simplex,death_simplex"
    pairs = diagram_from_csv(out)
    assert any(p.birth == 1.0 and p.death == 3.0 for p in pairs)
    assert any(not p.finite for p in pairs)


def test_persistence_constant_field_only_infinite(tmp_path, capsys):
    raw = tmp_path / "const.raw"
    write_raw_field(raw, np.zeros(8))
    assert main(["persistence", str(raw), "--shape", "2,2,2"]) == 0
    pairs = diagram_from_csv(capsys.readouterr().out)
    assert all(p.persistence == 0 or not p.finite for p in pairs)
    assert sum(1 for p in pairs if not p.finite) == 1  # single component


def test_persistence_wrong_shape_is_usage_error(tmp_path, capsys):
    raw = tmp_path / "f.raw"
    write_raw_field(raw, np.zeros(8))
    assert main(["persistence", str(raw), "--shape", "3,2,2"]) == 2


def test_missing_required_flag_exits_2(signal_file):
    with pytest.raises(SystemExit) as e:
        main(["optimize", str(signal_file)])  # no --out-dir
    assert e.value.code == 2


def test_optimize_writes_outputs(signal_file, tmp_path):
    out = tmp_path / "run"
    rc = main(
        [
            "optimize",
            str(signal_file),
            "--loss",
            "simplify",
            "--eps",
            "inf",
            "--method",
            "critical",
            "--lr",
            "1.0",
            "--steps",
            "2",
            "--out-dir",
            str(out),
        ]
    )
    assert rc == 0
    loss_lines = (out / "loss.csv").read_text().strip().splitlines()
    assert loss_lines[0] == "step,loss,wall_ms"
    assert len(loss_lines) == 3
    assert float(loss_lines[1].split(",")[1]) == 2.0
    vine = (out / "vineyard.csv").read_text().strip().splitlines()
    assert vine[0] == "step,pair_id,dim,birth,death"
    final = (out / "sig_final.txt").read_text().split()
    assert [float(v) for v in final] == [0.0, 2.0, 2.0, 2.0]


def test_optimize_raw_field_roundtrip(tmp_path):
    raw = tmp_path / "field.raw"
    rng = np.random.default_rng(3)
    write_raw_field(raw, rng.uniform(0, 1, 27))
    out = tmp_path / "run"
    rc = main(
        [
            "optimize",
            str(raw),
            "--shape",
            "3,3,3",
            "--steps",
            "2",
            "--lr",
            "0.5",
            "--dims",
            "0,1",
            "--out-dir",
            str(out),
        ]
    )
    assert rc == 0
    final = np.fromfile(out / "field_final.raw", dtype="<f4")
    assert final.size == 27


def test_numerical_error_exit_code(signal_file, tmp_path):
    rc = main(
        [
            "optimize",
            str(signal_file),
            "--lr",
            "1e308",
            "--steps",
            "3",
            "--out-dir",
            str(tmp_path / "x"),
        ]
    )
    assert rc == 3


def test_verify_ok_exit_zero(capsys):
    assert main(["verify", "--cases", "3", "--seed", "1"]) == 0
    assert "no mismatches" in capsys.readouterr().out


def test_seed_fixes_outputs(signal_file, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        main(
            [
                "optimize",
                str(signal_file),
                "--steps",
                "3",
                "--lr",
                "0.4",
                "--seed",
                "7",
                "--out-dir",
                str(out),
            ]
        )
        losses = [
            line.split(",")[1]
            for line in (out / "loss.csv").read_text().strip().splitlines()[1:]
        ]
        outs.append(losses)
    assert outs[0] == outs[1]
