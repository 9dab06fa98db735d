import losses
import vineyard


def _write(path, text):
    path.write_text(text)
    return str(path)


def test_vineyard_renders_nonempty(tmp_path):
    csv = _write(
        tmp_path / "vine.csv",
        "step,pair_id,dim,birth,death\n"
        "0,1,0,0.1,0.9\n0,2,0,0.2,inf\n1,1,0,0.3,0.7\n2,1,0,0.45,0.55\n",
    )
    png = tmp_path / "vine.png"
    assert vineyard.main([csv, str(png), "--threshold", "0.5"]) == 0
    assert png.stat().st_size > 0


def test_vineyard_empty_csv_no_crash(tmp_path):
    csv = _write(tmp_path / "empty.csv", "step,pair_id,dim,birth,death\n")
    png = tmp_path / "empty.png"
    assert vineyard.main([csv, str(png)]) == 0
    assert png.stat().st_size > 0


def test_vineyard_single_step_run(tmp_path):
    csv = _write(
        tmp_path / "one.csv",
        "step,pair_id,dim,birth,death\n0,1,0,0.1,0.9\n0,2,1,0.2,0.4\n",
    )
    png = tmp_path / "one.png"
    assert vineyard.main([csv, str(png)]) == 0
    assert png.stat().st_size > 0


def test_losses_two_labeled_curves(tmp_path):
    a = _write(tmp_path / "a.csv", "step,loss,wall_ms\n0,1.0,5\n1,0.5,5\n2,0.1,5\n")
    b = _write(tmp_path / "b.csv", "step,loss,wall_ms\n0,1.0,5\n1,0.9,5\n2,0.8,5\n")
    png = tmp_path / "cmp.png"
    assert losses.main([f"{a}:fast", f"{b}:slow", str(png), "--logy"]) == 0
    assert png.stat().st_size > 0


def test_losses_empty_csv_no_crash(tmp_path):
    a = _write(tmp_path / "empty.csv", "step,loss,wall_ms\n")
    png = tmp_path / "empty.png"
    assert losses.main([str(a), str(png)]) == 0
    assert png.stat().st_size > 0


def test_losses_deterministic_output(tmp_path):
    a = _write(tmp_path / "a.csv", "step,loss,wall_ms\n0,1.0,5\n1,0.5,5\n")
    p1, p2 = tmp_path / "x1.png", tmp_path / "x2.png"
    losses.main([str(a), str(p1)])
    losses.main([str(a), str(p2)])
    assert p1.read_bytes() == p2.read_bytes()
