"""Exit codes and stdout contract for vnmeas-render."""

import pytest

from conftest import lines_metadata, make_panel_text
from vnmeas_figures.cli import main


def test_success_prints_written_paths(lines_csv, capsys):
    code = main([str(lines_csv)])
    assert code == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1
    assert out[0].endswith("figx_a.svg")


def test_figure_name_target(lines_csv, tmp_path, capsys):
    code = main(["figx", "--in-dir", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "figx_a.svg").exists()


def test_png_flag(lines_csv, tmp_path):
    assert main([str(lines_csv), "--out-dir", str(tmp_path), "--png"]) == 0
    assert (tmp_path / "figx_a.png").read_bytes()[:4] == b"\x89PNG"


def test_out_dir_created(lines_csv, tmp_path):
    out_dir = tmp_path / "deep" / "images"
    assert main([str(lines_csv), "--out-dir", str(out_dir)]) == 0
    assert (out_dir / "figx_a.svg").exists()


def test_missing_file_exits_one(tmp_path, capsys):
    code = main([str(tmp_path / "gone.csv")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_empty_csv_exits_one_without_image(tmp_path, capsys):
    path = tmp_path / "fig0_a.csv"
    path.write_text("# figure: fig0\n")
    assert main([str(path)]) == 1
    assert "empty dataset" in capsys.readouterr().err
    assert not (tmp_path / "fig0_a.svg").exists()


def test_bad_header_exits_one_without_image(tmp_path, capsys):
    path = tmp_path / "fig0_a.csv"
    path.write_text("a,b\n1,2\n")
    assert main([str(path)]) == 1
    assert "schema" in capsys.readouterr().err
    assert not (tmp_path / "fig0_a.svg").exists()


def test_partial_batch_stops_at_first_bad_panel(tmp_path, capsys):
    good = tmp_path / "figp_a.csv"
    good.write_text(make_panel_text(lines_metadata(), [{"s": 1.0, "snr_x": 0.2}]))
    bad = tmp_path / "figp_b.csv"
    bad.write_text("broken\n")
    assert main(["figp", "--in-dir", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_no_targets_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
