import pathlib

import pytest

from qflow_plots.cli import main

DATA = pathlib.Path(__file__).parent / "data"

CASES = [
    ("eigen_dist", "eigen_dist.csv"),
    ("trajectories", "trajectories.csv"),
    ("measured", "trajectories.csv"),
    ("spin_dist", "spin_dist.csv"),
    ("bell", "bell.csv"),
]


@pytest.mark.parametrize("figure_id,csv_name", CASES)
@pytest.mark.parametrize("ext", ["png", "svg"])
def test_render_golden_csvs(tmp_path, figure_id, csv_name, ext):
    out = tmp_path / f"{figure_id}.{ext}"
    assert main([figure_id, str(DATA / csv_name), str(out)]) == 0
    assert out.stat().st_size > 0


def test_missing_column_names_it(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("G,B_analytic,stderr\r\n1,2,0.1\r\n")
    assert main(["bell", str(bad), str(tmp_path / "x.png")]) != 0
    assert "B_mc" in capsys.readouterr().err


def test_empty_trajectories_gives_axes_only_image(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("tau,traj_id,q,q_m\r\n")
    out = tmp_path / "empty.png"
    assert main(["trajectories", str(empty), str(out)]) == 0
    assert out.stat().st_size > 0


def test_analytic_only_bell_renders(tmp_path):
    csv = tmp_path / "bell0.csv"
    csv.write_text("G,B_analytic,B_mc,stderr\r\n0.5,0.84,,\r\n2,2.7,,\r\n")
    out = tmp_path / "bell0.png"
    assert main(["bell", str(csv), str(out)]) == 0


def test_plotted_data_deterministic(tmp_path):
    """Byte-identical input CSV renders byte-identical output."""
    for fig_id, csv_name in (("spin_dist", "spin_dist.csv"),
                             ("bell", "bell.csv")):
        for ext in ("svg", "png"):
            a = tmp_path / f"a_{fig_id}.{ext}"
            b = tmp_path / f"b_{fig_id}.{ext}"
            assert main([fig_id, str(DATA / csv_name), str(a)]) == 0
            assert main([fig_id, str(DATA / csv_name), str(b)]) == 0
            assert a.read_bytes() == b.read_bytes()


def test_unknown_figure_id_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["nope", str(DATA / "bell.csv"), str(tmp_path / "x.png")])


def test_bad_extension_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["bell", str(DATA / "bell.csv"), str(tmp_path / "x.pdf")])
