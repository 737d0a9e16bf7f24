from pathlib import Path

import matplotlib
import numpy as np
import pytest

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from squeezeplots.cli import run
from squeezeplots.io import SchemaError, read_datafile, slice_grid
from squeezeplots.render import render_squeezing_overlay, render_wigner_panels

FIXTURES = Path(__file__).parent / "fixtures"
SLICES = [FIXTURES / f"wigner_q_t{i}.csv" for i in range(3)]
CLASSICAL_SLICE = FIXTURES / "wigner_c_t2.csv"
CURVES = [FIXTURES / "curve_quantum.csv", FIXTURES / "curve_sc_exact.csv",
          FIXTURES / "curve_sc_gauss.csv"]


@pytest.fixture(autouse=True)
def close_figures():
    yield
    plt.close("all")


def test_read_datafile_metadata_and_columns():
    df = read_datafile(CURVES[0])
    assert df.command == "exact"
    assert df.config["lambda"] == "6"
    assert df.columns[:2] == ["t", "min_variance"]
    assert df.column("t")[0] == 0.0


def test_read_datafile_text_column():
    df = read_datafile(CURVES[1])
    assert set(df.column("backend")) == {"exact-kernel"}


def test_slice_grid_shape():
    a2, b2, w = slice_grid(read_datafile(SLICES[0]))
    assert a2.size == 20 and b2.size == 20
    assert w.shape == (20, 20)


def test_missing_file_raises():
    with pytest.raises(SchemaError):
        read_datafile(FIXTURES / "nope.csv")


def test_wigner_panels_three_slices(tmp_path):
    out = tmp_path / "fig1.png"
    fig = render_wigner_panels(SLICES, out)
    assert out.exists() and out.stat().st_size > 0
    surface_axes = [ax for ax in fig.axes if ax.name == "3d"]
    contour_axes = [ax for ax in fig.axes
                    if ax.name == "rectilinear" and ax.get_xlabel()]
    assert len(surface_axes) == 3
    assert len(contour_axes) == 3


def test_wigner_panels_classical_min_negligible_at_plot_scale(tmp_path):
    # the classical slice has no visible negative regions: its floor is the
    # initial profile's intrinsic tail, orders of magnitude below the peak
    fig = render_wigner_panels([CLASSICAL_SLICE], tmp_path / "fig2.png")
    contour_axes = [ax for ax in fig.axes
                    if ax.name == "rectilinear" and ax.get_xlabel()]
    title = contour_axes[0].get_title()
    min_value = float(title.split("min =")[1].split(",")[0])
    max_value = float(title.split("max =")[1])
    assert abs(min_value) < 2e-3 * max_value
    assert max_value > 1.0


def test_wigner_panels_reject_schema_mismatch(tmp_path):
    with pytest.raises(SchemaError):
        render_wigner_panels([CURVES[0]], tmp_path / "x.png")


def test_wigner_panels_reject_empty_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# su3squeeze\nalpha2,beta2,W\n")
    with pytest.raises(SchemaError):
        render_wigner_panels([empty], tmp_path / "x.png")


def test_squeeze_overlay_three_curves(tmp_path):
    out = tmp_path / "fig3.png"
    fig = render_squeezing_overlay(CURVES, out)
    assert out.exists() and out.stat().st_size > 0
    ax = fig.axes[0]
    labels = [t.get_text() for t in ax.get_legend().get_texts()]
    assert len(labels) == 4  # three curves + threshold line
    assert any("threshold" in lbl for lbl in labels)
    # threshold line drawn at lambda = 6 from the metadata header
    hlines = [ln for ln in ax.get_lines()
              if len(set(np.round(ln.get_ydata(), 12))) == 1]
    assert any(ln.get_ydata()[0] == pytest.approx(6.0) for ln in hlines)


def test_squeeze_overlay_line_styles(tmp_path):
    fig = render_squeezing_overlay(CURVES, tmp_path / "fig3.png")
    ax = fig.axes[0]
    by_label = {ln.get_label(): ln for ln in ax.get_lines()}
    assert by_label["quantum"].get_linestyle() == "-"
    thick = by_label["classical (exact WF)"]
    thin = by_label["classical (Gaussian WF)"]
    assert thick.get_linestyle() == "--" and thin.get_linestyle() == "--"
    assert thick.get_linewidth() > thin.get_linewidth()


def test_squeeze_overlay_single_curve(tmp_path):
    fig = render_squeezing_overlay([CURVES[0]], tmp_path / "one.png")
    labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
    assert "quantum" in labels


def test_squeeze_overlay_rejects_slice_schema(tmp_path):
    with pytest.raises(SchemaError):
        render_squeezing_overlay([SLICES[0]], tmp_path / "x.png")


def test_cli_wigner_and_squeeze(tmp_path):
    out1 = tmp_path / "fig1.png"
    assert run(["wigner", "--in", *map(str, SLICES), "--out", str(out1)]) == 0
    assert out1.exists()
    out3 = tmp_path / "fig3.svg"
    assert run(["squeeze", "--in", *map(str, CURVES), "--out", str(out3),
                "--format", "svg"]) == 0
    assert out3.exists()


def test_cli_schema_mismatch_exit_code(tmp_path):
    code = run(["wigner", "--in", str(CURVES[0]),
                "--out", str(tmp_path / "x.png")])
    assert code == 2


def test_rendering_deterministic(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render_squeezing_overlay(CURVES, a)
    plt.close("all")
    render_squeezing_overlay(CURVES, b)
    assert a.read_bytes() == b.read_bytes()
