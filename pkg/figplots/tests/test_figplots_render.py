import matplotlib.pyplot as plt
import pytest

from figplots.reader import PlotDataError, load_figure_csv, validate_figure_data
from figplots.render import PlotSpec, build_figure, render

META = "# tool=cellcov3d version=0.1.0 kind=fig1 config=abcdefabcdef seed=3"
FIG1_HEADER = "lambda_ap,lambda_ue,q_analytic,q_sim,ci,draws"
FIG3_HEADER = "lambda_ap,lambda_ue,theta_db,cov_lower,cov_upper,cov_sim,ci,trials,seed,status"

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _solid(ax):
    return [line for line in ax.lines if line.get_linestyle() == "-"]


def _dashed(ax):
    return [line for line in ax.lines if line.get_linestyle() == "--"]


@pytest.mark.parametrize("kind", ["fig1", "fig2", "fig3"])
def test_render_every_kind_from_real_csvs(kind, sweep_csvs, tmp_path):
    out = tmp_path / f"{kind}.png"
    result = render(PlotSpec(csv_path=sweep_csvs[kind], kind=kind, out_path=out))
    assert result == out
    assert out.read_bytes()[:8] == PNG_MAGIC
    assert out.stat().st_size > 1000


def test_fig1_draws_line_marker_pair_per_density(sweep_csvs):
    data = load_figure_csv(sweep_csvs["fig1"], "fig1")
    validate_figure_data(data)
    fig, ax = build_figure(data)
    try:
        assert len(_solid(ax)) == 2
        assert len(ax.containers) == 2
        labels = ax.get_legend_handles_labels()[1]
        assert "q_analytic, lambda_ue=0.001" in labels
        assert "q_sim, lambda_ue=0.01" in labels
        assert ax.get_xscale() == "log"
    finally:
        plt.close(fig)


def test_fig2_groups_by_neighbor_order(sweep_csvs):
    data = load_figure_csv(sweep_csvs["fig2"], "fig2")
    validate_figure_data(data)
    fig, ax = build_figure(data)
    try:
        assert len(_solid(ax)) == 2
        assert len(ax.containers) == 2
        labels = ax.get_legend_handles_labels()[1]
        assert "p_analytic, n=1" in labels and "p_sim, n=2" in labels
    finally:
        plt.close(fig)


def test_fig3_bound_pair_and_partial_simulation(sweep_csvs):
    data = load_figure_csv(sweep_csvs["fig3"], "fig3")
    validate_figure_data(data)
    # the dense sweep point carries bounds but no simulation
    assert any(row["cov_sim"] is None for row in data.rows)
    assert any(row["cov_sim"] is not None for row in data.rows)
    fig, ax = build_figure(data)
    try:
        assert len(_solid(ax)) == 1
        assert len(_dashed(ax)) == 1
        assert len(ax.containers) == 1
        upper = _solid(ax)[0]
        assert len(upper.get_xdata()) == 2
        markers = ax.containers[0][0]
        assert len(markers.get_xdata()) == 1
        labels = ax.get_legend_handles_labels()[1]
        assert "cov_upper, lambda_ue=0.01" in labels
        assert "cov_lower, lambda_ue=0.01" in labels
        assert "cov_sim, lambda_ue=0.01" in labels
    finally:
        plt.close(fig)


def test_renderer_preserves_file_order(tmp_path):
    path = tmp_path / "unsorted.csv"
    path.write_text(
        "\n".join(
            [
                META,
                FIG1_HEADER,
                "0.01,0.01,0.59,0.6,0.01,4",
                "0.0001,0.01,0.59,0.58,0.01,4",
                "0.001,0.01,0.59,0.61,0.01,4",
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    data = load_figure_csv(path, "fig1")
    validate_figure_data(data)
    fig, ax = build_figure(data)
    try:
        assert list(_solid(ax)[0].get_xdata()) == [0.01, 0.0001, 0.001]
    finally:
        plt.close(fig)


def test_bad_csv_leaves_no_file(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(META + "\n" + FIG1_HEADER + "\n", encoding="utf-8")
    out = tmp_path / "never.png"
    with pytest.raises(PlotDataError, match="no data rows"):
        render(PlotSpec(csv_path=empty, kind="fig1", out_path=out))
    assert not out.exists()


def test_bracket_violation_blocks_render(tmp_path):
    broken = tmp_path / "broken.csv"
    broken.write_text(
        META + "\n" + FIG3_HEADER + "\n" + "0.001,0.01,-10,0.7,0.4,0.5,0.01,200,9,ok\n",
        encoding="utf-8",
    )
    out = tmp_path / "never.png"
    with pytest.raises(PlotDataError, match="cov_lower"):
        render(PlotSpec(csv_path=broken, kind="fig3", out_path=out))
    assert not out.exists()


def test_unknown_style_key_rejected(tmp_path):
    with pytest.raises(PlotDataError, match="unknown style keys"):
        PlotSpec(csv_path=tmp_path / "x.csv", kind="fig1", out_path=tmp_path / "x.png", style={"grid": False})


def test_style_overrides_apply(sweep_csvs, tmp_path):
    data = load_figure_csv(sweep_csvs["fig1"], "fig1")
    fig, ax = build_figure(data, {"title": "activity sweep", "figsize": (4.0, 3.0)})
    try:
        assert ax.get_title() == "activity sweep"
        assert tuple(fig.get_size_inches()) == (4.0, 3.0)
    finally:
        plt.close(fig)
