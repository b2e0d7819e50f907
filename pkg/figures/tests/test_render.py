import json

import pytest

from anneal_figures.cli import main as cli_main
from anneal_figures.render import FIGURE_IDS, FigureSpec, SchemaError, render

GAP_SCAN_GOLDEN = """s,gap,order_param,flag_degenerate
0,2,0,0
0.5,0.69999999999999996,-1.2,0
0.99399999999999999,6.1644599999999998e-07,-3.5,0
1,0.0016000000000000001,-7,0
"""

SCALING_GOLDEN = """L,delta_min
5,2.0558307e-05
7,6.164456e-07
9,2.794796e-08
11,1.6326953e-09
#A=0.044470000000000001
#b=1.5708
#r2=0.99772599999999996
"""

ENUMERATION_GOLDEN = """m,config_index,delta_min
0,0,2.0558307e-05
1,0,0.000338408
1,1,1.34769e-05
2,17,0.000691769
3,100,0.00107881
"""

ENSEMBLE_GOLDEN = """instance,seed,delta,delta_c1,delta_c2,delta_0
0,11,0.01,0.02,0.03,0.05
1,12,0.004,0.009,0.02,0.04
2,13,0.2,0.21,0.5,0.6
"""

GOLDEN_BY_FIGURE = {
    "fig2": GAP_SCAN_GOLDEN,
    "fig3": SCALING_GOLDEN,
    "fig4": ENUMERATION_GOLDEN,
    "fig5": GAP_SCAN_GOLDEN,
    "fig6": SCALING_GOLDEN,
    "fig8": GAP_SCAN_GOLDEN,
    "appB": GAP_SCAN_GOLDEN,
    "appC": ENSEMBLE_GOLDEN,
}


@pytest.fixture()
def golden_csv(tmp_path):
    def write(figure):
        path = tmp_path / f"{figure}_golden.csv"
        path.write_text(GOLDEN_BY_FIGURE[figure])
        return path

    return write


@pytest.mark.parametrize("figure", FIGURE_IDS)
def test_render_succeeds_on_every_figure_id(figure, golden_csv, tmp_path):
    out = tmp_path / f"{figure}.png"
    spec = FigureSpec(figure=figure, inputs=(str(golden_csv(figure)),),
                      output=str(out))
    plot_spec = render(spec)
    assert out.exists() and out.stat().st_size > 0
    assert plot_spec["figure"] == figure
    assert plot_spec["axes"][0]["series"]


@pytest.mark.parametrize("figure", FIGURE_IDS)
def test_missing_column_is_named(figure, tmp_path):
    path = tmp_path / "broken.csv"
    path.write_text("alpha,beta\n1,2\n")
    spec = FigureSpec(figure=figure, inputs=(str(path),),
                      output=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError) as err:
        render(spec)
    first_required = {
        "fig2": "s", "fig5": "s", "fig8": "s", "appB": "s",
        "fig3": "L", "fig6": "L", "fig4": "m", "appC": "delta",
    }[figure]
    assert f"'{first_required}'" in str(err.value)


def test_empty_csv_fails_with_named_column(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    spec = FigureSpec(figure="fig2", inputs=(str(path),),
                      output=str(tmp_path / "x.png"))
    with pytest.raises(SchemaError) as err:
        render(spec)
    assert "'s'" in str(err.value)


def test_unknown_figure_id(tmp_path):
    with pytest.raises(SchemaError):
        FigureSpec(figure="fig99", inputs=("a.csv",), output="x.png")


def test_plot_data_layer_is_reproducible(golden_csv, tmp_path):
    spec = FigureSpec(
        figure="fig3", inputs=(str(golden_csv("fig3")),),
        output=str(tmp_path / "a.png"))
    first = render(spec)
    second = render(FigureSpec(
        figure="fig3", inputs=(str(golden_csv("fig3")),),
        output=str(tmp_path / "b.png")))
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_scaling_fit_line_from_footer(golden_csv, tmp_path):
    spec = FigureSpec(
        figure="fig3", inputs=(str(golden_csv("fig3")),),
        output=str(tmp_path / "a.png"))
    plot_spec = render(spec)
    labels = [s["label"] for s in plot_spec["axes"][0]["series"]]
    assert any("fit b=1.57" in label for label in labels)
    kinds = {s["kind"] for s in plot_spec["axes"][0]["series"]}
    assert "dashed" in kinds


def test_ensemble_diagonal_guide(tmp_path):
    path = tmp_path / "diag.csv"
    path.write_text(
        "instance,seed,delta,delta_c1,delta_c2,delta_0\n"
        "0,1,0.01,0.01,0.01,0.1\n"
        "1,2,0.02,0.02,0.02,0.1\n"
        "2,3,0.05,0.05,0.05,0.1\n")
    spec = FigureSpec(figure="appC", inputs=(str(path),),
                      output=str(tmp_path / "x.png"))
    plot_spec = render(spec)
    panel = plot_spec["axes"][2]  # xxx vs xx panel
    scatter = panel["series"][0]
    guide = panel["series"][1]
    assert scatter["x"] == scatter["y"]  # all points on the diagonal
    assert guide["label"] == "slope 1"
    assert guide["x"] == guide["y"]


def test_density_coloring_present(golden_csv, tmp_path):
    spec = FigureSpec(
        figure="fig4", inputs=(str(golden_csv("fig4")),),
        output=str(tmp_path / "a.png"))
    plot_spec = render(spec)
    series = plot_spec["axes"][0]["series"][0]
    assert len(series["color"]) == len(series["x"])
    assert all(c >= 1 for c in series["color"])


def test_cli_round_trip(golden_csv, tmp_path, capsys):
    out = tmp_path / "fig2.png"
    spec_out = tmp_path / "fig2.plotspec.json"
    code = cli_main([
        "render", "--figure", "fig2",
        "--in", str(golden_csv("fig2")),
        "--out", str(out), "--spec-out", str(spec_out),
    ])
    assert code == 0
    assert out.exists()
    payload = json.loads(spec_out.read_text())
    assert payload["figure"] == "fig2"


def test_cli_schema_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n1,2\n")
    code = cli_main([
        "--figure", "fig3", "--in", str(bad),
        "--out", str(tmp_path / "o.png"),
    ])
    assert code == 2
    assert "'L'" in capsys.readouterr().err


def test_multiple_inputs_one_figure(golden_csv, tmp_path):
    a = golden_csv("fig2")
    b = tmp_path / "second.csv"
    b.write_text(GAP_SCAN_GOLDEN)
    spec = FigureSpec(figure="fig2", inputs=(str(a), str(b)),
                      output=str(tmp_path / "x.png"))
    plot_spec = render(spec)
    assert len(plot_spec["axes"][0]["series"]) == 2
