import pandas as pd
import pytest

from shadowlab.exceptions import OutputError, UsageError
from shadowlab.services.plot_service import PlotService


@pytest.fixture
def plots():
    return PlotService()


def test_render_draws_one_polyline_per_column(plots):
    table = pd.DataFrame({'trial': [0, 1, 2], 'a': [0.1, 0.2, 0.3], 'b': [1.0, 0.5, 0.0], 'ok': [True] * 3})
    svg = plots.render(table, title="chart <1>")
    assert svg.count('<polyline') == 2
    assert "chart &lt;1&gt;" in svg
    assert '>a<' in svg and '>b<' in svg


def test_render_rejects_bad_columns(plots):
    table = pd.DataFrame({'x': [0, 1], 'y': [1.0, 2.0]})
    with pytest.raises(UsageError):
        plots.render(table, 'x', ['missing'])
    with pytest.raises(UsageError):
        plots.render(pd.DataFrame({'label': ['a', 'b']}))
    with pytest.raises(UsageError):
        plots.render(table.iloc[0:0])


def test_plot_csv_writes_next_to_the_table(plots, output_dir):
    csv_path = output_dir / "series.csv"
    pd.DataFrame({'n': [1, 2, 3], 'density': [0.5, 0.25, 0.125]}).to_csv(csv_path, index=False)
    target = plots.plot_csv(str(csv_path))
    assert target == str(output_dir / "series.svg")
    assert "<polyline" in (output_dir / "series.svg").read_text()


def test_plot_csv_missing_file(plots, output_dir):
    with pytest.raises(OutputError):
        plots.plot_csv(str(output_dir / "absent.csv"))
