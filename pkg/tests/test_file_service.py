import numpy as np
import pandas as pd
import pytest

from shadowlab.core.dynprops import build_transition_graph
from shadowlab.core.pseudo_orbit import doubling_gap_schedule, ergodic_pseudo_orbit, perturbed_orbit
from shadowlab.core.spaces import make_two_circles_swap_double, TwoCirclesPoint
from shadowlab.core.verify import TraceReport
from shadowlab.exceptions import OutputError
from shadowlab.services.file_service import FileService


@pytest.fixture
def files():
    service = FileService()
    yield service
    service.shutdown()


def test_csv_floats_survive_a_write(files, output_dir):
    table = pd.DataFrame({'trial': [0, 1], 'value': [0.1, 1 / 3]})
    path = files.write_csv(table, str(output_dir / "nested" / "table.csv"))
    loaded = files.read_csv(path)
    assert list(loaded.columns) == ['trial', 'value']
    assert loaded['value'].tolist() == [0.1, 1 / 3]


def test_trace_csv(files, output_dir):
    report = TraceReport(np.array([0.0, 0.25, 0.5]), diameter=1.0)
    loaded = files.read_csv(files.write_trace_csv(report, str(output_dir / "trace.csv")))
    assert loaded['index'].tolist() == [0, 1, 2]
    assert loaded['error'].tolist() == [0.0, 0.25, 0.5]


def test_pseudo_orbit_file_format(files, doubling):
    p = ergodic_pseudo_orbit(doubling, [0.5], 0.05, doubling_gap_schedule, 64, seed=7)
    text = files.format_pseudo_orbit(doubling, p)
    lines = text.splitlines()
    assert lines[0] == "# system: doubling-circle"
    assert lines[2] == "# kind: delta_ergodic"
    assert lines[3] == "# seed: 7"
    assert lines[5] == "# junctions: 0 2 6 14 30 62"
    assert lines[-1].startswith("# break_set:")
    assert len(lines) == 64 + 7

    parsed = files.parse_pseudo_orbit(doubling, text)
    assert parsed.points == p.points
    assert parsed.break_set == p.break_set
    assert parsed.junctions == p.junctions
    assert parsed.seed == 7


def test_orbit_file_on_disk(files, output_dir):
    s = make_two_circles_swap_double()
    p = perturbed_orbit(s, TwoCirclesPoint(1, 0.3), 0.1, 20, seed=2)
    path = files.write_pseudo_orbit(s, p, str(output_dir / "orbit.txt"))
    assert files.read_pseudo_orbit(s, path).points == p.points


def test_tampered_break_set_is_rejected(files, doubling):
    p = ergodic_pseudo_orbit(doubling, [0.5], 0.05, doubling_gap_schedule, 64, seed=7)
    lines = files.format_pseudo_orbit(doubling, p).splitlines()
    lines[-1] = "# break_set: 5"
    with pytest.raises(OutputError):
        files.parse_pseudo_orbit(doubling, '\n'.join(lines))


def test_malformed_orbit_files(files, doubling, isometry):
    p = perturbed_orbit(doubling, 1.0, 0.05, 10, seed=0)
    text = files.format_pseudo_orbit(doubling, p)
    with pytest.raises(OutputError):
        files.parse_pseudo_orbit(isometry, text)
    with pytest.raises(OutputError):
        files.parse_pseudo_orbit(doubling, text.replace("# horizon: 10", "# horizon: 11"))
    with pytest.raises(OutputError):
        files.parse_pseudo_orbit(doubling, text.replace("# kind: delta_pseudo\n", ""))
    with pytest.raises(OutputError):
        files.parse_pseudo_orbit(doubling, text.replace("# delta: ", "# delta: x"))


def test_graph_tables(files, doubling, output_dir):
    g = build_transition_graph(doubling, 0.5, 0.2)
    nodes_path, edges_path = files.write_graph(doubling, g, str(output_dir), "doubling")
    nodes = files.read_csv(nodes_path)
    edges = files.read_csv(edges_path)
    assert len(nodes) == len(g.nodes)
    assert len(edges) == g.edge_count
    assert list(edges.columns) == ['source', 'target']


def test_read_failures_raise_output_error(files, output_dir):
    with pytest.raises(OutputError):
        files.read_text(str(output_dir / "absent.txt"))
    with pytest.raises(OutputError):
        files.read_csv(str(output_dir / "absent.csv"))


def test_write_all_reraises_first_failure(files, output_dir):
    def broken():
        raise OutputError("disk full")

    written = []
    with pytest.raises(OutputError):
        files.write_all([lambda: written.append(files.write_text("a", str(output_dir / "a.txt"))), broken])
    assert (output_dir / "a.txt").read_text() == "a"
