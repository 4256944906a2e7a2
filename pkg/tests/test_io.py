import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randompick import dynamics, generators, io
from randompick.errors import GraphFormatError
from randompick.graph import build_graph
from randompick.state import ColorState

from _util import EXAMPLE_PICKS, worked_example_graph


def test_edge_list_label_remapping():
    text = "% konect style\n10 20\n20 3 1.0 999\n# comment\n\n3 10\n"
    g, labels = io.parse_edge_list(text)
    assert labels == ["3", "10", "20"]
    assert g.edges().tolist() == [[0, 1], [1, 2], [2, 0]]
    g, labels = io.parse_edge_list("b a\na c\n")
    assert labels == ["a", "b", "c"] and g.has_edge(1, 0) and g.has_edge(0, 2)


def test_edge_list_header_and_undirected():
    g, labels = io.parse_edge_list("# nodes 4\n0 1\n")
    assert g.n == 4 and labels == ["0", "1", "2", "3"]
    g, _ = io.parse_edge_list("# nodes 3\n# undirected\n0 1\n1 2\n")
    assert g.undirected and g.m == 4
    g, _ = io.parse_edge_list("0 1\n", undirected=True)
    assert g.has_edge(1, 0)


@pytest.mark.parametrize("text", ["0\n", "# nodes x\n", "# nodes 2\n0 5\n", "# nodes 2\na b\n", "", "# nodes 0\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphFormatError):
        io.parse_edge_list(text)


def test_edge_list_round_trip(tmp_path):
    for g in (generators.generate_ba(50, 2, seed=1), generators.bipartite_tightness(10)[0], build_graph([], 3)):
        path = tmp_path / "g.txt"
        io.write_edge_list(g, path)
        again, _ = io.load_edge_list(path)
        assert again == g


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 9).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=25), st.booleans())))
def test_edge_list_round_trip_property(case):
    n, edges, und = case
    g = build_graph(edges, n, und)
    assert io.parse_edge_list(io.format_edge_list(g))[0] == g


def test_state_round_trip_and_errors():
    s = ColorState.from_sets(6, red=[1, 4], blue=[0])
    assert io.parse_state(io.format_state(s), 6) == s
    assert io.parse_state("red: 1, 2  # note\n\nblue:\n", 3) == ColorState.from_sets(3, red=[1, 2])
    for bad in ("green: 1\n", "red 1\n", "red: x\n", "red: 1\nblue: 1\n", "red: 9\n"):
        with pytest.raises(GraphFormatError):
            io.parse_state(bad, 3)


def test_profile_round_trip_and_errors():
    g, _ = worked_example_graph()
    prof = dynamics.PickProfile(EXAMPLE_PICKS)
    text = io.format_profile(prof)
    assert text.splitlines()[0] == "2 1 1"
    assert np.array_equal(io.parse_profile(text, g).picks, EXAMPLE_PICKS)
    with pytest.raises(GraphFormatError):
        io.parse_profile("2 1 1\n", g)
    with pytest.raises(GraphFormatError):
        io.parse_profile(text.replace("2 1 1", "3 1 1"), g)
    with pytest.raises(GraphFormatError):
        io.parse_profile(text.replace("2 1 1", "2 1"), g)


def test_csv_round_trip():
    text = io.format_csv(("a", "b"), [(1, 0.1), ("x y", np.float64(2.5))])
    header, rows = io.parse_csv(text)
    assert header == ["a", "b"] and rows == [["1", "0.1"], ["x y", "2.5"]]


def test_trajectory_rows():
    g, s = worked_example_graph()
    res = dynamics.replay(g, s, dynamics.PickProfile(EXAMPLE_PICKS))
    rows = io.trajectory_rows(res)
    assert rows[0] == (0, 1, 0, 4, "3")
    assert rows[2] == (2, 3, 0, 2, "1")
    assert rows[3] == (3, 4, 0, 1, "0")
