"""Text formats: edge lists, colour states, pick profiles and CSV tables."""

from __future__ import annotations

import csv
import io as _io
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dynamics import PickProfile, RunResult
from .errors import GraphFormatError
from .graph import Graph, build_graph
from .state import ColorState


def parse_edge_list(text: str, undirected: bool = False) -> tuple[Graph, list[str]]:
    """Parse whitespace-separated "u v" lines; '#' and '%' lines are comments.

    A leading "# nodes N" header fixes the node count and means ids are
    already dense 0..N-1; a "# undirected" line mirrors every edge. Otherwise labels are remapped to 0..n-1 in sorted
    order (numerically when all labels are integers). Returns the graph and
    the label of every node id.
    """
    declared = None
    pairs: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "#%":
            parts = line[1:].split()
            if parts == ["undirected"]:
                undirected = True
            elif len(parts) == 2 and parts[0] == "nodes" and declared is None and not pairs:
                try:
                    declared = int(parts[1])
                except ValueError:
                    raise GraphFormatError(f"line {lineno}: bad node count {parts[1]!r}") from None
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        pairs.append((parts[0], parts[1]))  # extra columns (weights, timestamps) are ignored
    if declared is not None:
        try:
            edges = [(int(a), int(b)) for a, b in pairs]
        except ValueError:
            raise GraphFormatError("non-integer node id with a '# nodes' header") from None
        if declared <= 0:
            raise GraphFormatError("node count must be positive")
        try:
            g = build_graph(edges, declared, undirected)
        except ValueError as e:
            raise GraphFormatError(str(e)) from None
        return g, [str(i) for i in range(declared)]
    labels = sorted({x for p in pairs for x in p}, key=_label_key)
    if not labels:
        raise GraphFormatError("edge list is empty and declares no nodes")
    ids = {lab: i for i, lab in enumerate(labels)}
    return build_graph([(ids[a], ids[b]) for a, b in pairs], len(labels), undirected), labels


def _label_key(s):
    try:
        return (0, int(s), "")
    except ValueError:
        return (1, 0, s)


def load_edge_list(path, undirected: bool = False) -> tuple[Graph, list[str]]:
    return parse_edge_list(Path(path).read_text(), undirected)


def format_edge_list(graph: Graph) -> str:
    """Edge list with a "# nodes N" header; undirected graphs list each edge once."""
    lines = [f"# nodes {graph.n}"]
    if graph.undirected:
        lines.append("# undirected")
    for u, v in graph.edges().tolist():
        if graph.undirected and u > v:
            continue
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def write_edge_list(graph: Graph, path) -> None:
    Path(path).write_text(format_edge_list(graph))


# --- states ------------------------------------------------------------------------

def parse_state(text: str, n: int) -> ColorState:
    """Lines "red: ids..." and "blue: ids..."; every other node is uncoloured."""
    sets = {"red": [], "blue": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in sets:
            raise GraphFormatError(f"line {lineno}: expected 'red:' or 'blue:', got {raw!r}")
        try:
            sets[key].extend(int(x) for x in rest.replace(",", " ").split())
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer node id") from None
    try:
        return ColorState.from_sets(n, sets["red"], sets["blue"])
    except ValueError as e:
        raise GraphFormatError(str(e)) from None


def format_state(state: ColorState) -> str:
    red = " ".join(map(str, state.red().tolist()))
    blue = " ".join(map(str, state.blue().tolist()))
    return f"red: {red}\nblue: {blue}\n"


# --- pick profiles ----------------------------------------------------------------------

def parse_profile(text: str, graph: Graph) -> PickProfile:
    """One line per node holding its T picks; -1 means no pick."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if len(rows) != graph.n:
        raise GraphFormatError(f"profile has {len(rows)} rows, graph has {graph.n} nodes")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise GraphFormatError("profile rows have different lengths")
    try:
        picks = np.array([[int(x) for x in r] for r in rows], dtype=np.int64).reshape(graph.n, -1)
    except ValueError:
        raise GraphFormatError("profile holds a non-integer entry") from None
    prof = PickProfile(picks)
    try:
        prof.validate(graph)
    except ValueError as e:
        raise GraphFormatError(str(e)) from None
    return prof


def format_profile(profile: PickProfile) -> str:
    return "".join(" ".join(map(str, row)) + "\n" for row in profile.picks.tolist())


# --- tables ------------------------------------------------------------------------------

def format_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(_io.StringIO(text)))
    return rows[0], rows[1:]


def trajectory_rows(result: RunResult):
    """(round, r, b, u, nodes coloured that round) for rounds 0..rounds."""
    return [(t, *map(int, row), " ".join(map(str, result.newly_colored(t).tolist())))
            for t, row in enumerate(result.trajectory)]


TRAJECTORY_HEADER = ("round", "r", "b", "u", "newly_colored")
