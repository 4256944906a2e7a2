"""Node colourings."""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable

import numpy as np


class Color(IntEnum):
    UNCOLORED = 0
    RED = 1
    BLUE = 2


class ColorState:
    """Immutable per-node colour assignment with cached red/blue/uncoloured counts."""

    __slots__ = ("_colors", "red_count", "blue_count", "uncolored_count")

    def __init__(self, colors):
        arr = np.array(colors, dtype=np.int8)
        if arr.ndim != 1:
            raise ValueError("colors must be one-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() > 2):
            raise ValueError("colors must be 0 (uncolored), 1 (red) or 2 (blue)")
        arr.setflags(write=False)
        self._colors = arr
        counts = np.bincount(arr, minlength=3)
        self.uncolored_count = int(counts[0])
        self.red_count = int(counts[1])
        self.blue_count = int(counts[2])

    @classmethod
    def uncolored(cls, n: int) -> "ColorState":
        return cls(np.zeros(n, dtype=np.int8))

    @classmethod
    def from_sets(cls, n: int, red: Iterable[int] = (), blue: Iterable[int] = ()) -> "ColorState":
        colors = np.zeros(n, dtype=np.int8)
        red = list(red)
        blue = list(blue)
        for v in red + blue:
            if not 0 <= v < n:
                raise ValueError(f"node {v} out of range for n={n}")
        if set(red) & set(blue):
            raise ValueError("a node cannot be both red and blue")
        colors[red] = Color.RED
        colors[blue] = Color.BLUE
        return cls(colors)

    @property
    def colors(self) -> np.ndarray:
        return self._colors

    @property
    def n(self) -> int:
        return self._colors.shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, v) -> Color:
        return Color(int(self._colors[v]))

    def __eq__(self, other):
        if not isinstance(other, ColorState):
            return NotImplemented
        return np.array_equal(self._colors, other._colors)

    def __hash__(self):
        return hash(self._colors.tobytes())

    def __repr__(self):
        return f"ColorState(red={self.red().tolist()}, blue={self.blue().tolist()}, n={self.n})"

    def red(self) -> np.ndarray:
        return np.flatnonzero(self._colors == Color.RED)

    def blue(self) -> np.ndarray:
        return np.flatnonzero(self._colors == Color.BLUE)

    def uncolored_nodes(self) -> np.ndarray:
        return np.flatnonzero(self._colors == Color.UNCOLORED)

    def colored_nodes(self) -> np.ndarray:
        return np.flatnonzero(self._colors != Color.UNCOLORED)

    def with_red(self, nodes: Iterable[int]) -> "ColorState":
        """Copy with ``nodes`` recoloured red; blue nodes may not be targeted."""
        nodes = np.asarray(list(nodes), dtype=np.int64)
        if nodes.size and np.any(self._colors[nodes] == Color.BLUE):
            raise ValueError("seed set intersects the blue set")
        colors = self._colors.copy()
        colors[nodes] = Color.RED
        return ColorState(colors)
