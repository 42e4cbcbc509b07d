"""Small hand-drawn models with frozen expected results.

Grids are drawn row by row; a model point ``(r, c)`` is row ``r``,
column ``c``.  Expected sets were produced by ``oracle.oracle_check`` and
checked by hand, then frozen here as pictures (``#`` = in the set).
"""

from __future__ import annotations

import numpy as np

from imgql.model import Model
from imgql.space import Adjacency, GridSpace


def grid_model(rows, symbols, adjacency=Adjacency.ORTHOGONAL) -> Model:
    g = np.array([list(r) for r in rows])
    space = GridSpace(g.shape, adjacency=adjacency)
    return Model(space, {name: (g == ch).astype(float) for name, ch in symbols.items()})


def picture_set(picture) -> set:
    return {(r, c) for r, row in enumerate(picture) for c, ch in enumerate(row) if ch == "#"}


# white (W), yellow (Y), pink (P); yellow S pink leaves the bottom-left block
COLOURS = [
    "WWWWWW",
    "WYYWWW",
    "PYYPWW",
    "PPPPWW",
    "YYPWWW",
    "YYPWWW",
]
COLOUR_SYMBOLS = {"yellow": "Y", "pink": "P", "white": "W"}
YELLOW_S_PINK = {(4, 0), (4, 1), (5, 0), (5, 1)}

# a q block fenced by a p ring, a loose q blob on the right, a stray q corner
PQ = [
    "............",
    ".ppppppp....",
    ".pqqqqqp....",
    ".pqqqqqp..qq",
    ".pqqqqqp..qq",
    ".pqqqqqp..q.",
    ".pqqqqqp....",
    ".ppppppp....",
    "q...........",
]
PQ_SYMBOLS = {"p": "p", "q": "q"}

PQ_EXPECTED = {
    "not_near_q": [
        "############",
        "##.....#####",
        "#.......##..",
        "#.......#...",
        "#.......#...",
        "#.......#...",
        "#.......##.#",
        ".#.....#####",
        "..##########",
    ],
    "q_S_p": [
        "............",
        "............",
        "..#####.....",
        "..#####.....",
        "..#####.....",
        "..#####.....",
        "..#####.....",
        "............",
        "............",
    ],
    "p_T_not_near_q": [
        "............",
        ".#######....",
        ".#.....#....",
        ".#.....#....",
        ".#.....#....",
        ".#.....#....",
        ".#.....#....",
        ".#######....",
        "............",
    ],
    "dist_gt2_p": [
        ".........###",
        "..........##",
        "..........##",
        "..........##",
        "....#.....##",
        "..........##",
        "..........##",
        "..........##",
        ".........###",
    ],
    "flt3_q": [
        "............",
        "............",
        "....#.......",
        "...###......",
        "..#####.....",
        "...###......",
        "....#.......",
        "............",
        "............",
    ],
    "flt2_q": [
        "............",
        "............",
        "...###......",
        "..#####.....",
        "..#####.....",
        "..#####.....",
        "...###......",
        "............",
        "............",
    ],
    "q_S22_p": [
        "............",
        "............",
        "............",
        "...###......",
        "...#.#......",
        "...###......",
        "............",
        "............",
        "............",
    ],
    "q_S23_p": [
        "............",
        "............",
        "............",
        "...###......",
        "...###......",
        "...###......",
        "............",
        "............",
        "............",
    ],
}
