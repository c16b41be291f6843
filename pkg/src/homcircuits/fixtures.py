"""Built-in reference instances used by the fixture runner and the tests."""

from __future__ import annotations

from .chains import Chain
from .graph import Dart, Graph, build_graph

# Complete graph on four vertices with a fixed orientation and the
# reference circulation whose minimal circuits have length 10.
K4_EDGES = [
    (0, 1),  # 0: v1 -> v2
    (0, 3),  # 1: v1 -> v4
    (1, 3),  # 2: v2 -> v4
    (2, 0),  # 3: v3 -> v1
    (2, 1),  # 4: v3 -> v2
    (3, 2),  # 5: v4 -> v3
]

K4_COEFFS = {0: 1, 1: 1, 2: 2, 3: 2, 4: 1, 5: 3}

# The canonical worked answer: a length-10 circuit reachable with the
# documented tie-break overrides (start at v1, prefer edge 1 first).
K4_REFERENCE_DARTS = [Dart(e) for e in (5, 3, 0, 2, 5, 3, 1, 5, 4, 2)]
K4_DETECT_START = 0
K4_DETECT_PRIORITY = (1,)


def k4_graph() -> Graph:
    return build_graph(4, K4_EDGES)


def k4_chain() -> Chain:
    return Chain(K4_COEFFS)


# Nine-vertex graph whose demand chain is supported on three separate
# islands; joining them optimally costs two extra edges each way.
ISLANDS_EDGES = [
    (0, 1),  # 0
    (1, 2),  # 1
    (2, 1),  # 2
    (2, 3),  # 3
    (1, 5),  # 4
    (5, 0),  # 5
    (4, 5),  # 6
    (5, 3),  # 7
    (3, 4),  # 8
    (4, 3),  # 9
    (4, 6),  # 10
    (5, 7),  # 11
    (7, 6),  # 12
    (6, 8),  # 13
    (8, 7),  # 14
    (8, 0),  # 15
]

ISLANDS_COEFFS = {1: 2, 2: 2, 8: 2, 9: 1, 6: 1, 7: 1, 13: 1, 14: 1, 12: 1}

# The hub tree through vertex 0: heavier by one unit than the optimum.
ISLANDS_STAR_TREE = (0, 5, 15)
ISLANDS_OPTIMAL_TREE = (3, 10)


def islands_graph() -> Graph:
    return build_graph(9, ISLANDS_EDGES)


def islands_chain() -> Chain:
    return Chain(ISLANDS_COEFFS)


def triangle_graph() -> Graph:
    return build_graph(3, [(0, 1), (1, 2), (2, 0)])


def square_graph() -> Graph:
    return build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
