"""Detection of direction-consistent circuits with a prescribed abelianization.

Given a nonzero circulation with connected support, builds a circuit whose
abelianization is exactly that circulation and whose dart count equals its
unit norm.  The procedure greedily extends a path along residual
orientation-aligned darts; when stuck it is provably closed, and rotating
it to a vertex with residual out-darts lets the extension resume until
the residual chain is exhausted.
"""

from __future__ import annotations

from typing import Sequence

from .chains import Chain, is_circulation, support_info
from .errors import DisconnectedSupport, NotCirculation, ZeroChain
from .graph import Circuit, Dart, Graph

__all__ = ["detect_circuit"]


def detect_circuit(
    graph: Graph,
    chain: Chain,
    start: int | None = None,
    edge_priority: Sequence[int] | None = None,
) -> Circuit:
    """Find a minimum-length circuit abelianizing to ``chain``.

    The output is direction-consistent (never uses both directions of an
    edge), has length equal to the chain's unit norm, and is deterministic:
    the walk starts at the lowest-id support vertex and always follows the
    residual out-dart of smallest edge id.  ``start`` overrides the start
    vertex; ``edge_priority`` promotes the listed edge ids (in order) ahead
    of the ascending-id default when several residual out-darts compete.
    """
    if not chain:
        raise ZeroChain("cannot detect a circuit for the zero chain")
    if not is_circulation(graph, chain):
        raise NotCirculation("chain does not satisfy the balancing condition")
    info = support_info(graph, chain)
    if not info.connected:
        raise DisconnectedSupport(
            f"support has {len(info.components)} components; no circuit of minimal length exists"
        )

    rank: dict[int, int] = {}
    if edge_priority:
        rank = {e: i for i, e in enumerate(edge_priority)}
    fallback = len(rank)

    def key(edge: int) -> tuple[int, int]:
        return (rank.get(edge, fallback), edge)

    # Residual out-darts per vertex, aligned with the induced orientation.
    out: dict[int, list[list]] = {}
    for e in sorted(info.edges, key=key):
        edge = graph.edges[e]
        forward = info.direction[e]
        tail = edge.u if forward else edge.v
        out.setdefault(tail, []).append([Dart(e, forward), abs(chain.coeff(e))])
    cursor = {v: 0 for v in out}
    remaining = chain.abs_total()

    if start is None:
        start = min(info.vertices)
    elif start not in info.vertices:
        raise ValueError(f"start vertex {start} is not in the support")

    def next_dart(v: int):
        slots = out.get(v)
        if slots is None:
            return None
        i = cursor[v]
        while i < len(slots) and slots[i][1] == 0:
            i += 1
        cursor[v] = i
        return slots[i] if i < len(slots) else None

    path: list[Dart] = []
    v = start
    while True:
        slot = next_dart(v)
        while slot is not None:
            dart, _ = slot
            slot[1] -= 1
            remaining -= 1
            path.append(dart)
            v = graph.dart_end(dart)
            slot = next_dart(v)
        # The path is now a closed circuit back at its start.
        if remaining == 0:
            break
        # Rotate to the first position whose vertex still has residual
        # out-darts; an index walk stands in for repeated translation.
        for k in range(1, len(path) + 1):
            u = graph.dart_end(path[k - 1])
            if next_dart(u) is not None:
                path = path[k:] + path[:k]
                v = u
                break
        else:  # pragma: no cover - impossible for connected circulations
            raise AssertionError("no residual vertex found on a connected support")

    vertices = [graph.dart_start(path[0])]
    for d in path:
        vertices.append(graph.dart_end(d))
    return Circuit(tuple(path), tuple(vertices))
