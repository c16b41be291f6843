"""Multigraph primitives: darts, walks, circuits, contraction, edge doubling.

Vertices and edges carry dense integer ids.  The stored endpoint order
``(u, v)`` of each edge is its reference orientation; every dart, chain
coefficient, and serialized artifact in this package is interpreted
against that orientation.  All values are immutable after construction
and every operation here is a pure function.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    Backtrack,
    BadEdgeSubset,
    BadEndpoint,
    IsolatedVertex,
    NonPositiveWeight,
    NotClosed,
    NotIncident,
    NotSimpleGraph,
    Tail,
    UnknownEdge,
)


@dataclass(frozen=True)
class Dart:
    """One traversal direction of an edge.

    ``forward`` means the traversal follows the stored (u, v) orientation.
    A dart and its inverse are distinct objects even on a loop.
    """

    edge: int
    forward: bool = True

    def inverse(self) -> "Dart":
        return Dart(self.edge, not self.forward)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: Fraction


@dataclass(frozen=True)
class Graph:
    """Finite multigraph with loops, parallel edges, and positive weights.

    Invariants enforced by :func:`build_graph`: no isolated vertices,
    strictly positive weights, endpoints in range.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge(self, e: int) -> Edge:
        if not 0 <= e < len(self.edges):
            raise UnknownEdge(f"edge id {e} out of range")
        return self.edges[e]

    def is_loop(self, e: int) -> bool:
        edge = self.edge(e)
        return edge.u == edge.v

    def weight(self, e: int) -> Fraction:
        return self.edge(e).weight

    def dart_start(self, d: Dart) -> int:
        edge = self.edge(d.edge)
        return edge.u if d.forward else edge.v

    def dart_end(self, d: Dart) -> int:
        edge = self.edge(d.edge)
        return edge.v if d.forward else edge.u

    @cached_property
    def incidence(self) -> tuple[tuple[Dart, ...], ...]:
        """Darts leaving each vertex, in (edge id, forward-first) order.

        A loop contributes both of its darts to its single endpoint.
        """
        out: list[list[Dart]] = [[] for _ in range(self.vertex_count)]
        for e, edge in enumerate(self.edges):
            out[edge.u].append(Dart(e, True))
            out[edge.v].append(Dart(e, False))
        return tuple(tuple(sorted(ds, key=lambda d: (d.edge, not d.forward))) for ds in out)

    def darts_from(self, v: int) -> tuple[Dart, ...]:
        return self.incidence[v]

    def is_simple(self) -> bool:
        seen = set()
        for edge in self.edges:
            if edge.u == edge.v:
                return False
            key = (min(edge.u, edge.v), max(edge.u, edge.v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for d in self.incidence[v]:
                w = self.dart_end(d)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.vertex_count


def _coerce_weight(value) -> Fraction:
    if isinstance(value, float):
        raise NonPositiveWeight("weights must be exact (int, Fraction, or 'p/q'), not float")
    w = Fraction(value)
    if w <= 0:
        raise NonPositiveWeight(f"weight {w} is not positive")
    return w


def build_graph(vertex_count: int, edges: Iterable[Sequence]) -> Graph:
    """Validate and build a :class:`Graph`.

    Each item of ``edges`` is ``(u, v)`` or ``(u, v, weight)``; omitted
    weights default to 1 (the trivial metric).  Rejects out-of-range
    endpoints, non-positive weights, and isolated vertices.
    """
    if vertex_count < 1:
        raise ValueError("vertex_count must be at least 1")
    built: list[Edge] = []
    covered = [False] * vertex_count
    for item in edges:
        if len(item) == 2:
            u, v = item
            w = Fraction(1)
        elif len(item) == 3:
            u, v, w = item
            w = _coerce_weight(w)
        else:
            raise ValueError(f"edge spec {item!r} must be (u, v) or (u, v, weight)")
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise BadEndpoint(f"edge ({u}, {v}) has an endpoint outside 0..{vertex_count - 1}")
        built.append(Edge(int(u), int(v), w))
        covered[u] = covered[v] = True
    for v, ok in enumerate(covered):
        if not ok:
            raise IsolatedVertex(f"vertex {v} has no incident edge")
    return Graph(vertex_count, tuple(built))


@dataclass(frozen=True)
class Walk:
    """Nonempty dart sequence with consecutive incidence.

    ``vertices`` is the visited vertex sequence, one longer than ``darts``.
    """

    darts: tuple[Dart, ...]
    vertices: tuple[int, ...]

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.darts)

    @property
    def is_closed(self) -> bool:
        return self.start == self.end


@dataclass(frozen=True)
class Circuit(Walk):
    """Closed walk without backtracks or a tail."""


def make_walk(graph: Graph, darts: Iterable[Dart]) -> Walk:
    darts = tuple(darts)
    if not darts:
        raise ValueError("a walk must contain at least one dart")
    vertices = [graph.dart_start(darts[0])]
    for i, d in enumerate(darts):
        if graph.dart_start(d) != vertices[-1]:
            raise NotIncident(i - 1)
        vertices.append(graph.dart_end(d))
    return Walk(darts, tuple(vertices))


def walk_mu_length(graph: Graph, walk: Walk) -> Fraction:
    """Metric length of a walk: the sum of traversed edge weights."""
    return sum((graph.weight(d.edge) for d in walk.darts), Fraction(0))


def validate_circuit(graph: Graph, darts: Iterable[Dart]) -> Circuit:
    """Check closure, non-backtracking, and tail-freeness of a dart sequence.

    Traversing two distinct parallel edges back and forth is not a
    backtrack; only an immediate reversal of the same edge is.
    """
    walk = darts if isinstance(darts, Walk) else make_walk(graph, darts)
    if not walk.is_closed:
        raise NotClosed(f"walk runs from {walk.start} to {walk.end}")
    seq = walk.darts
    for i in range(len(seq) - 1):
        if seq[i + 1] == seq[i].inverse():
            raise Backtrack(i)
    if len(seq) > 1 and seq[0] == seq[-1].inverse():
        raise Tail("first dart reverses the last one")
    return Circuit(seq, walk.vertices)


def translate_circuit(circuit: Circuit, k: int) -> Circuit:
    """Rotate a circuit: position i of the result is position (i+k) mod L."""
    length = circuit.length
    k %= length
    if k == 0:
        return circuit
    darts = circuit.darts[k:] + circuit.darts[:k]
    vertices = circuit.vertices[k:] + circuit.vertices[1 : k + 1]
    return Circuit(darts, vertices)


def rotate_closed_walk(walk: Walk, k: int) -> Walk:
    """Rotate any closed walk; unlike circuits this permits backtracks."""
    if not walk.is_closed:
        raise NotClosed("only closed walks can be rotated")
    length = walk.length
    k %= length
    if k == 0:
        return walk
    darts = walk.darts[k:] + walk.darts[:k]
    vertices = walk.vertices[k:] + walk.vertices[1 : k + 1]
    return Walk(darts, vertices)


@dataclass(frozen=True)
class Subgraph:
    """Edge-induced subgraph with dense re-indexing and both maps."""

    graph: Graph
    vertex_of: tuple[int, ...]  # new vertex id -> original vertex id
    vertex_index: dict  # original vertex id -> new vertex id
    edge_of: tuple[int, ...]  # new edge id -> original edge id
    edge_index: dict  # original edge id -> new edge id


def edge_subgraph(graph: Graph, edge_ids: Iterable[int]) -> Subgraph:
    ids = sorted(set(edge_ids))
    for e in ids:
        if not 0 <= e < graph.edge_count:
            raise BadEdgeSubset(f"edge id {e} out of range")
    if not ids:
        raise BadEdgeSubset("edge subset is empty")
    verts = sorted({w for e in ids for w in (graph.edges[e].u, graph.edges[e].v)})
    vindex = {v: i for i, v in enumerate(verts)}
    edges = [
        Edge(vindex[graph.edges[e].u], vindex[graph.edges[e].v], graph.edges[e].weight)
        for e in ids
    ]
    sub = Graph(len(verts), tuple(edges))
    return Subgraph(sub, tuple(verts), vindex, tuple(ids), {e: i for i, e in enumerate(ids)})


@dataclass(frozen=True)
class Contraction:
    """Result of collapsing each component of an edge subset to a vertex.

    ``vertex_map[v]`` is the image of original vertex ``v``;
    ``edge_of[j]`` is the original id of surviving edge ``j``, and
    ``edge_index`` is the partial inverse (contracted edges are absent).
    ``components`` lists the collapsed vertex groups (sorted, ascending
    minimum), and ``component_vertex[i]`` their image vertices.
    """

    graph: Graph
    vertex_map: tuple[int, ...]
    edge_of: tuple[int, ...]
    edge_index: dict
    components: tuple[tuple[int, ...], ...]
    component_vertex: tuple[int, ...]


def contract(graph: Graph, edge_ids: Iterable[int]) -> Contraction:
    """Contract every edge of a subset, keeping all remaining edges.

    Each connected component of the subset collapses to a single vertex.
    Surviving edges keep their reference orientation with remapped
    endpoints; parallel edges and newly created loops are retained.
    """
    ids = sorted(set(edge_ids))
    for e in ids:
        if not 0 <= e < graph.edge_count:
            raise BadEdgeSubset(f"edge id {e} out of range")
    id_set = set(ids)

    parent = list(range(graph.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    in_subset = set()
    for e in ids:
        edge = graph.edges[e]
        in_subset.add(edge.u)
        in_subset.add(edge.v)
        parent[find(edge.u)] = find(edge.v)

    # New ids in ascending order of each unit's smallest original vertex.
    new_id: dict[int, int] = {}
    vertex_map = [0] * graph.vertex_count
    groups: dict[int, list[int]] = {}
    next_id = 0
    for v in range(graph.vertex_count):
        root = find(v) if v in in_subset else None
        key = ("c", root) if root is not None else ("v", v)
        if key not in new_id:
            new_id[key] = next_id
            next_id += 1
        vertex_map[v] = new_id[key]
        if root is not None:
            groups.setdefault(new_id[key], []).append(v)

    surviving = [e for e in range(graph.edge_count) if e not in id_set]
    edges = [
        Edge(vertex_map[graph.edges[e].u], vertex_map[graph.edges[e].v], graph.edges[e].weight)
        for e in surviving
    ]
    covered = [False] * next_id
    for edge in edges:
        covered[edge.u] = covered[edge.v] = True
    for v, ok in enumerate(covered):
        if not ok:
            raise BadEdgeSubset(f"contraction isolates vertex {v}")

    components = tuple(
        tuple(sorted(groups[i])) for i in sorted(groups)
    )
    component_vertex = tuple(sorted(groups))
    result = Graph(next_id, tuple(edges))
    return Contraction(
        graph=result,
        vertex_map=tuple(vertex_map),
        edge_of=tuple(surviving),
        edge_index={e: j for j, e in enumerate(surviving)},
        components=components,
        component_vertex=component_vertex,
    )


@dataclass(frozen=True)
class Doubling:
    """A simple graph with every edge duplicated, plus both travel maps.

    Twin edges ``2k`` and ``2k + 1`` of original edge ``k`` share its
    endpoints but are stored with opposite orientations, so both travel
    directions along ``k`` appear as forward darts in the doubling.
    """

    base: Graph
    graph: Graph

    def twins(self, e: int) -> tuple[int, int]:
        return 2 * e, 2 * e + 1

    def original_edge(self, doubled_edge: int) -> int:
        return doubled_edge // 2

    def project_dart(self, d: Dart) -> Dart:
        if d.edge % 2 == 0:
            return Dart(d.edge // 2, d.forward)
        return Dart(d.edge // 2, not d.forward)

    def project_walk(self, walk: Walk) -> Walk:
        # Vertex ids coincide, so the visited sequence carries over.
        return Walk(tuple(self.project_dart(d) for d in walk.darts), walk.vertices)

    def lift_dart(self, d: Dart) -> Dart:
        # The unique forward twin dart agreeing with the travel direction.
        return Dart(2 * d.edge, True) if d.forward else Dart(2 * d.edge + 1, True)

    def lift_walk(self, walk: Walk) -> Walk:
        return Walk(tuple(self.lift_dart(d) for d in walk.darts), walk.vertices)


def double(graph: Graph) -> Doubling:
    """Duplicate every edge of a simple graph with opposite twin orientations."""
    if not graph.is_simple():
        raise NotSimpleGraph("doubling is defined for graphs without loops or parallel edges")
    edges: list[Edge] = []
    for edge in graph.edges:
        edges.append(Edge(edge.u, edge.v, edge.weight))
        edges.append(Edge(edge.v, edge.u, edge.weight))
    return Doubling(base=graph, graph=Graph(graph.vertex_count, tuple(edges)))
