"""Integer edge chains: circulations, supports, norms, orderings, cycle bases.

A chain assigns a signed integer to each edge, read against the edge's
reference orientation; traversing an edge backwards counts as -1 forward.
A circulation is a chain whose net degree vanishes at every vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import Disconnected, UnknownEdge, ZeroChain
from .graph import Dart, Graph, Walk


class Chain:
    """Sparse integer edge chain; zero coefficients are never stored."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        cleaned = {}
        for edge, c in items:
            c = int(c)
            if c:
                cleaned[int(edge)] = c
        self._coeffs = cleaned

    @classmethod
    def from_dart(cls, dart: Dart) -> "Chain":
        return cls({dart.edge: 1 if dart.forward else -1})

    def coeff(self, edge: int) -> int:
        return self._coeffs.get(edge, 0)

    def items(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self._coeffs.items()))

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def abs_total(self) -> int:
        """Sum of absolute coefficients; the unit-metric norm."""
        return sum(abs(c) for c in self._coeffs.values())

    def restrict(self, edges: Iterable[int]) -> "Chain":
        keep = set(edges)
        return Chain({e: c for e, c in self._coeffs.items() if e in keep})

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Chain) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: "Chain") -> "Chain":
        merged = dict(self._coeffs)
        for e, c in other._coeffs.items():
            merged[e] = merged.get(e, 0) + c
        return Chain(merged)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain({e: -c for e, c in self._coeffs.items()})

    def __mul__(self, scalar: int) -> "Chain":
        return Chain({e: c * scalar for e, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Chain({dict(self.items())!r})"


def _check_edges(graph: Graph, chain: Chain) -> None:
    for e in chain.support():
        if not 0 <= e < graph.edge_count:
            raise UnknownEdge(f"chain refers to edge {e} outside the graph")


def abelianize(walk: Walk) -> Chain:
    """Signed traversal counts of a walk, one per edge."""
    coeffs: dict[int, int] = {}
    for d in walk.darts:
        coeffs[d.edge] = coeffs.get(d.edge, 0) + (1 if d.forward else -1)
    return Chain(coeffs)


def is_circulation(graph: Graph, chain: Chain) -> bool:
    """Whether the net chain degree vanishes at every vertex.

    Loops contribute equally in both directions and always cancel.
    """
    _check_edges(graph, chain)
    degree = [0] * graph.vertex_count
    for e, c in chain.items():
        edge = graph.edges[e]
        if edge.u == edge.v:
            continue
        degree[edge.u] += c
        degree[edge.v] -= c
    return all(d == 0 for d in degree)


@dataclass(frozen=True)
class SupportComponent:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class SupportInfo:
    """Support subgraph of a chain with its induced partial orientation.

    ``direction[e]`` is True when the positive traversal of edge ``e``
    (the one making the coefficient positive) follows the reference
    orientation.  Degree tables cover support vertices only.
    """

    edges: frozenset
    vertices: frozenset
    direction: dict
    components: tuple[SupportComponent, ...]
    connected: bool
    universal: bool
    out_degree: dict
    in_degree: dict


def support_info(graph: Graph, chain: Chain) -> SupportInfo:
    if not chain:
        raise ZeroChain("the zero chain has no support")
    _check_edges(graph, chain)

    edges = set(chain.support())
    direction = {e: chain.coeff(e) > 0 for e in edges}
    vertices = set()
    out_degree: dict[int, int] = {}
    in_degree: dict[int, int] = {}
    adjacency: dict[int, set[int]] = {}
    for e in edges:
        edge = graph.edges[e]
        mag = abs(chain.coeff(e))
        head, tail = (edge.u, edge.v) if direction[e] else (edge.v, edge.u)
        vertices.update((edge.u, edge.v))
        out_degree[head] = out_degree.get(head, 0) + mag
        in_degree[tail] = in_degree.get(tail, 0) + mag
        adjacency.setdefault(edge.u, set()).add(e)
        adjacency.setdefault(edge.v, set()).add(e)
    for v in vertices:
        out_degree.setdefault(v, 0)
        in_degree.setdefault(v, 0)

    components = []
    seen: set[int] = set()
    for v in sorted(vertices):
        if v in seen:
            continue
        comp_vertices = {v}
        comp_edges: set[int] = set()
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            for e in adjacency.get(x, ()):
                comp_edges.add(e)
                edge = graph.edges[e]
                for y in (edge.u, edge.v):
                    if y not in seen:
                        seen.add(y)
                        comp_vertices.add(y)
                        queue.append(y)
        components.append(
            SupportComponent(tuple(sorted(comp_vertices)), tuple(sorted(comp_edges)))
        )

    return SupportInfo(
        edges=frozenset(edges),
        vertices=frozenset(vertices),
        direction=direction,
        components=tuple(components),
        connected=len(components) == 1,
        universal=len(edges) == graph.edge_count,
        out_degree=out_degree,
        in_degree=in_degree,
    )


def l1_norm(graph: Graph, chain: Chain) -> Fraction:
    """Weighted L1 norm: sum of |coefficient| times edge weight."""
    _check_edges(graph, chain)
    return sum(
        (abs(c) * graph.weight(e) for e, c in chain.items()),
        Fraction(0),
    )


def chain_leq(alpha: Chain, beta: Chain) -> bool:
    """Partial order on chains: sign-compatible coefficient domination.

    True when every nonzero coefficient of ``alpha`` has the same sign as,
    and magnitude at most, the matching coefficient of ``beta``.  The zero
    chain precedes everything.
    """
    for e, a in alpha.items():
        b = beta.coeff(e)
        if b == 0 or (a > 0) != (b > 0) or abs(a) > abs(b):
            return False
    return True


def cycle_basis(graph: Graph) -> list[Chain]:
    """Fundamental-cycle basis of the circulation lattice.

    Builds a breadth-first spanning tree (ascending vertex and edge ids)
    and returns one chain per non-tree edge: the edge forward plus the
    tree path closing it.  The result has m - n + 1 chains, each a
    circulation, and they are integrally independent.
    """
    if not graph.is_connected():
        raise Disconnected("cycle basis requires a connected graph")

    parent: dict[int, int] = {0: -1}
    parent_edge: dict[int, int] = {}
    depth = {0: 0}
    tree_edges: set[int] = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for d in graph.darts_from(v):
            w = graph.dart_end(d)
            if w not in parent:
                parent[w] = v
                parent_edge[w] = d.edge
                depth[w] = depth[v] + 1
                tree_edges.add(d.edge)
                queue.append(w)

    basis = []
    for e in range(graph.edge_count):
        if e in tree_edges:
            continue
        edge = graph.edges[e]
        coeffs = {e: 1}
        if edge.u != edge.v:
            # Path v -> u through the tree: up from v, down to u.
            x, y = edge.v, edge.u
            while depth[x] > depth[y]:
                _climb_step(graph, parent, parent_edge, coeffs, x, 1)
                x = parent[x]
            while depth[y] > depth[x]:
                _climb_step(graph, parent, parent_edge, coeffs, y, -1)
                y = parent[y]
            while x != y:
                _climb_step(graph, parent, parent_edge, coeffs, x, 1)
                _climb_step(graph, parent, parent_edge, coeffs, y, -1)
                x = parent[x]
                y = parent[y]
        basis.append(Chain(coeffs))
    return basis


def _climb_step(graph, parent, parent_edge, coeffs, x, sign):
    # One tree step from x toward the root, accumulated with direction sign.
    e = parent_edge[x]
    edge = graph.edges[e]
    step = sign if (edge.u == x and edge.v == parent[x]) else -sign
    coeffs[e] = coeffs.get(e, 0) + step
