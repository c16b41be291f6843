"""Minimum-length circuits for circulations with disconnected support.

When the support splits into several components, the optimal circuit
traverses each component's own minimal circuit and commutes between
components along a minimum Steiner tree of the contracted graph, walking
every tree edge once in each direction.  The resulting length is exactly

    2 * tree_weight + weighted_norm(chain)

and no circuit in the class is shorter.  The assembly interleaves the
component circuits with tree excursions by an event rule: whenever the
walk stands at a vertex with a pending tree departure it takes it, and
the nesting of the tree tour guarantees every return lands where the
component circuit paused.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .chains import Chain, abelianize, is_circulation, l1_norm, support_info
from .detect import detect_circuit
from .errors import (
    Backtrack,
    BadEdgeSubset,
    BudgetExceeded,
    Disconnected,
    NotCirculation,
    Tail,
    ZeroChain,
)
from .graph import (
    Circuit,
    Contraction,
    Dart,
    Graph,
    Walk,
    contract,
    make_walk,
    validate_circuit,
    walk_mu_length,
)

__all__ = [
    "ShortestCircuit",
    "brute_force_shortest",
    "shortest_circuit",
    "steiner_tree",
    "tree_tour",
]

DEFAULT_TERMINAL_LIMIT = 12


def _steiner_weight(
    vertex_count: int,
    edges: Sequence[tuple[int, int, Fraction]],
    terminals: Sequence[int],
) -> Fraction | None:
    """Minimum weight of a subtree spanning the terminals, or None.

    Subset dynamic programming: state (terminal subset S, vertex v) holds
    the lightest tree connecting S and v; transitions merge two subtrees
    at v or grow along one edge (Dijkstra within a fixed S).
    """
    terms = sorted(set(terminals))
    k = len(terms)
    if k <= 1:
        return Fraction(0)
    adjacency: list[list[tuple[int, Fraction]]] = [[] for _ in range(vertex_count)]
    for u, v, w in edges:
        if u == v:
            continue  # a positive-weight loop never helps a tree
        adjacency[u].append((v, w))
        adjacency[v].append((u, w))

    full = (1 << k) - 1
    dist: list[list[Fraction | None]] = [
        [None] * vertex_count for _ in range(full + 1)
    ]
    for i, t in enumerate(terms):
        dist[1 << i][t] = Fraction(0)

    for mask in range(1, full + 1):
        row = dist[mask]
        sub = (mask - 1) & mask
        while sub:
            other = mask ^ sub
            if sub < other:  # each split once
                a, b = dist[sub], dist[other]
                for v in range(vertex_count):
                    if a[v] is not None and b[v] is not None:
                        cand = a[v] + b[v]
                        if row[v] is None or cand < row[v]:
                            row[v] = cand
            sub = (sub - 1) & mask
        heap = [(d, v) for v, d in enumerate(row) if d is not None]
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if row[v] is not None and d > row[v]:
                continue
            for w, weight in adjacency[v]:
                cand = d + weight
                if row[w] is None or cand < row[w]:
                    row[w] = cand
                    heapq.heappush(heap, (cand, w))

    best = None
    for v in range(vertex_count):
        d = dist[full][v]
        if d is not None and (best is None or d < best):
            best = d
    return best


def _quotient(
    vertex_count: int,
    edges: Sequence[tuple[int, int, Fraction, int]],
    merged: Sequence[tuple[int, int]],
    skip: Iterable[int],
    terminals: Sequence[int],
):
    """Merge endpoint pairs and drop skipped edges; relabel densely."""
    parent = list(range(vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in merged:
        parent[find(u)] = find(v)
    labels: dict[int, int] = {}
    for v in range(vertex_count):
        root = find(v)
        if root not in labels:
            labels[root] = len(labels)
    skip_set = set(skip)
    out_edges = [
        (labels[find(u)], labels[find(v)], w)
        for u, v, w, eid in edges
        if eid not in skip_set
    ]
    out_terms = sorted({labels[find(t)] for t in terminals})
    return len(labels), out_edges, out_terms


def steiner_tree(
    graph: Graph, terminals: Sequence[int], limit: int = DEFAULT_TERMINAL_LIMIT
) -> tuple[int, ...]:
    """Exact minimum-weight subtree spanning the terminals.

    Among all optimal trees, returns the one whose sorted edge-id tuple is
    lexicographically smallest, found by greedily forcing each edge id in
    ascending order and re-solving the remainder on the quotient graph.
    """
    terms = sorted(set(terminals))
    if not terms:
        raise ValueError("terminals must be nonempty")
    for t in terms:
        if not 0 <= t < graph.vertex_count:
            raise ValueError(f"terminal {t} out of range")
    if len(terms) > limit:
        raise BudgetExceeded(f"{len(terms)} terminals exceed the limit {limit}")
    if len(terms) == 1:
        return ()

    base_edges = [
        (edge.u, edge.v, edge.weight, e) for e, edge in enumerate(graph.edges)
    ]
    plain = [(u, v, w) for u, v, w, _ in base_edges]
    best = _steiner_weight(graph.vertex_count, plain, terms)
    if best is None:
        raise Disconnected("terminals cannot be connected")

    chosen: list[int] = []
    chosen_pairs: list[tuple[int, int]] = []
    chosen_weight = Fraction(0)
    banned: set[int] = set()
    parent = list(range(graph.vertex_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, edge in enumerate(graph.edges):
        if find(edge.u) == find(edge.v):
            banned.add(e)  # loop or cycle with edges already chosen
            continue
        trial_pairs = chosen_pairs + [(edge.u, edge.v)]
        n_q, edges_q, terms_q = _quotient(
            graph.vertex_count, base_edges, trial_pairs, banned | {e} | set(chosen), terms
        )
        rest = _steiner_weight(n_q, edges_q, terms_q)
        if rest is not None and chosen_weight + edge.weight + rest == best:
            chosen.append(e)
            chosen_pairs = trial_pairs
            chosen_weight += edge.weight
            parent[find(edge.u)] = find(edge.v)
        else:
            banned.add(e)
    if chosen_weight != best:  # pragma: no cover - greedy preserves feasibility
        raise AssertionError("lexicographic reconstruction lost the optimum")
    return tuple(chosen)


def tree_tour(graph: Graph, tree_edges: Iterable[int], root: int) -> Walk:
    """Depth-first closed walk traversing each tree edge once per direction.

    Children are visited by ascending vertex id.  The edge set must form
    a tree containing ``root``.
    """
    edges = sorted(set(tree_edges))
    adjacency: dict[int, list[tuple[int, int]]] = {}
    vertices = set()
    for e in edges:
        edge = graph.edge(e)
        if edge.u == edge.v:
            raise ValueError("a tree cannot contain a loop")
        adjacency.setdefault(edge.u, []).append((edge.v, e))
        adjacency.setdefault(edge.v, []).append((edge.u, e))
        vertices.update((edge.u, edge.v))
    if root not in vertices:
        raise ValueError(f"root {root} is not a vertex of the tree")
    if len(edges) != len(vertices) - 1:
        raise ValueError("edge set is not a tree")

    darts: list[Dart] = []
    seen = {root}

    def down(u: int, v: int, e: int) -> Dart:
        edge = graph.edges[e]
        return Dart(e, edge.u == u)

    def visit(u: int, via: int | None) -> None:
        for v, e in sorted(adjacency.get(u, ())):
            if e == via:
                continue
            if v in seen:
                raise ValueError("edge set is not a tree")
            seen.add(v)
            darts.append(down(u, v, e))
            visit(v, e)
            darts.append(down(v, u, e))

    visit(root, None)
    if len(seen) != len(vertices):
        raise ValueError("tree is not connected")
    return make_walk(graph, darts)


@dataclass(frozen=True)
class ShortestCircuit:
    """Solution record for the minimum-length circuit problem.

    ``walk`` abelianizes to the input chain and has metric length
    ``2 * tree_weight + norm`` exactly.  ``is_circuit`` is False only in
    the corner case where splicing produced an immediate reversal, in
    which case ``diagnostic`` explains the downgrade to a closed walk.
    """

    walk: Walk
    is_circuit: bool
    diagnostic: str | None
    mu_length: Fraction
    tree: tuple[int, ...]
    tree_weight: Fraction
    norm: Fraction
    components: tuple[Circuit, ...]

    @property
    def certificate(self) -> bool:
        return self.mu_length == 2 * self.tree_weight + self.norm


def _rotate_to(circuit: Circuit, vertex: int) -> Circuit:
    idx = circuit.vertices.index(vertex)
    if idx == 0:
        return circuit
    darts = circuit.darts[idx:] + circuit.darts[:idx]
    vertices = circuit.vertices[idx:] + circuit.vertices[1 : idx + 1]
    return Circuit(darts, vertices)


def _weave(
    graph: Graph,
    contraction: Contraction,
    tree_original: Sequence[int],
    circuits: Sequence[Circuit],
) -> list[Dart]:
    """Interleave component circuits with tree excursions into one walk.

    Tree edges are indexed by their original graph ids.  For each terminal
    the pending departures are keyed by their contact vertex; the walk
    consumes the component circuit dart by dart, draining every pending
    departure whenever it stands at its contact vertex.  Steiner vertices
    branch by ascending edge id.
    """
    comp_of_new: dict[int, int] = {
        nv: i for i, nv in enumerate(contraction.component_vertex)
    }
    # Adjacency of the tree inside the contracted graph, by original edge id.
    incident: dict[int, list[int]] = {}
    for e in tree_original:
        edge = graph.edges[e]
        for side in (contraction.vertex_map[edge.u], contraction.vertex_map[edge.v]):
            incident.setdefault(side, [])
        incident[contraction.vertex_map[edge.u]].append(e)
        incident[contraction.vertex_map[edge.v]].append(e)

    def contact(e: int, new_vertex: int) -> int:
        edge = graph.edges[e]
        if contraction.vertex_map[edge.u] == new_vertex:
            return edge.u
        return edge.v

    def other_side(e: int, new_vertex: int) -> int:
        edge = graph.edges[e]
        nu, nv = contraction.vertex_map[edge.u], contraction.vertex_map[edge.v]
        return nv if nu == new_vertex else nu

    def departing_dart(e: int, from_vertex: int) -> Dart:
        return Dart(e, graph.edges[e].u == from_vertex)

    out: list[Dart] = []

    def visit(new_vertex: int, via: int | None, entry: int) -> None:
        children = [e for e in sorted(incident.get(new_vertex, ())) if e != via]
        comp = comp_of_new.get(new_vertex)
        if comp is None:
            # Steiner vertex: plain depth-first branching.
            for e in children:
                child = other_side(e, new_vertex)
                out.append(departing_dart(e, entry))
                visit(child, e, contact(e, child))
                out.append(departing_dart(e, contact(e, child)))
            return
        cyc = _rotate_to(circuits[comp], entry)
        pending: dict[int, list[int]] = {}
        for e in children:
            pending.setdefault(contact(e, new_vertex), []).append(e)
        pos = 0
        while True:
            here = cyc.vertices[pos]
            queue = pending.get(here)
            while queue:
                e = queue.pop(0)
                child = other_side(e, new_vertex)
                out.append(departing_dart(e, here))
                visit(child, e, contact(e, child))
                out.append(departing_dart(e, contact(e, child)))
            if pos == len(cyc.darts):
                break
            out.append(cyc.darts[pos])
            pos += 1
        if any(pending.values()):  # pragma: no cover - circuits visit all contacts
            raise AssertionError("pending tree departure at an unvisited contact vertex")

    root_new = contraction.component_vertex[0]
    root_contacts = [contact(e, root_new) for e in incident[root_new]]
    visit(root_new, None, min(root_contacts))
    return out


def shortest_circuit(
    graph: Graph,
    chain: Chain,
    force_tree: Sequence[int] | None = None,
    terminal_limit: int = DEFAULT_TERMINAL_LIMIT,
) -> ShortestCircuit:
    """Minimum metric-length circuit whose abelianization is ``chain``.

    With connected support this reduces to direct detection.  Otherwise
    each support component contributes its own minimal circuit and the
    components are joined across a minimum Steiner tree of the contracted
    graph.  ``force_tree`` (original edge ids) substitutes a specific
    spanning tree for the optimal one; the length identity then holds for
    that tree instead, at the cost of optimality.
    """
    if not chain:
        raise ZeroChain("cannot optimize the zero chain")
    if not is_circulation(graph, chain):
        raise NotCirculation("chain does not satisfy the balancing condition")
    if not graph.is_connected():
        raise Disconnected("graph must be connected")

    info = support_info(graph, chain)
    norm = l1_norm(graph, chain)

    if info.connected and force_tree is None:
        circuit = detect_circuit(graph, chain)
        return ShortestCircuit(
            walk=circuit,
            is_circuit=True,
            diagnostic=None,
            mu_length=norm,
            tree=(),
            tree_weight=Fraction(0),
            norm=norm,
            components=(circuit,),
        )
    if info.connected:
        raise BadEdgeSubset("a tree cannot be forced for a connected support")

    components = info.components
    circuits = tuple(
        detect_circuit(graph, chain.restrict(comp.edges)) for comp in components
    )

    contraction = contract(graph, info.edges)
    terminals = list(contraction.component_vertex)

    if force_tree is None:
        tree_new = steiner_tree(contraction.graph, terminals, limit=terminal_limit)
        tree_original = tuple(contraction.edge_of[e] for e in tree_new)
    else:
        tree_original = tuple(sorted(set(force_tree)))
        _check_forced_tree(graph, contraction, tree_original, terminals)
    tree_weight = sum((graph.weight(e) for e in tree_original), Fraction(0))

    darts = _weave(graph, contraction, tree_original, circuits)
    walk = make_walk(graph, darts)
    diagnostic = None
    is_circuit = True
    try:
        walk = validate_circuit(graph, walk)
    except (Backtrack, Tail) as err:
        is_circuit = False
        diagnostic = f"splice produced a closed walk that is not a circuit: {err}"

    mu_length = walk_mu_length(graph, walk)
    if mu_length != 2 * tree_weight + norm:  # pragma: no cover - structural identity
        raise AssertionError("assembled walk violates the length identity")
    if abelianize(walk) != chain:  # pragma: no cover - structural identity
        raise AssertionError("assembled walk has the wrong abelianization")

    # Report circuits rotated to their lowest-id contact vertex.
    contact_sets = _contact_vertices(graph, contraction, tree_original, components)
    reported = tuple(
        _rotate_to(c, min(contacts)) for c, contacts in zip(circuits, contact_sets)
    )
    return ShortestCircuit(
        walk=walk,
        is_circuit=is_circuit,
        diagnostic=diagnostic,
        mu_length=mu_length,
        tree=tree_original,
        tree_weight=tree_weight,
        norm=norm,
        components=reported,
    )


def _contact_vertices(graph, contraction, tree_original, components):
    sets: list[set[int]] = [set() for _ in components]
    vertex_component = {}
    for i, comp in enumerate(components):
        for v in comp.vertices:
            vertex_component[v] = i
    for e in tree_original:
        edge = graph.edges[e]
        for v in (edge.u, edge.v):
            if v in vertex_component:
                sets[vertex_component[v]].add(v)
    return sets


def _check_forced_tree(graph, contraction, tree_original, terminals):
    for e in tree_original:
        if not 0 <= e < graph.edge_count:
            raise BadEdgeSubset(f"edge id {e} out of range")
        if e not in contraction.edge_index:
            raise BadEdgeSubset(f"edge {e} lies inside the support and cannot join components")
    news = [contraction.edge_index[e] for e in tree_original]
    parent = list(range(contraction.graph.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = set()
    for j in news:
        edge = contraction.graph.edges[j]
        if edge.u == edge.v or find(edge.u) == find(edge.v):
            raise BadEdgeSubset("forced edges contain a cycle")
        parent[find(edge.u)] = find(edge.v)
        touched.update((edge.u, edge.v))
    roots = {find(t) for t in terminals}
    if len(roots) != 1 or any(t not in touched for t in terminals):
        raise BadEdgeSubset("forced edges do not form a tree spanning all components")


def brute_force_shortest(
    graph: Graph,
    chain: Chain,
    bound: Fraction,
    max_steps: int = 2_000_000,
) -> tuple[Fraction, Circuit] | None:
    """Exhaustive search for the shortest circuit abelianizing to ``chain``.

    Explores non-backtracking closed walks of metric length at most
    ``bound``, normalized to start at their minimum visited vertex.
    Pruning uses the residual-norm lower bound: any completion must cost
    at least the weighted norm of what remains.  Returns the best
    (length, circuit) pair or None; intended as a verification oracle.
    """
    bound = Fraction(bound)
    if not chain:
        raise ZeroChain("cannot search for the zero chain")

    dist = _all_pairs_distances(graph)
    best: list = [None, None]
    steps = [0]

    def lower_bound(current: int, root: int, residual: Chain) -> Fraction:
        need = l1_norm(graph, residual)
        back = dist[current][root]
        return need if need >= back else back

    def search(root: int, current: int, length: Fraction, residual: Chain, path: list[Dart]):
        steps[0] += 1
        if steps[0] > max_steps:
            raise BudgetExceeded("brute-force circuit search exceeded its step budget")
        if current == root and not residual and path:
            if path[0] != path[-1].inverse():  # tail check
                if best[0] is None or length < best[0]:
                    best[0] = length
                    best[1] = list(path)
        limit = bound if best[0] is None else min(bound, best[0])
        for dart in graph.darts_from(current):
            if graph.dart_end(dart) < root:
                continue  # canonical rotation: never below the start vertex
            if path and dart == path[-1].inverse():
                continue
            new_length = length + graph.weight(dart.edge)
            new_residual = residual - Chain.from_dart(dart)
            if new_length + lower_bound(graph.dart_end(dart), root, new_residual) > limit:
                continue
            path.append(dart)
            search(root, graph.dart_end(dart), new_length, new_residual, path)
            path.pop()

    # Circuits may detour through vertices outside the support (e.g. tree
    # junctions), so the canonical minimum visited vertex can be any vertex.
    for root in range(graph.vertex_count):
        search(root, root, Fraction(0), chain, [])
    if best[0] is None:
        return None
    return best[0], validate_circuit(graph, best[1])


def _all_pairs_distances(graph: Graph) -> list[list[Fraction]]:
    inf = None
    n = graph.vertex_count
    table: list[list] = []
    for s in range(n):
        dist: list = [inf] * n
        dist[s] = Fraction(0)
        heap = [(Fraction(0), s)]
        while heap:
            d, v = heapq.heappop(heap)
            if dist[v] is not None and d > dist[v]:
                continue
            for dart in graph.darts_from(v):
                w = graph.dart_end(dart)
                cand = d + graph.weight(dart.edge)
                if dist[w] is None or cand < dist[w]:
                    dist[w] = cand
                    heapq.heappush(heap, (cand, w))
        table.append([d if d is not None else Fraction(10**9) for d in dist])
    return table
