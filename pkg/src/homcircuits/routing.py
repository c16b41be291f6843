"""One-carrier routing of unit loads between adjacent vertices.

Every demand moves one item from a vertex to an adjacent one; the carrier
holds at most one item and must return to its depot.  Doubling the simple
graph turns the problem into finding a shortest circuit whose
abelianization dominates the lifted demand chain, which is solved exactly
as an integer minimum-cost circulation with lower bounds.  When the
minimizing chain has connected support the route is provably optimal;
otherwise it is feasible but flagged, since the connecting tree may add
avoidable length.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .chains import Chain, chain_leq, is_circulation, l1_norm, support_info
from .errors import (
    BudgetExceeded,
    Disconnected,
    EmptyTask,
    NonAdjacentDemand,
    NotFound,
    NotSimpleGraph,
    StartUnreachable,
    ZeroChain,
)
from .graph import Dart, Doubling, Graph, Walk, double, make_walk, rotate_closed_walk, walk_mu_length
from .shortest import shortest_circuit

__all__ = [
    "RoutePlan",
    "TaskMatrix",
    "brute_force_route",
    "lift_tasks",
    "min_circulation_above",
    "solve_routing",
]


@dataclass(frozen=True)
class TaskMatrix:
    """Sparse nonnegative demands on ordered pairs of adjacent vertices."""

    demands: tuple[tuple[tuple[int, int], int], ...]

    @classmethod
    def from_pairs(
        cls, graph: Graph, demands: Mapping[tuple[int, int], int] | Iterable[tuple[tuple[int, int], int]]
    ) -> "TaskMatrix":
        if not graph.is_simple():
            raise NotSimpleGraph("task matrices are defined on simple graphs")
        adjacent = set()
        for edge in graph.edges:
            adjacent.add((edge.u, edge.v))
            adjacent.add((edge.v, edge.u))
        items = demands.items() if isinstance(demands, Mapping) else demands
        merged: dict[tuple[int, int], int] = {}
        for (i, j), q in items:
            q = int(q)
            if q < 0:
                raise ValueError(f"demand for ({i}, {j}) is negative")
            if q == 0:
                continue
            if (i, j) not in adjacent:
                raise NonAdjacentDemand(f"vertices {i} and {j} are not adjacent")
            merged[(i, j)] = merged.get((i, j), 0) + q
        return cls(tuple(sorted(merged.items())))

    def total(self) -> int:
        return sum(q for _, q in self.demands)

    def get(self, i: int, j: int) -> int:
        for pair, q in self.demands:
            if pair == (i, j):
                return q
        return 0


def lift_tasks(doubling: Doubling, tasks: TaskMatrix) -> Chain:
    """Demand chain on the doubled graph.

    Demand q(i, j) lands on the twin arc oriented i -> j, so the lifted
    chain is nonnegative with respect to the doubled orientations even
    when both q(i, j) and q(j, i) are positive.
    """
    index = {}
    for e, edge in enumerate(doubling.base.edges):
        index[(edge.u, edge.v)] = 2 * e
        index[(edge.v, edge.u)] = 2 * e + 1
    coeffs: dict[int, int] = {}
    for (i, j), q in tasks.demands:
        if (i, j) not in index:
            raise NonAdjacentDemand(f"vertices {i} and {j} are not adjacent")
        coeffs[index[(i, j)]] = coeffs.get(index[(i, j)], 0) + q
    return Chain(coeffs)


def _min_cost_flow(node_count: int, arcs, supply) -> list[int] | None:
    """Successive-shortest-path min-cost flow; costs must be nonnegative ints.

    ``arcs`` is a list of (tail, head, capacity, cost); returns the flow per
    arc, or None when the supplies cannot be routed.
    """
    n = node_count + 2
    source, sink = node_count, node_count + 1
    heads: list[int] = []
    caps: list[int] = []
    costs: list[int] = []
    graph: list[list[int]] = [[] for _ in range(n)]

    def add(u: int, v: int, cap: int, cost: int) -> None:
        graph[u].append(len(heads))
        heads.append(v)
        caps.append(cap)
        costs.append(cost)
        graph[v].append(len(heads))
        heads.append(u)
        caps.append(0)
        costs.append(-cost)

    for tail, head, cap, cost in arcs:
        add(tail, head, cap, cost)
    need = 0
    for v, s in enumerate(supply):
        if s > 0:
            add(source, v, s, 0)
            need += s
        elif s < 0:
            add(v, sink, -s, 0)

    potential = [0] * n
    pushed = 0
    while pushed < need:
        dist: list = [None] * n
        parent_arc = [-1] * n
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, v = heapq.heappop(heap)
            if dist[v] is not None and d > dist[v]:
                continue
            for a in graph[v]:
                if caps[a] <= 0:
                    continue
                w = heads[a]
                nd = d + costs[a] + potential[v] - potential[w]
                if dist[w] is None or nd < dist[w]:
                    dist[w] = nd
                    parent_arc[w] = a
                    heapq.heappush(heap, (nd, w))
        if dist[sink] is None:
            return None
        for v in range(n):
            if dist[v] is not None:
                potential[v] += dist[v]
        bottleneck = need - pushed
        v = sink
        while v != source:
            a = parent_arc[v]
            bottleneck = min(bottleneck, caps[a])
            v = heads[a ^ 1]
        v = sink
        while v != source:
            a = parent_arc[v]
            caps[a] -= bottleneck
            caps[a ^ 1] += bottleneck
            v = heads[a ^ 1]
        pushed += bottleneck

    # Flow on original arc k is the residual on its reverse (arc 2k+1).
    return [caps[2 * k + 1] for k in range(len(arcs))]


def min_circulation_above(graph: Graph, chain: Chain, capacity: int | None = None) -> Chain:
    """Smallest-norm circulation dominating a nonnegative chain.

    Solved as an exact integer minimum-cost circulation: each demanded arc
    gets a lower bound equal to its coefficient, every arc gets unit cost
    equal to its edge weight, and opposite flows on one edge cancel before
    the result is read off.  Any finite capacity at least the total demand
    is safe, because a costed cycle covering no demand could be cancelled.
    Ties in norm break toward the lexicographically smallest coefficient
    vector, enforced by a dominated secondary cost.
    """
    for e, c in chain.items():
        if c < 0:
            raise ValueError("chain must be nonnegative with respect to the stored orientations")
        if not 0 <= e < graph.edge_count:
            raise ValueError(f"chain refers to unknown edge {e}")
    if not graph.is_connected():
        raise Disconnected("minimum circulation requires a connected graph")
    if not chain:
        return Chain()

    m = graph.edge_count
    total = chain.abs_total()
    cap = capacity if capacity is not None else total
    if cap < total:
        raise ValueError("capacity below the total demand is never feasible")

    # Integer primary costs: weights scaled by the common denominator.
    denom = 1
    for edge in graph.edges:
        denom = denom * edge.weight.denominator // _gcd(denom, edge.weight.denominator)
    base_costs = [int(edge.weight * denom) for edge in graph.edges]

    # Secondary lexicographic costs: edge 0 carries the heaviest digit.
    digit = 2 * (cap + 1) * (m + 2) + 3
    sec = [digit ** (m - 1 - e) for e in range(m)]
    primary_unit = digit ** (m + 1)

    arcs = []
    arc_edge: list[tuple[int, int]] = []  # (edge id, +1 forward / -1 reverse)
    supply = [0] * graph.vertex_count
    for e, edge in enumerate(graph.edges):
        lower = chain.coeff(e)
        cost_f = base_costs[e] * primary_unit + sec[e]
        arcs.append((edge.u, edge.v, cap - lower, cost_f))
        arc_edge.append((e, 1))
        if lower > 0:
            supply[edge.v] += lower
            supply[edge.u] -= lower
        else:
            cost_r = base_costs[e] * primary_unit - sec[e]
            arcs.append((edge.v, edge.u, cap, cost_r))
            arc_edge.append((e, -1))

    flows = _min_cost_flow(graph.vertex_count, arcs, supply)
    if flows is None:  # pragma: no cover - impossible on bridgeless doublings
        raise Disconnected("demands cannot be balanced on this graph")

    forward = [0] * m
    backward = [0] * m
    for (e, direction), f in zip(arc_edge, flows):
        if direction > 0:
            forward[e] += f
        else:
            backward[e] += f
    for e, c in chain.items():
        forward[e] += c  # restore the lower bound
    coeffs = {}
    for e in range(m):
        cancel = min(forward[e], backward[e])
        net = (forward[e] - cancel) - (backward[e] - cancel)
        if net:
            coeffs[e] = net
    return Chain(coeffs)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class RoutePlan:
    """Closed route from the depot covering every demand.

    ``beta`` is the minimizing chain on the doubled graph.  When its
    support is connected the plan is certifiably shortest; otherwise it is
    feasible but possibly longer than necessary.
    """

    walk: Walk
    mu_length: Fraction
    beta: Chain
    certified_optimal: bool
    coverage: tuple[tuple[tuple[int, int], int], ...]

    def covers(self, tasks: TaskMatrix) -> bool:
        table = dict(self.coverage)
        return all(table.get(pair, 0) >= q for pair, q in tasks.demands)


def _coverage(graph: Graph, walk: Walk) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = {}
    for d in walk.darts:
        pair = (graph.dart_start(d), graph.dart_end(d))
        table[pair] = table.get(pair, 0) + 1
    return table


def solve_routing(
    graph: Graph, tasks: TaskMatrix, depot: int, terminal_limit: int = 12
) -> RoutePlan:
    """Plan a shortest-known closed route from ``depot`` covering ``tasks``.

    Doubles the graph, lifts the demands, finds the minimum-norm chain
    dominating them (augmenting by one depot out-arc when the depot is not
    already on the demand support), builds that chain's minimal circuit,
    rotates it to the depot, and projects it back down.
    """
    if not graph.is_simple():
        raise NotSimpleGraph("routing is defined on simple graphs")
    if not graph.is_connected():
        raise Disconnected("routing requires a connected graph")
    if not 0 <= depot < graph.vertex_count:
        raise ValueError(f"depot {depot} out of range")
    if tasks.total() == 0:
        raise EmptyTask("no demands to route")

    dbl = double(graph)
    alpha = lift_tasks(dbl, tasks)
    cap = tasks.total() + 1

    support_vertices = support_info(dbl.graph, alpha).vertices
    if depot in support_vertices:
        beta = min_circulation_above(dbl.graph, alpha, capacity=cap)
    else:
        best = None
        for d in dbl.graph.darts_from(depot):
            if not d.forward:
                continue  # out-arcs of the depot under the twin orientations
            candidate = min_circulation_above(
                dbl.graph, alpha + Chain.from_dart(d), capacity=cap
            )
            key = (
                l1_norm(dbl.graph, candidate),
                tuple(candidate.coeff(e) for e in range(dbl.graph.edge_count)),
            )
            if best is None or key < best[0]:
                best = (key, candidate)
        beta = best[1]

    solution = shortest_circuit(dbl.graph, beta, terminal_limit=terminal_limit)
    lifted = solution.walk
    try:
        offset = lifted.vertices.index(depot)
    except ValueError:
        raise StartUnreachable(f"depot {depot} is not visited by the optimal circuit")
    lifted = rotate_closed_walk(lifted, offset)
    walk = dbl.project_walk(lifted)

    coverage = _coverage(graph, walk)
    for pair, q in tasks.demands:  # pragma: no branch - sanity check
        if coverage.get(pair, 0) < q:  # pragma: no cover - guaranteed by domination
            raise AssertionError("projected route misses a demand")
    return RoutePlan(
        walk=walk,
        mu_length=walk_mu_length(graph, walk),
        beta=beta,
        certified_optimal=support_info(dbl.graph, beta).connected,
        coverage=tuple(sorted(coverage.items())),
    )


def brute_force_route(
    graph: Graph,
    tasks: TaskMatrix,
    depot: int,
    bound: Fraction,
    max_states: int = 500_000,
) -> Walk:
    """Shortest feasible closed route by search over coverage states.

    Dijkstra over (vertex, clipped coverage vector) states; exact and
    exhaustive for small demand totals.  Raises NotFound when no feasible
    route fits within ``bound``.
    """
    if tasks.total() == 0:
        raise EmptyTask("no demands to route")
    if not 0 <= depot < graph.vertex_count:
        raise ValueError(f"depot {depot} out of range")
    bound = Fraction(bound)

    pairs = [pair for pair, _ in tasks.demands]
    quota = [q for _, q in tasks.demands]
    pair_index = {pair: k for k, pair in enumerate(pairs)}
    start = (depot, (0,) * len(pairs))
    goal_cov = tuple(quota)

    dist: dict = {start: Fraction(0)}
    parent: dict = {}
    heap = [(Fraction(0), 0, start)]
    counter = 1
    popped = 0
    while heap:
        d, _, state = heapq.heappop(heap)
        if state in dist and d > dist[state]:
            continue
        popped += 1
        if popped > max_states:
            raise BudgetExceeded("route search exceeded its state budget")
        v, cov = state
        if v == depot and cov == goal_cov:
            darts: list[Dart] = []
            cur = state
            while cur in parent:
                prev, dart = parent[cur]
                darts.append(dart)
                cur = prev
            darts.reverse()
            return make_walk(graph, darts)
        if d > bound:
            break
        for dart in graph.darts_from(v):
            w = graph.dart_end(dart)
            k = pair_index.get((v, w))
            new_cov = cov
            if k is not None and cov[k] < quota[k]:
                new_cov = cov[:k] + (cov[k] + 1,) + cov[k + 1 :]
            nd = d + graph.weight(dart.edge)
            if nd > bound:
                continue
            nxt = (w, new_cov)
            if nxt not in dist or nd < dist[nxt]:
                dist[nxt] = nd
                parent[nxt] = (state, dart)
                heapq.heappush(heap, (nd, counter, nxt))
                counter += 1
    raise NotFound(f"no feasible route of length at most {bound}")
