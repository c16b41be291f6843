"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (reported as JSON with a
machine-readable ``error`` code), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import io
from .chains import abelianize, l1_norm
from .counting import count_circuits, enumerate_circuits
from .detect import detect_circuit
from .errors import DomainError
from .fixtures import (
    K4_DETECT_PRIORITY,
    K4_DETECT_START,
    K4_REFERENCE_DARTS,
    ISLANDS_STAR_TREE,
    islands_chain,
    islands_graph,
    k4_chain,
    k4_graph,
)
from .graph import validate_circuit, walk_mu_length
from .routing import solve_routing, brute_force_route
from .shortest import shortest_circuit


def _emit(data) -> None:
    sys.stdout.write(io.dump_json(data) + "\n")


def _cmd_detect(args) -> int:
    graph = io.graph_from_dict(io.load_json(args.graph))
    chain = io.chain_from_dict(io.load_json(args.chain))
    circuit = detect_circuit(graph, chain, start=args.start)
    _emit(
        {
            "length": circuit.length,
            "mu_length": io.format_rational(l1_norm(graph, chain)),
            "start": circuit.start,
            "darts": io.walk_to_list(circuit),
        }
    )
    return 0


def _cmd_count(args) -> int:
    graph = io.graph_from_dict(io.load_json(args.graph))
    chain = io.chain_from_dict(io.load_json(args.chain))
    result = count_circuits(graph, chain)
    payload = {"total": result.total}
    if args.factors:
        payload["factors"] = {
            "norm": result.norm,
            "tree_count": result.tree_count,
            "vertex_factorials": result.vertex_factorials,
            "edge_factorials": result.edge_factorials,
            "universal": result.universal,
        }
    _emit(payload)
    return 0


def _cmd_enumerate(args) -> int:
    graph = io.graph_from_dict(io.load_json(args.graph))
    chain = io.chain_from_dict(io.load_json(args.chain))
    circuits = enumerate_circuits(graph, chain, budget=args.budget)
    _emit({"count": len(circuits), "circuits": [io.walk_to_list(c) for c in circuits]})
    return 0


def _cmd_shortest(args) -> int:
    graph = io.graph_from_dict(io.load_json(args.graph))
    chain = io.chain_from_dict(io.load_json(args.chain))
    force_tree = None
    if args.force_tree:
        force_tree = [int(x) for x in args.force_tree.split(",") if x != ""]
    solution = shortest_circuit(graph, chain, force_tree=force_tree)
    _emit(
        {
            "mu_length": io.format_rational(solution.mu_length),
            "is_circuit": solution.is_circuit,
            "tree": list(solution.tree),
            "tree_weight": io.format_rational(solution.tree_weight),
            "norm": io.format_rational(solution.norm),
            "certificate": solution.certificate,
            "darts": io.walk_to_list(solution.walk),
            "diagnostic": solution.diagnostic,
        }
    )
    return 0


def _cmd_trp(args) -> int:
    graph = io.graph_from_dict(io.load_json(args.graph))
    tasks = io.tasks_from_dict(graph, io.load_json(args.tasks))
    plan = solve_routing(graph, tasks, args.start)
    payload = {
        "mu_length": io.format_rational(plan.mu_length),
        "certified_optimal": plan.certified_optimal,
        "start": plan.walk.start,
        "darts": io.walk_to_list(plan.walk),
        "coverage": [
            {"from": pair[0], "to": pair[1], "count": count}
            for pair, count in plan.coverage
        ],
    }
    if args.oracle:
        reference = brute_force_route(graph, tasks, args.start, plan.mu_length)
        payload["oracle_length"] = io.format_rational(walk_mu_length(graph, reference))
    _emit(payload)
    return 0


def _cmd_validate(args) -> int:
    graph = io.graph_from_dict(io.load_json(args.graph))
    darts = io.darts_from_list(io.load_json(args.walk))
    validate_circuit(graph, darts)
    sys.stdout.write("PASS\n")
    return 0


def _cmd_fixtures(args) -> int:
    checks: list[tuple[str, bool, str]] = []

    graph = k4_graph()
    chain = k4_chain()
    count = count_circuits(graph, chain)
    checks.append(("k4-count", count.total == 20, f"total={count.total}"))
    checks.append(
        (
            "k4-factors",
            count.norm == 10 and count.edge_factorials == 24 and count.tree_count == 12,
            f"norm={count.norm} tree_count={count.tree_count} edge_factorials={count.edge_factorials}",
        )
    )
    circuits = enumerate_circuits(graph, chain)
    checks.append(("k4-enumerate", len(circuits) == 20, f"count={len(circuits)}"))
    found = detect_circuit(graph, chain)
    checks.append(
        ("k4-detect", found.length == 10 and abelianize(found) == chain, f"length={found.length}")
    )
    reference = detect_circuit(
        graph, chain, start=K4_DETECT_START, edge_priority=K4_DETECT_PRIORITY
    )
    checks.append(
        (
            "k4-reference-sequence",
            list(reference.darts) == K4_REFERENCE_DARTS,
            "matches the documented tie-break run",
        )
    )

    graph = islands_graph()
    chain = islands_chain()
    solution = shortest_circuit(graph, chain)
    checks.append(
        (
            "islands-shortest",
            solution.mu_length == 16 and solution.certificate and solution.is_circuit,
            f"mu_length={solution.mu_length}",
        )
    )
    star = shortest_circuit(graph, chain, force_tree=ISLANDS_STAR_TREE)
    checks.append(
        (
            "islands-star",
            star.mu_length == 18 and len(star.walk.darts) == 18 and star.certificate,
            f"mu_length={star.mu_length}",
        )
    )

    rng = random.Random(args.seed)
    agreed = 0
    trials = 0
    from .chains import cycle_basis, is_circulation, support_info
    from .graph import build_graph

    while trials < 5:
        n = rng.randint(3, 5)
        edges = [(i, rng.randrange(i)) for i in range(1, n)]
        for _ in range(rng.randint(1, 3)):
            edges.append((rng.randrange(n), rng.randrange(n)))
        try:
            g = build_graph(n, edges)
        except DomainError:
            continue
        if not g.is_connected():
            continue
        basis = cycle_basis(g)
        if not basis:
            continue
        combo = basis[rng.randrange(len(basis))] * rng.choice([1, 2, -1])
        if not combo or not is_circulation(g, combo):
            continue
        if not support_info(g, combo).connected or combo.abs_total() > 10:
            continue
        trials += 1
        if count_circuits(g, combo).total == len(enumerate_circuits(g, combo)):
            agreed += 1
    checks.append(("random-count-vs-enumeration", agreed == trials, f"{agreed}/{trials}"))

    failures = 0
    for label, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        sys.stdout.write(f"{status} {label}: {detail}\n")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homcircuits",
        description="Exact circuit detection, counting, and routing on multigraphs.",
    )
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="find a minimum-length circuit for a circulation")
    p.add_argument("--graph", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--start", type=int, default=None)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("count", help="count minimum-length circuits exactly")
    p.add_argument("--graph", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--factors", action="store_true")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("enumerate", help="list all minimum-length circuits")
    p.add_argument("--graph", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--budget", type=int, default=16)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("shortest", help="shortest circuit for any nonzero circulation")
    p.add_argument("--graph", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--force-tree", default=None, help="comma-separated edge ids")
    p.set_defaults(func=_cmd_shortest)

    p = sub.add_parser("trp", help="one-carrier routing of adjacent-pair demands")
    p.add_argument("--graph", required=True)
    p.add_argument("--tasks", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=_cmd_trp)

    p = sub.add_parser("validate", help="check a dart sequence is a circuit")
    p.add_argument("--graph", required=True)
    p.add_argument("--walk", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fixtures", help="run the built-in instances against known values")
    p.set_defaults(func=_cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as err:
        sys.stdout.write(io.dump_json({"error": err.code, "message": str(err)}) + "\n")
        return 1
    except ValueError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
