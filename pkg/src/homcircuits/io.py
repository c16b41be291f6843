"""JSON serialization of graphs, chains, walks, and task lists.

All numbers are exact: integers stay integers and non-integer rationals
travel as "p/q" strings.  Floats are rejected on input.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .chains import Chain
from .errors import InvalidFormat
from .graph import Dart, Graph, Walk, build_graph, make_walk
from .routing import TaskMatrix


def format_rational(value: Fraction) -> int | str:
    value = Fraction(value)
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise InvalidFormat(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InvalidFormat("floats are not accepted; use an integer or 'p/q' string")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as err:
            raise InvalidFormat(f"cannot parse rational {value!r}") from err
    raise InvalidFormat(f"cannot parse rational {value!r}")


def graph_to_dict(graph: Graph) -> dict:
    return {
        "vertices": graph.vertex_count,
        "edges": [
            {"id": e, "u": edge.u, "v": edge.v, "weight": format_rational(edge.weight)}
            for e, edge in enumerate(graph.edges)
        ],
    }


def graph_from_dict(data: dict) -> Graph:
    try:
        vertex_count = int(data["vertices"])
        raw_edges = list(data["edges"])
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidFormat("graph document needs 'vertices' and 'edges'") from err
    rows = []
    for item in raw_edges:
        try:
            rows.append(
                (
                    int(item["id"]),
                    int(item["u"]),
                    int(item["v"]),
                    parse_rational(item.get("weight", 1)),
                )
            )
        except (KeyError, TypeError, ValueError) as err:
            raise InvalidFormat(f"bad edge entry {item!r}") from err
    rows.sort()
    if [r[0] for r in rows] != list(range(len(rows))):
        raise InvalidFormat("edge ids must be dense 0..m-1")
    return build_graph(vertex_count, [(u, v, w) for _, u, v, w in rows])


def chain_to_dict(chain: Chain) -> dict:
    return {"coeffs": {str(e): c for e, c in chain.items()}}


def chain_from_dict(data: dict) -> Chain:
    try:
        coeffs = data["coeffs"]
        return Chain({int(e): int(c) for e, c in coeffs.items()})
    except (KeyError, AttributeError, TypeError, ValueError) as err:
        raise InvalidFormat("chain document needs a 'coeffs' mapping") from err


def walk_to_list(walk: Walk) -> list[dict]:
    return [{"edge": d.edge, "forward": d.forward} for d in walk.darts]


def darts_from_list(data) -> list[Dart]:
    try:
        return [Dart(int(item["edge"]), bool(item["forward"])) for item in data]
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidFormat("walk document must be a list of {edge, forward}") from err


def walk_from_list(graph: Graph, data) -> Walk:
    return make_walk(graph, darts_from_list(data))


def tasks_to_dict(tasks: TaskMatrix) -> dict:
    return {
        "tasks": [
            {"from": i, "to": j, "count": q} for (i, j), q in tasks.demands
        ]
    }


def tasks_from_dict(graph: Graph, data: dict) -> TaskMatrix:
    try:
        rows = list(data["tasks"])
        demands = [((int(r["from"]), int(r["to"])), int(r["count"])) for r in rows]
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidFormat("task document needs a 'tasks' list of {from, to, count}") from err
    return TaskMatrix.from_pairs(graph, demands)


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as err:
        raise InvalidFormat(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise InvalidFormat(f"{path} is not valid JSON: {err}") from err


def dump_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2)
