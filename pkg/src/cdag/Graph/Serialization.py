import json
from typing import Any

from ..errors import GraphFormatError
from .Cdag import Cdag, NodeId, Params, TaskDescriptor, TaskKind


def graph_to_json(g: Cdag) -> dict[str, Any]:
    """JSON document of a graph.

    Edges are listed per consumer in argument order, so the ordered inputs of
    every kernel survive a round trip; a repeated argument repeats its edge.
    """
    nodes = []
    for node in g.nodes:
        task = g.task(node)
        nodes.append(
            {
                "id": int(node),
                "kind": task.kind.value,
                "kernel": task.kernel_tag,
                "params": task.params.to_json(),
                "effort": task.effort,
            }
        )
    edges = [[int(arg), int(node)] for node in g.nodes for arg in g.arguments(node)]
    return {"nodes": nodes, "edges": edges}


def graph_from_json(document: dict[str, Any]) -> Cdag:
    """Rebuild a graph from `graph_to_json` output, keeping node ids."""
    g = Cdag()
    try:
        for entry in document["nodes"]:
            task = TaskDescriptor(
                TaskKind(entry["kind"]),
                entry["kernel"],
                Params.from_json(entry.get("params")),
                int(entry.get("effort", 0)),
            )
            g._insert(NodeId(int(entry["id"])), task)
        for src, dst in document["edges"]:
            g.add_edge(NodeId(int(src)), NodeId(int(dst)), repeat=True)
    except (KeyError, TypeError, ValueError) as e:
        raise GraphFormatError(f"Malformed graph document: {e}") from e
    return g


def emit_graph_json(g: Cdag) -> str:
    """Byte-deterministic JSON text of a graph."""
    return json.dumps(graph_to_json(g), separators=(",", ":"), ensure_ascii=False)


def load_graph_json(text: str) -> Cdag:
    try:
        return graph_from_json(json.loads(text))
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"Invalid JSON: {e}") from e


def save_graph(g: Cdag, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(emit_graph_json(g))


def load_graph(path: str) -> Cdag:
    with open(path, "r", encoding="utf-8") as f:
        return load_graph_json(f.read())


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(g: Cdag) -> str:
    """Graphviz source: data nodes as blue boxes, compute nodes as red ellipses."""
    lines = ["digraph cdag {", "    rankdir=BT;"]
    for node in g.nodes:
        task = g.task(node)
        label = _dot_escape(str(task))
        if task.is_data:
            lines.append(f'    n{node} [label="{label}", shape=box, color=blue];')
        else:
            lines.append(f'    n{node} [label="{label}", shape=ellipse, color=red];')
    for src, dst in g.edges:
        lines.append(f"    n{src} -> n{dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
