from collections import Counter

from ..Graph.Cdag import Cdag, NodeId
from .Scheduler import Schedule, check_schedule


def _compute_name(tag: str, counters: Counter) -> str:
    stem = tag.lower()
    counters[stem] += 1
    return f"{stem}_{counters[stem]}"


def emit_listing(g: Cdag, s: Schedule) -> str:
    """Readable pseudo-code of a scheduled graph, one assignment per node.

    Input assignments come first, then compute calls and their data hand-offs
    in schedule order (`identity` on one device, `copy` across devices), then
    the return statement. The text only depends on the graph and the schedule.
    """
    check_schedule(g, s)
    placement = s.placement
    names: dict[NodeId, str] = {}
    counters: Counter = Counter()
    taken: set[str] = set()

    def entry_key(node: NodeId) -> tuple:
        index = g.task(node).input_index
        return (index is None, index or 0, node)

    entries = sorted(g.entry_nodes, key=entry_key)
    lines: list[str] = []
    for node in entries:
        index = g.task(node).input_index
        name = f"in_{index}" if index is not None else f"in_node{node}"
        while name in taken:
            name += "_"
        names[node] = name
        taken.add(name)
        lines.append(f"{names[node]} = input[{index}]")

    for node, _ in s.steps:
        if node in names:
            continue
        task = g.task(node)
        if task.is_compute:
            names[node] = _compute_name(task.kernel_tag, counters)
            args = ", ".join(names[a] for a in g.arguments(node))
            call = f"{task.kernel_tag}({task.params})" if len(task.params) else f"{task.kernel_tag}()"
            lines.append(f"{names[node]} = compute({call}{', ' + args if args else ''})")
        else:
            producer = g.producer(node)
            name = f"{names[producer]}_p"
            while name in taken:
                name += "_"
            names[node] = name
            taken.add(name)
            crosses = any(placement[c] != placement[producer] for c in g.successors(node))
            lines.append(f"{names[node]} = {'copy' if crosses else 'identity'}({names[producer]})")

    lines.append(f"return {names[g.exit_node]}")
    return "\n".join(lines) + "\n"
