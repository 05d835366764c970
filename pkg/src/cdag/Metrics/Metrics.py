from collections import Counter
from dataclasses import dataclass
import math

from ..errors import NotAComputeNode
from ..Graph.Cdag import Cdag, NodeId, TaskKind


@dataclass(frozen=True)
class GraphMetrics:
    """Compute effort C (FLOPs), data transfer D (bytes) and compute intensity I = C/D."""

    compute_effort: int
    data_transfer: int
    compute_intensity: float

    @classmethod
    def of(cls, g: Cdag) -> "GraphMetrics":
        c = graph_compute_effort(g)
        d = graph_data_transfer(g)
        return cls(c, d, _intensity(c, d))

    def to_json(self) -> dict:
        intensity = self.compute_intensity
        return {
            "C": self.compute_effort,
            "D": self.data_transfer,
            "I": "inf" if math.isinf(intensity) else intensity,
        }


def _intensity(c: int, d: int) -> float:
    if d > 0:
        return c / d
    # 0/0 is defined as 0 so that the metrics are total functions
    return math.inf if c > 0 else 0.0


def graph_compute_effort(g: Cdag) -> int:
    """Sum of the efforts of all compute nodes."""
    return sum(g.task(n).effort for n in g.compute_nodes)


def graph_data_transfer(g: Cdag) -> int:
    """Sum over data nodes of size times number of successors."""
    return sum(g.task(n).effort * g.out_degree(n) for n in g.data_nodes)


def graph_compute_intensity(g: Cdag) -> float:
    return _intensity(graph_compute_effort(g), graph_data_transfer(g))


def graph_metrics(g: Cdag) -> GraphMetrics:
    return GraphMetrics.of(g)


def _require_compute(g: Cdag, node: NodeId) -> None:
    if g.kind(node) is not TaskKind.COMPUTE:
        raise NotAComputeNode(f"Node {node} is a data node")


def task_input_size(g: Cdag, node: NodeId) -> int:
    """Total size of the data a compute node reads."""
    _require_compute(g, node)
    return sum(g.task(p).effort for p in g.predecessors(node))


def task_compute_intensity(g: Cdag, node: NodeId) -> float:
    """Effort per input byte of a compute node, +inf when it reads nothing."""
    _require_compute(g, node)
    d_i = task_input_size(g, node)
    if d_i == 0:
        return math.inf
    return g.task(node).effort / d_i


def kernel_counts(g: Cdag, kind: TaskKind | None = TaskKind.COMPUTE) -> dict[str, int]:
    """Number of nodes per kernel tag, sorted by tag. `kind=None` counts all nodes."""
    counts = Counter(
        g.task(n).kernel_tag for n in g.nodes if kind is None or g.kind(n) is kind
    )
    return dict(sorted(counts.items()))


def task_type_ratios(g: Cdag) -> dict[str, float]:
    """Share of the node count taken by data nodes and by each compute kernel."""
    total = len(g)
    if total == 0:
        return {}
    ratios = {"data": len(g.data_nodes) / total}
    for tag, count in kernel_counts(g).items():
        ratios[tag] = count / total
    return ratios


def graph_stats(g: Cdag) -> dict:
    """Summary document printed by the `stats` command."""
    metrics = graph_metrics(g).to_json()
    return {
        "nodes": len(g),
        "compute_nodes": len(g.compute_nodes),
        "data_nodes": len(g.data_nodes),
        "C": metrics["C"],
        "D": metrics["D"],
        "I": metrics["I"],
        "per_kernel_counts": kernel_counts(g),
    }
