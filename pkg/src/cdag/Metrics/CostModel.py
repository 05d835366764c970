from dataclasses import dataclass
from typing import Callable, TYPE_CHECKING

from ..Graph.Cdag import Cdag, TaskDescriptor

if TYPE_CHECKING:
    from ..Exec.Device import Device


@dataclass(frozen=True)
class CostModel:
    """Pair of cost functions: t_D for data tasks and t_C for compute tasks, in seconds."""

    data_cost: Callable[[TaskDescriptor], float]
    compute_cost: Callable[[TaskDescriptor], float]
    name: str = "custom"

    def cost(self, task: TaskDescriptor) -> float:
        if task.is_data:
            return self.data_cost(task)
        return self.compute_cost(task)


def unit_cost_model() -> CostModel:
    """Every task costs 1."""
    return CostModel(lambda _: 1.0, lambda _: 1.0, name="unit")


def effort_cost_model() -> CostModel:
    """Every task costs its effort (FLOPs or bytes)."""
    return CostModel(lambda t: float(t.effort), lambda t: float(t.effort), name="effort")


def device_rate_model(device: "Device") -> CostModel:
    """Compute seconds c/flops_rate, data seconds d/mem_bandwidth."""
    return CostModel(
        lambda t: t.effort / device.mem_bandwidth,
        lambda t: t.effort / device.flops_rate,
        name=f"device:{device.id}",
    )


def estimate_graph_cost(g: Cdag, model: CostModel) -> float:
    """Simple-sum estimate: the cost of every node added up."""
    return sum(model.cost(g.task(n)) for n in g.nodes)
