from dataclasses import dataclass
from typing import Iterator
import heapq
import logging

from ..errors import InvalidSchedule
from ..Graph.Cdag import Cdag, NodeId
from .Device import Machine


@dataclass(frozen=True)
class Schedule:
    """A topological order of all nodes, each placed on a device."""

    steps: tuple[tuple[NodeId, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[tuple[NodeId, int]]:
        return iter(self.steps)

    @property
    def order(self) -> list[NodeId]:
        return [node for node, _ in self.steps]

    @property
    def placement(self) -> dict[NodeId, int]:
        return dict(self.steps)

    def device_of(self, node: NodeId) -> int:
        return self.placement[node]

    @property
    def devices_used(self) -> list[int]:
        return sorted({device for _, device in self.steps})

    def to_json(self) -> dict:
        return {"steps": [[int(node), device] for node, device in self.steps]}


@dataclass(order=True)
class ReadyTask:
    """A compute node whose inputs are all placed, ordered by ready time then node id."""

    ready_time: float
    node: int


def check_schedule(g: Cdag, s: Schedule) -> None:
    """Raise InvalidSchedule unless `s` is a topological order of all nodes of `g`."""
    seen: set[NodeId] = set()
    for node, _ in s.steps:
        if node not in g:
            raise InvalidSchedule(f"Scheduled node {node} is not in the graph")
        if node in seen:
            raise InvalidSchedule(f"Node {node} scheduled twice")
        missing = [p for p in g.predecessors(node) if p not in seen]
        if missing:
            raise InvalidSchedule(f"Node {node} scheduled before its inputs {sorted(missing)}")
        seen.add(node)
    if len(seen) != len(g):
        raise InvalidSchedule(f"Schedule covers {len(seen)} of {len(g)} nodes")


def schedule(g: Cdag, m: Machine) -> Schedule:
    """Static schedule of `g` on `m`.

    On one device every node goes there in topological order. With several
    devices compute nodes are list-scheduled: the ready node with the earliest
    ready time (lowest id on ties) goes to the device where it finishes first.
    A data node follows its producer; entry nodes live on the first device.
    """
    if len(m) == 1:
        device = m.devices[0].id
        return Schedule(tuple((node, device) for node in g.topological_order()))

    # cycles surface here before list scheduling starts
    g.topological_order()
    first = m.devices[0].id
    placement: dict[NodeId, int] = {}
    finish: dict[NodeId, float] = {}
    device_free = {d.id: 0.0 for d in m.devices}
    waiting = {n: g.in_degree(n) for n in g.compute_nodes}
    steps: list[tuple[NodeId, int]] = []
    ready: list[ReadyTask] = []

    def place_data(node: NodeId, device: int, time: float) -> None:
        placement[node] = device
        finish[node] = time
        steps.append((node, device))
        for child in sorted(g.successors(node)):
            waiting[child] -= 1
            if waiting[child] == 0:
                args = g.predecessors(child)
                heapq.heappush(
                    ready, ReadyTask(max((finish[a] for a in args), default=0.0), child)
                )

    for node in g.compute_nodes:
        if waiting[node] == 0:
            heapq.heappush(ready, ReadyTask(0.0, node))
    for entry in g.entry_nodes:
        place_data(entry, first, 0.0)

    while ready:
        task = heapq.heappop(ready)
        node = task.node
        effort = g.task(node).effort
        best = None
        for device in m.devices:
            available = max(
                (
                    finish[a] + m.transfer_time(g.task(a).effort, placement[a], device.id)
                    for a in g.predecessors(node)
                ),
                default=0.0,
            )
            end = max(device_free[device.id], available) + device.compute_time(effort)
            if best is None or end < best[0]:
                best = (end, device.id)
        end, device = best
        device_free[device] = end
        placement[node] = device
        finish[node] = end
        steps.append((node, device))
        for child in sorted(g.successors(node)):
            place_data(child, device, end)

    logging.debug(
        f"List-scheduled {len(steps)} nodes on {len({d for _, d in steps})} of {len(m)} devices"
    )
    return Schedule(tuple(steps))


def estimate_runtime(g: Cdag, s: Schedule, m: Machine) -> float:
    """Critical-path runtime estimate in seconds.

    A compute node starts once its device is free and all of its inputs have
    arrived; inputs from another device arrive after size/transfer_rate. Data
    nodes on their producer's device cost nothing.
    """
    check_schedule(g, s)
    placement = s.placement
    device_free: dict[int, float] = {}
    finish: dict[NodeId, float] = {}
    for node, device in s.steps:
        task = g.task(node)
        if task.is_data:
            producer = g.producer(node)
            finish[node] = finish[producer] if producer is not None else 0.0
            continue
        available = max(
            (
                finish[a] + m.transfer_time(g.task(a).effort, placement[a], device)
                for a in g.predecessors(node)
            ),
            default=0.0,
        )
        start = max(device_free.get(device, 0.0), available)
        finish[node] = start + m.device(device).compute_time(task.effort)
        device_free[device] = finish[node]
    return max(finish.values(), default=0.0)
