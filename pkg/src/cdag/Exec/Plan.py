from dataclasses import dataclass, field
from typing import Iterator, Union
import logging

from ..errors import SSAViolation, UnboundEntry
from ..Graph.Cdag import Cdag, NodeId, Params
from .Scheduler import Schedule, check_schedule


@dataclass(frozen=True)
class BindInput:
    input_index: int
    output_slot: int


@dataclass(frozen=True)
class CallKernel:
    kernel_tag: str
    params: Params
    input_slots: tuple[int, ...]
    output_slot: int


@dataclass(frozen=True)
class Alias:
    """Hand a value on to a new slot. `device_copy` marks a transfer between devices."""

    from_slot: int
    to_slot: int
    device_copy: bool = False


@dataclass(frozen=True)
class Return:
    slot: int


Instruction = Union[BindInput, CallKernel, Alias, Return]


@dataclass(frozen=True)
class ExecutionPlan:
    """Flat single-assignment instruction tape; one slot per graph node."""

    instructions: tuple[Instruction, ...]
    slot_count: int
    node_slots: dict[NodeId, int] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)

    @property
    def input_indices(self) -> list[int]:
        return sorted(i.input_index for i in self.instructions if isinstance(i, BindInput))

    def counts(self) -> dict[str, int]:
        """Number of instructions of each type."""
        counts = {"BindInput": 0, "CallKernel": 0, "Alias": 0, "Return": 0}
        for instruction in self.instructions:
            counts[type(instruction).__name__] += 1
        return counts


def lower(g: Cdag, s: Schedule) -> ExecutionPlan:
    """Turn a scheduled graph into an execution plan.

    Entry nodes bind inputs, compute nodes call their kernel on the slots of
    their arguments in order, every other data node aliases its producer.

    Raises:
        UnboundEntry: an entry node has no input index
        InvalidSchedule: `s` does not fit `g`
    """
    check_schedule(g, s)
    placement = s.placement
    slots: dict[NodeId, int] = {}
    instructions: list[Instruction] = []
    for node, device in s.steps:
        task = g.task(node)
        slot = len(slots)
        slots[node] = slot
        if task.is_compute:
            inputs = tuple(slots[a] for a in g.arguments(node))
            instructions.append(CallKernel(task.kernel_tag, task.params, inputs, slot))
        elif g.in_degree(node) == 0:
            if task.input_index is None:
                raise UnboundEntry(f"Entry node {node} ({task}) has no input index")
            instructions.append(BindInput(int(task.input_index), slot))
        else:
            producer = g.producer(node)
            device_copy = any(placement[c] != placement[producer] for c in g.successors(node))
            instructions.append(Alias(slots[producer], slot, device_copy))
    instructions.append(Return(slots[g.exit_node]))
    plan = ExecutionPlan(tuple(instructions), len(slots), slots)
    logging.debug(f"Lowered {len(g)} nodes to {plan.counts()}")
    return plan


def _reads(instruction: Instruction) -> tuple[int, ...]:
    if isinstance(instruction, CallKernel):
        return instruction.input_slots
    if isinstance(instruction, Alias):
        return (instruction.from_slot,)
    if isinstance(instruction, Return):
        return (instruction.slot,)
    return ()


def _writes(instruction: Instruction) -> tuple[int, ...]:
    if isinstance(instruction, (CallKernel, BindInput)):
        return (instruction.output_slot,)
    if isinstance(instruction, Alias):
        return (instruction.to_slot,)
    return ()


def verify_ssa(plan: ExecutionPlan) -> bool:
    """Check that every slot is written once, before it is read, and that one Return ends the plan.

    Raises:
        SSAViolation
    """
    written: set[int] = set()
    returns = 0
    for position, instruction in enumerate(plan.instructions):
        for slot in _reads(instruction):
            if slot not in written:
                raise SSAViolation(f"Instruction {position} reads slot {slot} before it is written")
        for slot in _writes(instruction):
            if not 0 <= slot < plan.slot_count:
                raise SSAViolation(f"Instruction {position} writes slot {slot} out of range")
            if slot in written:
                raise SSAViolation(f"Instruction {position} writes slot {slot} a second time")
            written.add(slot)
        if isinstance(instruction, Return):
            returns += 1
    if returns != 1 or not isinstance(plan.instructions[-1], Return):
        raise SSAViolation(f"Plan must end in exactly one Return, found {returns}")
    return True


def plan_to_json(plan: ExecutionPlan) -> dict:
    """Debug dump of a plan."""
    instructions = []
    for instruction in plan.instructions:
        match instruction:
            case BindInput(index, out):
                instructions.append({"op": "BindInput", "input_index": index, "out": out})
            case CallKernel(tag, params, inputs, out):
                instructions.append(
                    {
                        "op": "CallKernel",
                        "kernel": tag,
                        "params": params.to_json(),
                        "in": list(inputs),
                        "out": out,
                    }
                )
            case Alias(src, out, device_copy):
                instructions.append(
                    {"op": "Alias", "in": src, "out": out, "device_copy": device_copy}
                )
            case Return(slot):
                instructions.append({"op": "Return", "in": slot})
    return {"slot_count": plan.slot_count, "instructions": instructions}
