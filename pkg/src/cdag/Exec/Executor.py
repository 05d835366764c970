from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence
import logging

from ..errors import CdagError, InputMismatch, KernelFailure, KernelMismatch, KindMismatch
from ..Graph.Cdag import Cdag
from .Device import Machine
from .Kernels import KernelRegistry
from .Plan import Alias, BindInput, CallKernel, ExecutionPlan, Return, lower
from .Scheduler import schedule

# opcodes of a bound plan
_BIND, _CALL, _ALIAS, _RETURN = range(4)


class CompiledPlan:
    """An execution plan with its kernels resolved; calling it runs the plan on one input record.

    Holds no state between calls, so one instance can serve several threads.
    """

    def __init__(self, plan: ExecutionPlan, kernels: KernelRegistry):
        self.plan = plan
        self.kernels = kernels
        self._tape: list[tuple] = []
        self._required_inputs = 0
        for instruction in plan.instructions:
            if isinstance(instruction, BindInput):
                self._tape.append((_BIND, instruction.input_index, instruction.output_slot))
                self._required_inputs = max(self._required_inputs, instruction.input_index + 1)
            elif isinstance(instruction, CallKernel):
                kernel = kernels[instruction.kernel_tag]
                kernel.check_arity(len(instruction.input_slots))
                self._tape.append(
                    (
                        _CALL,
                        kernel.function,
                        instruction.params,
                        instruction.input_slots,
                        instruction.output_slot,
                        instruction.kernel_tag,
                    )
                )
            elif isinstance(instruction, Alias):
                self._tape.append((_ALIAS, instruction.from_slot, instruction.to_slot))
            elif isinstance(instruction, Return):
                self._tape.append((_RETURN, instruction.slot))

    def __call__(self, record: Sequence[Any]) -> Any:
        if len(record) < self._required_inputs:
            raise InputMismatch(
                f"Plan binds {self._required_inputs} inputs, record has {len(record)}"
            )
        arena: list[Any] = [None] * self.plan.slot_count
        for op in self._tape:
            code = op[0]
            if code == _CALL:
                _, function, params, inputs, out, tag = op
                try:
                    arena[out] = function(params, *[arena[i] for i in inputs])
                except KindMismatch as e:
                    raise KernelMismatch(f"Kernel {tag}: {e}") from e
                except CdagError:
                    raise
                except Exception as e:
                    raise KernelFailure(f"Kernel {tag}: {type(e).__name__}: {e}") from e
            elif code == _ALIAS:
                arena[op[2]] = arena[op[1]]
            elif code == _BIND:
                arena[op[2]] = record[op[1]]
            else:
                return arena[op[1]]
        raise InputMismatch("Plan has no Return")


def bind(plan: ExecutionPlan, kernels: KernelRegistry) -> CompiledPlan:
    """Resolve every kernel of the plan once.

    Raises:
        UnknownKernel, KernelMismatch
    """
    return CompiledPlan(plan, kernels)


def execute(plan: ExecutionPlan | CompiledPlan, kernels: KernelRegistry, record: Sequence[Any]) -> Any:
    """Value of the exit node for one input record."""
    if not isinstance(plan, CompiledPlan):
        plan = bind(plan, kernels)
    return plan(record)


@dataclass
class BatchResult:
    """Per-sample results of a batch; failed samples hold None and their error is kept by index.

    Any exception a kernel raises fails only its own sample: errors outside the
    `CdagError` hierarchy arrive wrapped in `KernelFailure`.
    """

    values: list[Any]
    errors: dict[int, CdagError] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, index: int) -> Any:
        return self.values[index]

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_first(self) -> None:
        if self.errors:
            raise self.errors[min(self.errors)]


def execute_batch(
    plan: ExecutionPlan | CompiledPlan,
    kernels: KernelRegistry,
    records: Sequence[Sequence[Any]],
    workers: int = 1,
) -> BatchResult:
    """Run the plan on every record; samples are independent and may run on `workers` threads."""
    compiled = plan if isinstance(plan, CompiledPlan) else bind(plan, kernels)

    def run(index: int) -> tuple[int, Any, Optional[CdagError]]:
        try:
            return index, compiled(records[index]), None
        except CdagError as e:
            return index, None, e

    if workers <= 1:
        outcomes = [run(i) for i in range(len(records))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(len(records))))

    result = BatchResult([value for _, value, _ in outcomes])
    for index, _, error in outcomes:
        if error is not None:
            result.errors[index] = error
    if result.errors:
        logging.warning(f"{len(result.errors)} of {len(records)} samples failed")
    return result


def compile_graph(
    g: Cdag, kernels: KernelRegistry, machine: Optional[Machine] = None
) -> CompiledPlan:
    """Schedule, lower and bind a graph in one go."""
    machine = machine or Machine.single()
    return bind(lower(g, schedule(g, machine)), kernels)


def plan_evaluator(
    kernels: KernelRegistry, machine: Optional[Machine] = None
) -> Callable[[Cdag], CompiledPlan]:
    """Graph evaluator for `check_equivalence`."""
    return lambda g: compile_graph(g, kernels, machine)
