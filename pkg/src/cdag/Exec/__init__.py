from .Device import Device, Machine
from .Kernels import Kernel, KernelRegistry
from .Scheduler import ReadyTask, Schedule, check_schedule, estimate_runtime, schedule
from .Plan import (
    Alias,
    BindInput,
    CallKernel,
    ExecutionPlan,
    Return,
    lower,
    plan_to_json,
    verify_ssa,
)
from .Executor import (
    BatchResult,
    CompiledPlan,
    bind,
    compile_graph,
    execute,
    execute_batch,
    plan_evaluator,
)
from .Listing import emit_listing
