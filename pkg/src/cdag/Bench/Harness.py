from dataclasses import dataclass, field
from statistics import median
from typing import Any, Callable, Optional
import logging
import math
import time

from ..configuration import DEFAULT_BENCH, DEFAULT_NUMERICS
from ..errors import BenchError
from ..Exec.Executor import bind, execute_batch, plan_evaluator
from ..Exec.Device import Machine
from ..Exec.Kernels import KernelRegistry
from ..Exec.Plan import lower
from ..Exec.Scheduler import schedule
from ..Metrics.Metrics import GraphMetrics
from ..Models.Base import Model
from ..Optimizer.Fixpoint import check_equivalence, reduce_to_fixpoint
from .BreakEven import BreakEvenInput, speedup_curve


@dataclass
class BenchReport:
    """Timings (seconds) and metrics of one process run through the whole pipeline.

    `t_e` and `t_e_opt` are per-sample medians of the unreduced and the reduced plan.
    """

    model: str
    process: str
    n: Optional[int]
    nodes_unreduced: int
    nodes: int
    before: GraphMetrics
    after: GraphMetrics
    t_gen: float
    t_opt: float
    t_lower: float
    t_e: float
    t_e_opt: float
    reductions: int
    samples: int
    workers: int
    curve: list[tuple[float, float]] = field(default_factory=list)

    @property
    def flops_speedup(self) -> float:
        if self.after.compute_effort == 0:
            return math.inf if self.before.compute_effort else 1.0
        return self.before.compute_effort / self.after.compute_effort

    @property
    def measured_speedup(self) -> float:
        return self.t_e / self.t_e_opt

    @property
    def break_even(self) -> BreakEvenInput:
        return BreakEvenInput(self.t_e, self.t_e_opt, self.t_opt)

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "process": self.process,
            "n": self.n,
            "nodes_unreduced": self.nodes_unreduced,
            "nodes": self.nodes,
            "before": self.before.to_json(),
            "after": self.after.to_json(),
            "t_gen": self.t_gen,
            "t_opt": self.t_opt,
            "t_lower": self.t_lower,
            "t_e": self.t_e,
            "t_e_opt": self.t_e_opt,
            "reductions": self.reductions,
            "samples": self.samples,
            "workers": self.workers,
            "flops_speedup": self.flops_speedup,
            "measured_speedup": self.measured_speedup,
            "curve": [[n, s] for n, s in self.curve],
        }


def timed(function: Callable[[], Any]) -> tuple[Any, float]:
    """Result of `function()` and the wall time it took."""
    start = time.perf_counter()
    result = function()
    return result, time.perf_counter() - start


def median_time(function: Callable[[], Any], repetitions: int = 31, warmup: int = 3) -> float:
    """Median wall time of `function()` over `repetitions` runs after `warmup` untimed ones."""
    for _ in range(warmup):
        function()
    return median(timed(function)[1] for _ in range(max(1, repetitions)))


def bench_pipeline(
    model: Model,
    process: Any,
    samples: int = DEFAULT_BENCH["samples"],
    seed: int = 0,
    repetitions: int = DEFAULT_BENCH["repetitions"],
    warmup: int = DEFAULT_BENCH["warmup"],
    workers: int = DEFAULT_BENCH["workers"],
    exponents: tuple[int, int] = tuple(DEFAULT_BENCH["n_exponents"]),
    kernels: Optional[KernelRegistry] = None,
    machine: Optional[Machine] = None,
    tol: float = DEFAULT_NUMERICS["comparison_tolerance"],
) -> BenchReport:
    """Generate, reduce, lower and time one process.

    The unreduced graph is the one built without subdiagram reuse; its fixpoint is
    the optimized graph. Sample times are per-sample medians over batch runs.

    Raises:
        BenchError: both graphs disagree on the sampled inputs beyond `tol`
    """
    kernels = kernels or model.kernels()
    machine = machine or Machine.single()

    unreduced, t_gen = timed(lambda: model.generate(process, reuse=False))
    (reduced, applied), t_opt = timed(lambda: reduce_to_fixpoint(unreduced, order_seed=seed))
    compiled_opt, t_lower = timed(lambda: bind(lower(reduced, schedule(reduced, machine)), kernels))
    compiled = bind(lower(unreduced, schedule(unreduced, machine)), kernels)

    records = model.sample_batch(process, samples, seed)
    execute_batch(compiled, kernels, records[:1]).raise_first()
    evaluator = plan_evaluator(kernels, machine)
    if not check_equivalence(unreduced, reduced, evaluator, records[:8], tol):
        raise BenchError(f"Reduced graph of {process} disagrees with the unreduced one")

    def run(plan) -> Callable[[], Any]:
        return lambda: execute_batch(plan, kernels, records, workers)

    t_e = median_time(run(compiled), repetitions, warmup) / samples
    t_e_opt = median_time(run(compiled_opt), repetitions, warmup) / samples
    logging.info(f"{process}: t_e={t_e:.3e}s t_e_opt={t_e_opt:.3e}s t_o={t_opt:.3e}s")

    low, high = exponents
    report = BenchReport(
        model=model.tag,
        process=str(process),
        n=getattr(process, "n", None),
        nodes_unreduced=len(unreduced),
        nodes=len(reduced),
        before=GraphMetrics.of(unreduced),
        after=GraphMetrics.of(reduced),
        t_gen=t_gen,
        t_opt=t_opt,
        t_lower=t_lower,
        t_e=t_e,
        t_e_opt=t_e_opt,
        reductions=applied,
        samples=samples,
        workers=workers,
    )
    report.curve = speedup_curve(report.break_even, range(low, high + 1))
    return report


def bench_sweep(model: Model, processes: list, **kwargs) -> list[BenchReport]:
    """One report per process, in order."""
    return [bench_pipeline(model, process, **kwargs) for process in processes]
