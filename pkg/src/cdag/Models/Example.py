"""The three-kernel example graph computing (a·x2 + b)·sin(exp(x1)), with a = 5, b = -2."""

from typing import Any, Optional, Sequence
import math

import numpy as np

from ..Exec.Kernels import Kernel, KernelRegistry
from ..Graph.Cdag import Cdag, compute_task, data_task, entry_task
from .Base import Model

REAL_SIZE = 8


def example_dag(a: float = 5.0, b: float = -2.0) -> Cdag:
    g = Cdag()
    x1 = g.add_node(entry_task(0, "Real", REAL_SIZE))
    x2 = g.add_node(entry_task(1, "Real", REAL_SIZE))
    t1 = g.add_node(compute_task("SinExp", 2))
    t2 = g.add_node(compute_task("Affine", 2, a=a, b=b))
    x3 = g.add_node(data_task("Real", REAL_SIZE))
    x4 = g.add_node(data_task("Real", REAL_SIZE))
    t3 = g.add_node(compute_task("Mul", 1))
    x5 = g.add_node(data_task("Real", REAL_SIZE))
    g.add_edge(x1, t1)
    g.add_edge(x2, t2)
    g.add_edge(t1, x3)
    g.add_edge(t2, x4)
    g.add_edge(x3, t3)
    g.add_edge(x4, t3)
    g.add_edge(t3, x5)
    return g


def example_kernels() -> KernelRegistry:
    return KernelRegistry(
        [
            Kernel("SinExp", lambda _, x: math.sin(math.exp(float(x))), 1),
            Kernel("Affine", lambda params, x: params["a"] * float(x) + params["b"], 1),
            Kernel("Mul", lambda _, x, y: x * y, 2),
        ],
        name="example",
    )


def example_value(x1: float, x2: float) -> float:
    return (5.0 * x2 - 2.0) * math.sin(math.exp(x1))


class ExampleModel(Model):
    tag = "example"

    def parse_process(self, text: str = "", n: Optional[int] = None, **options) -> dict:
        return {"a": float(options.get("a", 5.0)), "b": float(options.get("b", -2.0))}

    def generate(self, process: Any = None, reuse: bool = True) -> Cdag:
        process = process or self.parse_process()
        return example_dag(process["a"], process["b"])

    def kernels(self, configuration: Optional[dict] = None) -> KernelRegistry:
        return example_kernels()

    def sample_inputs(self, process: Any, seed: int | np.random.Generator = 0) -> list:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return [float(v) for v in rng.uniform(-1.0, 1.0, size=2)]

    def decode_input(self, process: Any, raw: Sequence[Any]) -> list:
        return [float(v) for v in raw]
