from dataclasses import dataclass
import logging

import numpy as np

from ...errors import BadDimensions
from ...Graph.Cdag import Cdag, NodeId, compute_task, data_task, entry_task
from .Kernels import add_effort, assemble_effort, block_size, mult_effort


@dataclass(frozen=True)
class StrassenConfig:
    """C = A·B for n×n matrices, recursing down to cutoff×cutoff blocks.

    With `shared_operands` both factors come from the same input (C = A·A).
    """

    n: int
    cutoff: int
    shared_operands: bool = False

    def __post_init__(self):
        if self.cutoff < 1 or self.n < self.cutoff:
            raise BadDimensions(f"Need n >= cutoff >= 1, got n={self.n}, cutoff={self.cutoff}")
        ratio, remainder = divmod(self.n, self.cutoff)
        if remainder or ratio & (ratio - 1):
            raise BadDimensions(f"n/cutoff must be a power of 2, got {self.n}/{self.cutoff}")

    @property
    def levels(self) -> int:
        return (self.n // self.cutoff).bit_length() - 1

    @property
    def mult_base_count(self) -> int:
        return 7**self.levels


class StrassenBuilder:
    def __init__(self, cfg: StrassenConfig):
        self.cfg = cfg
        self.g = Cdag()

    def _call(self, tag: str, effort: int, args: list[NodeId], size: int, /, **params) -> NodeId:
        task = self.g.add_node(compute_task(tag, effort, **params))
        for arg in args:
            self.g.add_edge(arg, task, repeat=True)
        result = self.g.add_node(data_task("Matrix", block_size(size)))
        self.g.add_edge(task, result)
        return result

    def multiply(self, a: NodeId, b: NodeId, size: int) -> NodeId:
        if size == self.cfg.cutoff:
            return self._call("MultBase", mult_effort(size), [a, b], size)
        h = size // 2

        def quadrants(m: NodeId) -> list[NodeId]:
            return [
                self._call("Slice", 0, [m], h, row=r, col=c, size=h)
                for r in (0, 1)
                for c in (0, 1)
            ]

        a11, a12, a21, a22 = quadrants(a)
        b11, b12, b21, b22 = quadrants(b)

        def add(x, y):
            return self._call("Add", add_effort(h), [x, y], h)

        def sub(x, y):
            return self._call("Sub", add_effort(h), [x, y], h)

        m1 = self.multiply(add(a11, a22), add(b11, b22), h)
        m2 = self.multiply(add(a21, a22), b11, h)
        m3 = self.multiply(a11, sub(b12, b22), h)
        m4 = self.multiply(a22, sub(b21, b11), h)
        m5 = self.multiply(add(a11, a12), b22, h)
        m6 = self.multiply(sub(a21, a11), add(b11, b12), h)
        m7 = self.multiply(sub(a12, a22), add(b21, b22), h)
        return self._call(
            "StrassenAssemble", assemble_effort(h), [m1, m2, m3, m4, m5, m6, m7], size
        )

    def build(self) -> Cdag:
        n = self.cfg.n
        a = self.g.add_node(entry_task(0, "Matrix", block_size(n)))
        b = a if self.cfg.shared_operands else self.g.add_node(entry_task(1, "Matrix", block_size(n)))
        self.multiply(a, b, n)
        logging.info(
            f"Generated Strassen graph for n={n}, cutoff={self.cfg.cutoff}: {len(self.g)} nodes"
        )
        return self.g


def generate_strassen_dag(cfg: StrassenConfig) -> Cdag:
    return StrassenBuilder(cfg).build()


def sample_strassen_inputs(cfg: StrassenConfig, seed: int | np.random.Generator = 0) -> list[np.ndarray]:
    """Random normal matrices as an input record: [A, B], or [A] with shared operands."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    count = 1 if cfg.shared_operands else 2
    return [rng.standard_normal((cfg.n, cfg.n)) for _ in range(count)]
