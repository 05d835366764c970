from abc import ABC, abstractmethod
from typing import Any, Optional, Sequence, TYPE_CHECKING

import numpy as np

from ..Exec.Kernels import KernelRegistry
from ..Graph.Cdag import Cdag

if TYPE_CHECKING:
    from ..environment import Environment


class Model(ABC):
    """A problem domain: how to read a process, build its graph, and evaluate its kernels."""

    tag: str = ""
    default_process: str = ""

    def __init__(self):
        self.env: Optional["Environment"] = None

    def __repr__(self) -> str:
        return f"<Model {self.tag}>"

    @abstractmethod
    def parse_process(self, text: str = "", n: Optional[int] = None, **options) -> Any:
        """Turn a process description into the model's process object."""

    @abstractmethod
    def generate(self, process: Any, reuse: bool = True) -> Cdag:
        """Build the graph of one process. `reuse=False` builds every diagram on its own."""

    @abstractmethod
    def kernels(self, configuration: Optional[dict] = None) -> KernelRegistry:
        """Kernel registry, with constants from `configuration` when given."""

    @abstractmethod
    def sample_inputs(self, process: Any, seed: int | np.random.Generator = 0) -> list:
        """One random input record for the process."""

    def configure(self, configuration: dict) -> None:
        """Pick up settings from the configuration; most models have none."""

    def sample_batch(self, process: Any, count: int, seed: int = 0) -> list[list]:
        rng = np.random.default_rng(seed)
        return [self.sample_inputs(process, rng) for _ in range(count)]

    def decode_input(self, process: Any, raw: Sequence[Any]) -> list:
        """Input record from its JSON form."""
        return [np.asarray(value, dtype=float) for value in raw]

    def owns(self, g: Cdag) -> bool:
        """Whether every kernel of `g` belongs to this model."""
        tags = set(self.kernels().tags)
        return all(g.task(n).kernel_tag in tags for n in g.compute_nodes)
