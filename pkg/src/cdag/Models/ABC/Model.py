from typing import Mapping, Optional

import numpy as np

from ...Exec.Kernels import KernelRegistry
from ...Graph.Cdag import Cdag
from ..Base import Model
from .Generator import AbcProcess, generate_ab_dag, sample_abc_inputs
from .Kernels import DEFAULT_MASSES, abc_kernels


class AbcModel(Model):
    tag = "abc"
    default_process = "A B^N -> A B"

    def __init__(self, scale: float = 1.0, masses: Optional[Mapping[str, float]] = None):
        super().__init__()
        self.scale = scale
        self.masses = dict(masses or DEFAULT_MASSES)

    def configure(self, configuration: dict) -> None:
        physics = configuration["physics"]
        self.scale = float(physics.get("energy_scale", self.scale))
        self.masses = dict(physics.get("abc", {}).get("masses", self.masses))

    def parse_process(
        self,
        text: str = "",
        n: Optional[int] = None,
        masses: Optional[Mapping[str, float]] = None,
        **_,
    ) -> AbcProcess:
        return AbcProcess.parse(
            text or self.default_process, n, masses=dict(masses or self.masses)
        )

    def generate(self, process: AbcProcess, reuse: bool = True) -> Cdag:
        return generate_ab_dag(process, reuse)

    def kernels(self, configuration: Optional[dict] = None) -> KernelRegistry:
        if configuration is None:
            return abc_kernels()
        abc, numerics = configuration["physics"]["abc"], configuration["numerics"]
        return abc_kernels(
            abc["masses"],
            abc["coupling"],
            numerics["propagator_guard"],
            numerics["on_shell_tolerance"],
        )

    def sample_inputs(self, process: AbcProcess, seed: int | np.random.Generator = 0) -> list:
        return sample_abc_inputs(process, seed, self.scale)
