from typing import Optional

import numpy as np

from ...Exec.Kernels import KernelRegistry
from ...Graph.Cdag import Cdag
from ..Base import Model
from .Generator import StrassenConfig, generate_strassen_dag, sample_strassen_inputs
from .Kernels import strassen_kernels


class StrassenModel(Model):
    tag = "strassen"

    def parse_process(
        self,
        text: str = "",
        n: Optional[int] = None,
        cutoff: Optional[int] = None,
        shared_operands: bool = False,
        **_,
    ) -> StrassenConfig:
        n = n or 8
        return StrassenConfig(n, cutoff or max(1, n // 2), shared_operands)

    def generate(self, process: StrassenConfig, reuse: bool = True) -> Cdag:
        return generate_strassen_dag(process)

    def kernels(self, configuration: Optional[dict] = None) -> KernelRegistry:
        return strassen_kernels()

    def sample_inputs(self, process: StrassenConfig, seed: int | np.random.Generator = 0) -> list:
        return sample_strassen_inputs(process, seed)
