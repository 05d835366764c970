from typing import Mapping, Optional, Sequence

import numpy as np

from ...configuration import DEFAULT_PHYSICS
from ...errors import InvalidProcess
from ...Exec.Kernels import KernelRegistry
from ...Graph.Cdag import Cdag
from ..Base import Model
from .Generator import ComptonProcess, generate_compton_dag, sample_compton_inputs
from .Kernels import qed_kernels


class QedModel(Model):
    tag = "qed"
    default_process = "e- Ngamma -> e- gamma"

    def __init__(
        self, scale: float = 1.0, electron_mass: float = DEFAULT_PHYSICS["electron_mass"]
    ):
        super().__init__()
        self.scale = scale
        self.electron_mass = electron_mass

    def configure(self, configuration: dict) -> None:
        physics = configuration["physics"]
        self.scale = float(physics.get("energy_scale", self.scale))
        self.electron_mass = float(physics.get("electron_mass", self.electron_mass))

    def parse_process(
        self,
        text: str = "",
        n: Optional[int] = None,
        spin_in: str = "up",
        spin_out: str = "up",
        polarizations: Sequence[str] | Mapping[int, str] = (),
        electron_mass: Optional[float] = None,
        **_,
    ) -> ComptonProcess:
        """Parse `text`.

        `polarizations` is either one label per photon (incoming ones, then the
        outgoing one) or a mapping from 1-based photon numbers to labels, the
        others staying `x`.

        Raises:
            InvalidProcess
        """
        by_number = isinstance(polarizations, Mapping)
        process = ComptonProcess.parse(
            text or self.default_process,
            n,
            spin_in=spin_in,
            spin_out=spin_out,
            polarizations=() if by_number else tuple(polarizations),
            electron_mass=self.electron_mass if electron_mass is None else electron_mass,
        )
        if by_number:
            for number, label in sorted(polarizations.items()):
                if not 1 <= number <= process.n + 1:
                    raise InvalidProcess(
                        f"Photon k{number} does not exist, the process has {process.n + 1}"
                    )
                process = process.with_polarization(number - 1, label)
        return process

    def generate(self, process: ComptonProcess, reuse: bool = True) -> Cdag:
        return generate_compton_dag(process, reuse)

    def kernels(self, configuration: Optional[dict] = None) -> KernelRegistry:
        if configuration is None:
            return qed_kernels()
        physics, numerics = configuration["physics"], configuration["numerics"]
        return qed_kernels(
            physics["alpha"],
            physics["electron_mass"],
            numerics["propagator_guard"],
            numerics["on_shell_tolerance"],
        )

    def sample_inputs(self, process: ComptonProcess, seed: int | np.random.Generator = 0) -> list:
        return sample_compton_inputs(process, seed, self.scale)
