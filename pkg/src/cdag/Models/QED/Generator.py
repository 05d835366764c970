from dataclasses import dataclass
from typing import Optional
import logging

import numpy as np

from ...errors import InvalidProcess
from ...Graph.Cdag import Cdag
from ...Metrics.Metrics import kernel_counts
from ..Kinematics import FourMomentum, sample_phase_space
from ..LineDiagrams import (
    ExternalParticle,
    LineProcess,
    compare_node_count,
    count_diagrams,
    generate_line_dag,
)
from ..Process import ParsedProcess, parse_process
from .Algebra import POLARIZATIONS, SPIN_STATES
from .Kernels import QED_TASKS

# Published graph sizes for e- n·gamma -> e- gamma with subdiagram reuse
REFERENCE_NODE_COUNTS = {1: 26, 2: 77, 3: 356, 4: 2183, 5: 15866}

ELECTRON_NAMES = ("e-", "e", "electron")
PHOTON_NAMES = ("gamma", "photon", "y")


@dataclass(frozen=True)
class ComptonProcess:
    """e- + n photons -> e- + photon with fixed spins and polarizations.

    `polarizations` lists the incoming photons in order, then the outgoing one;
    it defaults to `x` everywhere.
    """

    n_incoming_photons: int
    spin_in: str = "up"
    spin_out: str = "up"
    polarizations: tuple[str, ...] = ()
    electron_mass: float = 1.0

    def __post_init__(self):
        if self.n_incoming_photons < 1:
            raise InvalidProcess(f"Need at least one incoming photon, got {self.n_incoming_photons}")
        for spin in (self.spin_in, self.spin_out):
            if spin not in SPIN_STATES:
                raise InvalidProcess(f"Unknown spin {spin!r}, expected one of {list(SPIN_STATES)}")
        if not self.polarizations:
            object.__setattr__(self, "polarizations", ("x",) * (self.n_incoming_photons + 1))
        if len(self.polarizations) != self.n_incoming_photons + 1:
            raise InvalidProcess(
                f"Need {self.n_incoming_photons + 1} polarizations, got {len(self.polarizations)}"
            )
        for label in self.polarizations:
            if label not in POLARIZATIONS:
                raise InvalidProcess(f"Unknown polarization {label!r}")

    @property
    def n(self) -> int:
        return self.n_incoming_photons

    @property
    def n_external(self) -> int:
        return self.n + 3

    def __str__(self) -> str:
        return f"e- {self.n}gamma -> e- gamma"

    def with_polarization(self, photon: int, label: str) -> "ComptonProcess":
        """Same process with photon number `photon` (0-based, outgoing last) polarized as `label`."""
        labels = list(self.polarizations)
        labels[photon] = label
        return ComptonProcess(
            self.n, self.spin_in, self.spin_out, tuple(labels), self.electron_mass
        )

    def line_process(self) -> LineProcess:
        n, m = self.n, self.electron_mass
        photons = [
            ExternalParticle(i + 1, "photon", True, self.polarizations[i]) for i in range(n)
        ]
        photons.append(ExternalParticle(n + 2, "photon", False, self.polarizations[n]))
        return LineProcess(
            ExternalParticle(0, "electron", True, self.spin_in, m),
            ExternalParticle(n + 1, "electron", False, self.spin_out, m),
            tuple(photons),
            {"mass": m},
        )

    @classmethod
    def from_parsed(cls, parsed: ParsedProcess, **kwargs) -> "ComptonProcess":
        """Build from a parsed `e- n·gamma -> e- gamma` process string.

        Raises:
            InvalidProcess
        """

        def split(side):
            electrons = photons = 0
            for name, count in side:
                if name in ELECTRON_NAMES:
                    electrons += count
                elif name in PHOTON_NAMES:
                    photons += count
                else:
                    raise InvalidProcess(f"Unknown QED particle {name!r}")
            return electrons, photons

        e_in, n = split(parsed.incoming)
        e_out, ph_out = split(parsed.outgoing)
        if (e_in, e_out, ph_out) != (1, 1, 1) or n < 1:
            raise InvalidProcess(f"Only e- n·gamma -> e- gamma is supported, got {parsed}")
        return cls(n, **kwargs)

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None, **kwargs) -> "ComptonProcess":
        return cls.from_parsed(parse_process(text, n), **kwargs)


def generate_compton_dag(proc: ComptonProcess, reuse: bool = True) -> Cdag:
    """Graph computing |M|² of the process for its fixed spins and polarizations."""
    g = generate_line_dag(proc.line_process(), QED_TASKS, reuse)
    if reuse:
        compare_node_count(proc.n, len(g), REFERENCE_NODE_COUNTS, kernel_counts(g, kind=None))
    logging.debug(f"{proc}: {count_diagrams(g, QED_TASKS.tag('S2'))} diagrams")
    return g


def compton_input_record(
    incoming: list[FourMomentum], outgoing: list[FourMomentum]
) -> list[FourMomentum]:
    """Order momenta as the graph's input record: e- in, photons in, e- out, photon out."""
    return [*incoming, *outgoing]


def sample_compton_inputs(
    proc: ComptonProcess, seed: int | np.random.Generator = 0, scale: float = 1.0
) -> list[FourMomentum]:
    """One random phase-space point as an input record.

    Raises:
        BelowThreshold
    """
    m = proc.electron_mass
    incoming, outgoing = sample_phase_space([m] + [0.0] * proc.n, (m, 0.0), seed, scale)
    return compton_input_record(incoming, outgoing)
