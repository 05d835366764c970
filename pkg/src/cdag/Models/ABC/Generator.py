from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ...errors import InvalidProcess
from ...Graph.Cdag import Cdag
from ..Kinematics import FourMomentum, sample_phase_space
from ..LineDiagrams import ExternalParticle, LineProcess, generate_line_dag
from ..Process import ParsedProcess, parse_process
from .Kernels import ABC_TASKS, DEFAULT_MASSES


@dataclass(frozen=True)
class AbcProcess:
    """A + n B-ons -> A + B-on. Only odd n gives valid tree-level diagrams."""

    n: int
    masses: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_MASSES), hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidProcess(f"Need at least one incoming B-on, got {self.n}")
        if self.n % 2 == 0:
            raise InvalidProcess(f"A B^{self.n} -> A B has no valid tree-level diagrams for even n")
        for species in ("A", "B", "C"):
            if self.masses.get(species, 0.0) <= 0.0:
                raise InvalidProcess(f"Mass of {species} must be positive")

    @property
    def n_external(self) -> int:
        return self.n + 3

    def __str__(self) -> str:
        return f"A B^{self.n} -> A B"

    def line_process(self) -> LineProcess:
        m_a, m_b = self.masses["A"], self.masses["B"]
        bosons = [ExternalParticle(i + 1, "B", True, mass=m_b) for i in range(self.n)]
        bosons.append(ExternalParticle(self.n + 2, "B", False, mass=m_b))
        return LineProcess(
            ExternalParticle(0, "A", True, mass=m_a),
            ExternalParticle(self.n + 1, "A", False, mass=m_a),
            tuple(bosons),
            {"masses": dict(self.masses)},
        )

    @classmethod
    def from_parsed(cls, parsed: ParsedProcess, **kwargs) -> "AbcProcess":
        """Build from a parsed `A B^n -> A B` process string.

        Raises:
            InvalidProcess
        """
        for name in parsed.names(True) + parsed.names(False):
            if name not in ("A", "B"):
                raise InvalidProcess(f"Unknown ABC particle {name!r}")
        shape = (
            parsed.count("A", True),
            parsed.count("A", False),
            parsed.count("B", False),
        )
        n = parsed.count("B", True)
        if shape != (1, 1, 1):
            raise InvalidProcess(f"Only A B^n -> A B is supported, got {parsed}")
        return cls(n, **kwargs)

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None, **kwargs) -> "AbcProcess":
        return cls.from_parsed(parse_process(text, n), **kwargs)


def generate_ab_dag(n: int | AbcProcess, reuse: bool = True) -> Cdag:
    """Graph computing |M|² of A B^n -> A B.

    Raises:
        InvalidProcess: n is even
    """
    proc = n if isinstance(n, AbcProcess) else AbcProcess(n)
    return generate_line_dag(proc.line_process(), ABC_TASKS, reuse)


def sample_abc_inputs(
    proc: AbcProcess, seed: int | np.random.Generator = 0, scale: float = 1.0
) -> list[FourMomentum]:
    """One random phase-space point: A in, B-ons in, A out, B out."""
    m_a, m_b = proc.masses["A"], proc.masses["B"]
    incoming, outgoing = sample_phase_space([m_a] + [m_b] * proc.n, (m_a, m_b), seed, scale)
    return [*incoming, *outgoing]
