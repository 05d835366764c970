from itertools import permutations
from typing import Sequence

import numpy as np

from ..Kinematics import FourMomentum
from .Generator import AbcProcess
from .Kernels import DEFAULT_COUPLING, line_species, propagator_factor


def abc_oracle_amplitude(
    proc: AbcProcess,
    momenta: Sequence[FourMomentum],
    g: float = DEFAULT_COUPLING,
    guard: float = 1e-12,
) -> complex:
    """Sum over all B-on orderings of (-ig)^(n+1) times the internal propagators."""
    n = proc.n
    momenta = [np.asarray(p, dtype=float) for p in momenta]
    signed = {i + 1: momenta[i + 1] for i in range(n)}
    signed[n + 2] = -momenta[n + 2]
    total = 0j
    for order in permutations(signed):
        value = (-1j * g) ** (n + 1)
        q = momenta[0].copy()
        for absorbed, index in enumerate(order[:-1], start=1):
            q = q + signed[index]
            value *= propagator_factor(q, proc.masses[line_species(absorbed)], guard)
        total += value
    return total


def abc_oracle_squared(proc: AbcProcess, momenta: Sequence[FourMomentum], **kwargs) -> float:
    return abs(abc_oracle_amplitude(proc, momenta, **kwargs)) ** 2
