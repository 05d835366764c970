from itertools import permutations
from typing import Sequence

import numpy as np

from ..Kinematics import FourMomentum
from .Algebra import ALPHA, adjoint_spinor, coupling, polarization, propagator, slash, spinor
from .Generator import ComptonProcess


def oracle_amplitude(
    proc: ComptonProcess,
    momenta: Sequence[FourMomentum],
    alpha: float = ALPHA,
    guard: float = 1e-12,
) -> complex:
    """Sum of all photon orderings along the electron line, by direct matrix products.

    `momenta` is an input record: e- in, incoming photons, e- out, photon out.

    Raises:
        NearSingularPropagator
    """
    n, m = proc.n, proc.electron_mass
    momenta = [np.asarray(p, dtype=float) for p in momenta]
    p_in, p_out = momenta[0], momenta[n + 1]
    # signed photon momenta and polarization slashes, keyed by input index
    photons = {
        i + 1: (momenta[i + 1], slash(polarization(momenta[i + 1], proc.polarizations[i])))
        for i in range(n)
    }
    k_out = momenta[n + 2]
    photons[n + 2] = (-k_out, slash(polarization(k_out, proc.polarizations[n], outgoing=True)))

    u = spinor(p_in, proc.spin_in, m)
    u_bar = adjoint_spinor(p_out, proc.spin_out, m)
    factor = (-1j * coupling(alpha)) ** (n + 1)

    total = 0j
    for order in permutations(photons):
        psi = u
        q = p_in.copy()
        for position, index in enumerate(order):
            k, eps_slash = photons[index]
            psi = eps_slash @ psi
            q = q + k
            if position < len(order) - 1:
                psi = propagator(q, m, guard) @ psi
        total += complex(u_bar @ psi)
    return factor * total


def oracle_squared(proc: ComptonProcess, momenta: Sequence[FourMomentum], **kwargs) -> float:
    """|M|² from the brute-force sum."""
    return abs(oracle_amplitude(proc, momenta, **kwargs)) ** 2
