"""Dirac algebra in the Dirac representation, metric (+, -, -, -)."""

import math

import numpy as np

from ...errors import NearSingularPropagator
from ..Kinematics import FourMomentum, minkowski_square, spherical_angles

ALPHA = 1 / 137.035999084

IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
ZERO2 = np.zeros((2, 2), dtype=complex)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

GAMMA = np.array(
    [np.block([[IDENTITY2, ZERO2], [ZERO2, -IDENTITY2]])]
    + [np.block([[ZERO2, sigma], [-sigma, ZERO2]]) for sigma in PAULI]
)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

SPIN_STATES = {
    "up": np.array([1, 0], dtype=complex),
    "down": np.array([0, 1], dtype=complex),
}
POLARIZATIONS = ("x", "y", "k")


def coupling(alpha: float = ALPHA) -> float:
    """Elementary charge e = sqrt(4πα)."""
    return math.sqrt(4 * math.pi * alpha)


def slash(v: np.ndarray) -> np.ndarray:
    """γ^μ v_μ."""
    return GAMMA[0] * v[0] - GAMMA[1] * v[1] - GAMMA[2] * v[2] - GAMMA[3] * v[3]


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def spinor(p: FourMomentum, spin: str, mass: float = 1.0) -> np.ndarray:
    """u(p, s), normalized to ū u = 2m."""
    chi = SPIN_STATES[spin]
    norm = math.sqrt(float(p[0]) + mass)
    sigma_p = sum(PAULI[i] * p[i + 1] for i in range(3))
    return np.concatenate((norm * chi, sigma_p @ chi / norm))


def dirac_adjoint(psi: np.ndarray) -> np.ndarray:
    """ψ̄ = ψ† γ⁰."""
    return psi.conj() @ GAMMA[0]


def adjoint_spinor(p: FourMomentum, spin: str, mass: float = 1.0) -> np.ndarray:
    """ū(p, s)."""
    return dirac_adjoint(spinor(p, spin, mass))


def polarization(k: FourMomentum, label: str, outgoing: bool = False) -> np.ndarray:
    """Photon polarization vector.

    `x` and `y` are real linear polarizations transverse to k, built from the
    spherical angles of its spatial part; `k` is the pure-gauge vector k/k⁰.
    Outgoing photons take the complex conjugate.
    """
    if label == "k":
        eps = np.asarray(k, dtype=complex) / k[0]
    else:
        theta, phi = spherical_angles(k)
        if label == "x":
            eps = np.array(
                [0.0, math.cos(theta) * math.cos(phi), math.cos(theta) * math.sin(phi), -math.sin(theta)],
                dtype=complex,
            )
        elif label == "y":
            eps = np.array([0.0, -math.sin(phi), math.cos(phi), 0.0], dtype=complex)
        else:
            raise ValueError(f"Unknown polarization {label!r}, expected one of {POLARIZATIONS}")
    return eps.conj() if outgoing else eps


def propagator(q: FourMomentum, mass: float = 1.0, guard: float = 1e-12) -> np.ndarray:
    """Fermion propagator S(Q) = i(Q̸ + m)/(Q² - m²).

    Raises:
        NearSingularPropagator: |Q² - m²| <= guard
    """
    denominator = float(np.real(minkowski_square(q))) - mass * mass
    if abs(denominator) <= guard:
        raise NearSingularPropagator(f"Q² - m² = {denominator:.3e} is within {guard:g} of the pole")
    return 1j * (slash(q) + mass * IDENTITY4) / denominator
