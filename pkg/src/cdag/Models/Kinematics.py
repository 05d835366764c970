"""Four-momenta as numpy arrays `[E, px, py, pz]` in the metric (+, -, -, -)."""

from typing import Sequence
import logging
import math

import numpy as np

from ..errors import BelowThreshold, OffShell
from ..utils import linear_scaling

FourMomentum = np.ndarray

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def four_momentum(e: float, px: float, py: float, pz: float) -> FourMomentum:
    return np.array([e, px, py, pz], dtype=float)


def minkowski_dot(a: np.ndarray, b: np.ndarray):
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]


def minkowski_square(p: np.ndarray):
    return minkowski_dot(p, p)


def on_shell(mass: float, p3: Sequence[float]) -> FourMomentum:
    """The four-momentum of a particle of `mass` with spatial momentum `p3`."""
    p3 = np.asarray(p3, dtype=float)
    return np.concatenate(([math.sqrt(mass * mass + float(p3 @ p3))], p3))


def check_on_shell(p: FourMomentum, mass: float, tolerance: float = 1e-8) -> None:
    """Raise OffShell when p² deviates from m² by more than `tolerance` (relative to E² above 1)."""
    deviation = abs(minkowski_square(p) - mass * mass)
    if deviation > tolerance * max(1.0, float(p[0]) ** 2):
        raise OffShell(f"p² = {minkowski_square(p):.12g}, expected m² = {mass * mass:.12g}")


def spherical_angles(p: FourMomentum) -> tuple[float, float]:
    """Polar and azimuthal angle of the spatial part; a vector on the z axis has azimuth 0."""
    rho = math.sqrt(float(p[1] ** 2 + p[2] ** 2 + p[3] ** 2))
    if rho == 0.0:
        return 0.0, 0.0
    theta = math.acos(max(-1.0, min(1.0, float(p[3]) / rho)))
    phi = math.atan2(float(p[2]), float(p[1]))
    return theta, phi


def boost(p: FourMomentum, beta: np.ndarray) -> FourMomentum:
    """Lorentz boost of `p` by velocity `beta` (a frame at rest moves with +beta)."""
    b2 = float(beta @ beta)
    if b2 == 0.0:
        return p.copy()
    if b2 >= 1.0:
        raise ValueError(f"Boost velocity {math.sqrt(b2)} is not below 1")
    gamma = 1.0 / math.sqrt(1.0 - b2)
    bp = float(beta @ p[1:])
    factor = (gamma - 1.0) * bp / b2 + gamma * p[0]
    return np.concatenate(([gamma * (p[0] + bp)], p[1:] + factor * beta))


def isotropic_direction(rng: np.random.Generator) -> np.ndarray:
    cos_theta = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    sin_theta = math.sqrt(1.0 - cos_theta * cos_theta)
    return np.array([sin_theta * math.cos(phi), sin_theta * math.sin(phi), cos_theta])


def random_incoming(mass: float, rng: np.random.Generator, scale: float = 1.0) -> FourMomentum:
    """Massless particles get an energy in [0.2, 1]·scale along a random direction,
    massive ones a normally distributed spatial momentum of width scale/2."""
    if mass == 0.0:
        energy = linear_scaling(rng.random(), 0.0, 1.0, 0.2 * scale, scale)
        return on_shell(0.0, energy * isotropic_direction(rng))
    return on_shell(mass, rng.normal(0.0, 0.5 * scale, size=3))


def two_body_decay(
    total: FourMomentum, m1: float, m2: float, rng: np.random.Generator
) -> tuple[FourMomentum, FourMomentum]:
    """Split `total` into two on-shell momenta, back to back in its rest frame.

    Raises:
        BelowThreshold: the invariant mass of `total` does not exceed m1 + m2
    """
    s = float(minkowski_square(total))
    if s <= 0.0 or math.sqrt(s) <= m1 + m2:
        raise BelowThreshold(f"Invariant mass {math.sqrt(max(s, 0.0)):.6g} below {m1 + m2:.6g}")
    big_m = math.sqrt(s)
    kallen = (s - (m1 + m2) ** 2) * (s - (m1 - m2) ** 2)
    momentum = math.sqrt(max(kallen, 0.0)) / (2.0 * big_m)
    direction = isotropic_direction(rng)
    p1 = on_shell(m1, momentum * direction)
    p2 = on_shell(m2, -momentum * direction)
    beta = total[1:] / total[0]
    return boost(p1, beta), boost(p2, beta)


def sample_phase_space(
    incoming_masses: Sequence[float],
    outgoing_masses: tuple[float, float],
    seed: int | np.random.Generator = 0,
    scale: float = 1.0,
) -> tuple[list[FourMomentum], list[FourMomentum]]:
    """Random incoming momenta and an outgoing pair conserving their total four-momentum.

    Raises:
        BelowThreshold: `scale` is not positive or the pair cannot be produced
    """
    if scale <= 0.0:
        raise BelowThreshold(f"Energy scale must be positive, got {scale}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    incoming = [random_incoming(m, rng, scale) for m in incoming_masses]
    total = np.sum(incoming, axis=0)
    outgoing = list(two_body_decay(total, *outgoing_masses, rng))
    logging.debug(f"Sampled {len(incoming)} -> 2 phase-space point at sqrt(s) = "
                  f"{math.sqrt(max(float(minkowski_square(total)), 0.0)):.6g}")
    return incoming, outgoing
