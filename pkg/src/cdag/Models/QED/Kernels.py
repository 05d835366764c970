from typing import Sequence

import numpy as np

from ...configuration import DEFAULT_NUMERICS, DEFAULT_PHYSICS
from ...errors import IncompleteDiagram, KindMismatch
from ...Exec.Kernels import Kernel, KernelRegistry
from ...Graph.Cdag import Params
from ..Kinematics import FourMomentum, check_on_shell
from ..LineDiagrams import LineTasks
from ..State import LineSide, SubdiagramState, ValueKind, merge_absorbed
from .Algebra import (
    ALPHA,
    adjoint_spinor,
    coupling,
    dirac_adjoint,
    polarization,
    propagator,
    slash,
    spinor,
)

# Real multiply/adds per call, counted on the numpy expressions below
QED_EFFORTS = {"U": 48, "V": 184, "S1": 336, "S2": 424}

# Data roles: four-momentum input, 4 complex components, complex scalar, real result
QED_TASKS = LineTasks(
    "QED",
    QED_EFFORTS,
    {
        "input": ("FourMomentum", 32),
        "incoming": ("BiSpinor", 64),
        "outgoing": ("AdjointBiSpinor", 64),
        "boson": ("LorentzVector", 64),
        "diagram": ("ComplexScalar", 16),
        "result": ("Real", 8),
    },
)


def base_state(params: Params, p: FourMomentum, tolerance: float = 1e-8) -> SubdiagramState:
    """Base state of an external electron or photon.

    Raises:
        OffShell
    """
    p = np.asarray(p, dtype=float)
    mass = float(params.get("mass", 0.0))
    check_on_shell(p, mass, tolerance)
    incoming = params["direction"] == "in"
    absorbed = frozenset([int(params["index"])])
    momentum = p if incoming else -p
    if params["species"] == "electron":
        if incoming:
            value = spinor(p, params["state"], mass)
            return SubdiagramState(value, ValueKind.BISPINOR, momentum, absorbed, LineSide.INCOMING)
        value = adjoint_spinor(p, params["state"], mass)
        return SubdiagramState(value, ValueKind.ADJOINT, momentum, absorbed, LineSide.OUTGOING)
    if params["species"] == "photon":
        value = polarization(p, params["state"], outgoing=not incoming)
        return SubdiagramState(value, ValueKind.LORENTZ, momentum, absorbed, LineSide.BOSON)
    raise KindMismatch(f"Unknown QED species {params['species']!r}")


def vertex(photon: SubdiagramState, fermion: SubdiagramState, alpha: float = ALPHA) -> SubdiagramState:
    """Attach a photon to a fermion line with one factor -ie.

    Raises:
        KindMismatch, OverlappingAbsorbedSets
    """
    if photon.kind is not ValueKind.LORENTZ:
        raise KindMismatch(f"Vertex expects a photon first, got {photon.kind.value}")
    absorbed = merge_absorbed(photon, fermion)
    factor = -1j * coupling(alpha)
    eps = slash(photon.value)
    if fermion.kind is ValueKind.BISPINOR:
        value = factor * (eps @ fermion.value)
    elif fermion.kind is ValueKind.ADJOINT:
        value = factor * (fermion.value @ eps)
    else:
        raise KindMismatch(f"Vertex expects a fermion second, got {fermion.kind.value}")
    return SubdiagramState(
        value, fermion.kind, fermion.momentum + photon.momentum, absorbed, fermion.side
    )


def internal_momentum(state: SubdiagramState) -> np.ndarray:
    """Momentum flowing along the line into (spinor side) or out of (adjoint side) the state."""
    if state.kind is ValueKind.ADJOINT:
        return -state.momentum
    return state.momentum


def propagate(state: SubdiagramState, mass: float = 1.0, guard: float = 1e-12) -> SubdiagramState:
    """Apply the fermion propagator on the open end of a half-line.

    Raises:
        KindMismatch, NearSingularPropagator
    """
    s = propagator(internal_momentum(state), mass, guard)
    if state.kind is ValueKind.BISPINOR:
        value = s @ state.value
    elif state.kind is ValueKind.ADJOINT:
        value = state.value @ s
    else:
        raise KindMismatch(f"Only fermion states propagate, got {state.kind.value}")
    return SubdiagramState(value, state.kind, state.momentum, state.absorbed, state.side)


def join(
    left: SubdiagramState,
    right: SubdiagramState,
    n_external: int,
    mass: float = 1.0,
    guard: float = 1e-12,
) -> complex:
    """ψ̄ S(Q) ψ of two halves covering all external particles; either argument order.

    Raises:
        KindMismatch, IncompleteDiagram, NearSingularPropagator
    """
    kinds = {left.kind, right.kind}
    if kinds != {ValueKind.ADJOINT, ValueKind.BISPINOR}:
        raise KindMismatch(f"Join needs an adjoint and a spinor half, got {[k.value for k in kinds]}")
    adjoint, spinor_half = (left, right) if left.kind is ValueKind.ADJOINT else (right, left)
    absorbed = merge_absorbed(adjoint, spinor_half)
    if absorbed != frozenset(range(n_external)):
        raise IncompleteDiagram(f"Diagram covers {sorted(absorbed)} of {n_external} externals")
    s = propagator(internal_momentum(spinor_half), mass, guard)
    return complex(adjoint.value @ s @ spinor_half.value)


def sum_diagrams(values: Sequence[complex]) -> complex:
    if not values:
        raise ValueError("Nothing to sum")
    return complex(sum(values))


def squared_sum(values: Sequence[complex]) -> float:
    """|Σ values|², the exit value of a diagram sum."""
    return abs(sum_diagrams(values)) ** 2


def qed_kernels(
    alpha: float = DEFAULT_PHYSICS["alpha"],
    mass: float = DEFAULT_PHYSICS["electron_mass"],
    guard: float = DEFAULT_NUMERICS["propagator_guard"],
    tolerance: float = DEFAULT_NUMERICS["on_shell_tolerance"],
) -> KernelRegistry:
    """Kernel registry of the QED model with the given constants."""
    tag = QED_TASKS.tag
    return KernelRegistry(
        [
            Kernel(tag("U"), lambda params, p: base_state(params, p, tolerance), 1),
            Kernel(tag("V"), lambda _, photon, fermion: vertex(photon, fermion, alpha), 2),
            Kernel(
                tag("S1"),
                lambda params, state: propagate(state, params.get("mass", mass), guard),
                1,
            ),
            Kernel(
                tag("S2"),
                lambda params, a, b: join(
                    a, b, int(params["n_external"]), params.get("mass", mass), guard
                ),
                2,
            ),
            Kernel(tag("Sum"), lambda _, *values: squared_sum(values), min_arity=1),
        ],
        name="qed",
    )
