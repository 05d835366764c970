from typing import Mapping

import numpy as np

from ...configuration import DEFAULT_NUMERICS, DEFAULT_PHYSICS
from ...errors import IncompleteDiagram, KindMismatch, NearSingularPropagator
from ...Exec.Kernels import Kernel, KernelRegistry
from ...Graph.Cdag import Params
from ..Kinematics import FourMomentum, check_on_shell, minkowski_square
from ..LineDiagrams import LineTasks
from ..State import LineSide, SubdiagramState, ValueKind, merge_absorbed
from ..QED.Kernels import squared_sum

ABC_EFFORTS = {"U": 1, "V": 12, "S1": 14, "S2": 20}

ABC_TASKS = LineTasks(
    "ABC",
    ABC_EFFORTS,
    {
        "input": ("FourMomentum", 32),
        "incoming": ("ComplexScalar", 16),
        "outgoing": ("ComplexScalar", 16),
        "boson": ("ComplexScalar", 16),
        "diagram": ("ComplexScalar", 16),
        "result": ("Real", 8),
    },
)

DEFAULT_MASSES = DEFAULT_PHYSICS["abc"]["masses"]
DEFAULT_COUPLING = DEFAULT_PHYSICS["abc"]["coupling"]


def line_species(absorbed_count: int) -> str:
    """The line is an A-on after absorbing an even number of B-ons, a C-on otherwise."""
    return "A" if absorbed_count % 2 == 0 else "C"


def abc_base_state(params: Params, p: FourMomentum, tolerance: float = 1e-8) -> SubdiagramState:
    """External factor 1 with the signed momentum of the particle.

    Raises:
        OffShell
    """
    p = np.asarray(p, dtype=float)
    check_on_shell(p, float(params.get("mass", 0.0)), tolerance)
    incoming = params["direction"] == "in"
    species = params["species"]
    if species == "B":
        side = LineSide.BOSON
    elif species == "A":
        side = LineSide.INCOMING if incoming else LineSide.OUTGOING
    else:
        raise KindMismatch(f"No external {species!r} particles in the ABC model")
    return SubdiagramState(
        1.0 + 0j,
        ValueKind.SCALAR,
        p if incoming else -p,
        frozenset([int(params["index"])]),
        side,
        species,
    )


def abc_vertex(s1: SubdiagramState, s2: SubdiagramState, g: float = DEFAULT_COUPLING) -> SubdiagramState:
    """(-ig)·v1·v2 of a B-on and a line state; the line changes species.

    Raises:
        KindMismatch, OverlappingAbsorbedSets
    """
    sides = {s1.side, s2.side}
    if LineSide.BOSON not in sides or len(sides) != 2:
        raise KindMismatch(f"Vertex joins a B-on and a line, got {[s.value for s in sides]}")
    boson, line = (s1, s2) if s1.side is LineSide.BOSON else (s2, s1)
    absorbed = merge_absorbed(boson, line)
    return SubdiagramState(
        -1j * g * s1.value * s2.value,
        ValueKind.SCALAR,
        s1.momentum + s2.momentum,
        absorbed,
        line.side,
        line_species(len(absorbed) - 1),
    )


def propagator_factor(q: np.ndarray, mass: float, guard: float = 1e-12) -> complex:
    """i/(Q² - m²).

    Raises:
        NearSingularPropagator
    """
    denominator = float(minkowski_square(q)) - mass * mass
    if abs(denominator) <= guard:
        raise NearSingularPropagator(f"Q² - m² = {denominator:.3e} is within {guard:g} of the pole")
    return 1j / denominator


def abc_propagator(
    state: SubdiagramState, masses: Mapping[str, float] = DEFAULT_MASSES, guard: float = 1e-12
) -> SubdiagramState:
    if not state.on_line:
        raise KindMismatch("Only line states propagate")
    factor = propagator_factor(state.momentum, masses[state.species], guard)
    return SubdiagramState(
        state.value * factor,
        state.kind,
        state.momentum,
        state.absorbed,
        state.side,
        state.species,
    )


def abc_join(
    left: SubdiagramState,
    right: SubdiagramState,
    n_external: int,
    masses: Mapping[str, float] = DEFAULT_MASSES,
    guard: float = 1e-12,
) -> complex:
    """Both halves of the line times the propagator of the internal line between them.

    Raises:
        KindMismatch, IncompleteDiagram, NearSingularPropagator
    """
    if {left.side, right.side} != {LineSide.INCOMING, LineSide.OUTGOING}:
        raise KindMismatch("Join needs an incoming and an outgoing half-line")
    incoming = left if left.side is LineSide.INCOMING else right
    absorbed = merge_absorbed(left, right)
    if absorbed != frozenset(range(n_external)):
        raise IncompleteDiagram(f"Diagram covers {sorted(absorbed)} of {n_external} externals")
    factor = propagator_factor(incoming.momentum, masses[incoming.species], guard)
    return complex(left.value * right.value * factor)


def abc_kernels(
    masses: Mapping[str, float] = DEFAULT_MASSES,
    g: float = DEFAULT_COUPLING,
    guard: float = DEFAULT_NUMERICS["propagator_guard"],
    tolerance: float = DEFAULT_NUMERICS["on_shell_tolerance"],
) -> KernelRegistry:
    tag = ABC_TASKS.tag
    masses = dict(masses)

    def line_masses(params) -> Mapping[str, float]:
        line = params.get("masses")
        return masses if line is None else {**masses, **line.to_json()}

    return KernelRegistry(
        [
            Kernel(tag("U"), lambda params, p: abc_base_state(params, p, tolerance), 1),
            Kernel(tag("V"), lambda _, a, b: abc_vertex(a, b, g), 2),
            Kernel(
                tag("S1"),
                lambda params, state: abc_propagator(state, line_masses(params), guard),
                1,
            ),
            Kernel(
                tag("S2"),
                lambda params, a, b: abc_join(
                    a, b, int(params["n_external"]), line_masses(params), guard
                ),
                2,
            ),
            Kernel(tag("Sum"), lambda _, *values: squared_sum(values), min_arity=1),
        ],
        name="abc",
    )
