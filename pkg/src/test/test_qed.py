import logging
import math

import numpy as np
import pytest

from cdag.errors import (
    IncompleteDiagram,
    InvalidProcess,
    KernelMismatch,
    KindMismatch,
    NearSingularPropagator,
    OffShell,
    OverlappingAbsorbedSets,
)
from cdag.Exec import Kernel, KernelRegistry, compile_graph
from cdag.Graph import Cdag, Params, compute_task, data_task, entry_task
from cdag.Metrics import kernel_counts
from cdag.Models.Kinematics import four_momentum, minkowski_dot, minkowski_square, on_shell
from cdag.Models.LineDiagrams import count_diagrams
from cdag.Models.QED import (
    GAMMA,
    METRIC,
    QED_TASKS,
    REFERENCE_NODE_COUNTS,
    ComptonProcess,
    QedModel,
    adjoint_spinor,
    anticommutator,
    base_state,
    generate_compton_dag,
    join,
    oracle_amplitude,
    oracle_squared,
    polarization,
    propagator,
    qed_kernels,
    sample_compton_inputs,
    slash,
    spinor,
    squared_sum,
    sum_diagrams,
    vertex,
)
from cdag.utils import relative_error

KERNELS = qed_kernels()
P = on_shell(1.0, [0.3, -0.2, 0.5])
K = four_momentum(0.7, 0.0, 0.0, 0.7)


def electron_params(index: int, incoming: bool, spin: str = "up") -> Params:
    return Params.of(
        index=index, species="electron", direction="in" if incoming else "out", state=spin, mass=1.0
    )


def photon_params(index: int, incoming: bool, label: str = "x") -> Params:
    return Params.of(
        index=index, species="photon", direction="in" if incoming else "out", state=label, mass=0.0
    )


# Dirac algebra


def test_gamma_anticommutators():
    """{γ^μ, γ^ν} = 2 g^μν"""
    for mu in range(4):
        for nu in range(4):
            expected = 2 * METRIC[mu, nu] * np.eye(4)
            assert np.allclose(anticommutator(GAMMA[mu], GAMMA[nu]), expected)


@pytest.mark.parametrize("spin", ["up", "down"])
def test_spinor_solves_dirac_equation(spin):
    """(p̸ - m) u = 0 and ū u = 2m"""
    u = spinor(P, spin, 1.0)
    assert np.allclose((slash(P) - np.eye(4)) @ u, 0.0)
    assert complex(adjoint_spinor(P, spin, 1.0) @ u) == pytest.approx(2.0)


@pytest.mark.parametrize("label", ["x", "y"])
def test_polarizations_are_transverse(label):
    """ε·k = 0 and ε·ε = -1 for the linear polarizations"""
    k = four_momentum(1.0, 0.6, 0.0, 0.8)
    eps = polarization(k, label)
    assert abs(minkowski_dot(eps, k)) < 1e-12
    assert minkowski_dot(eps, eps) == pytest.approx(-1.0)


def test_gauge_polarization():
    """The `k` polarization is the photon momentum over its energy"""
    assert np.allclose(polarization(K, "k"), K / K[0])
    with pytest.raises(ValueError):
        polarization(K, "z")


def test_propagator_pole_is_guarded():
    """An on-shell internal momentum raises NearSingularPropagator"""
    with pytest.raises(NearSingularPropagator):
        propagator(P, 1.0)
    s = propagator(P + K, 1.0)
    assert s.shape == (4, 4)


@pytest.mark.parametrize("seed", range(5))
def test_propagator_inverts_dirac_operator(seed):
    """(Q̸ - m) S(Q) = i for off-shell Q"""
    rng = np.random.default_rng(seed)
    q = four_momentum(*rng.uniform(-2.0, 2.0, size=4))
    for mass in (1.0, 0.5):
        product = (slash(q) - mass * np.eye(4)) @ propagator(q, mass)
        assert np.allclose(product, 1j * np.eye(4), atol=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_spin_sum_completeness(seed):
    """Σ_s u ū = p̸ + m"""
    rng = np.random.default_rng(seed)
    for mass in (1.0, 0.5):
        p = on_shell(mass, rng.uniform(-3.0, 3.0, size=3))
        total = sum(
            np.outer(spinor(p, s, mass), adjoint_spinor(p, s, mass)) for s in ("up", "down")
        )
        assert np.allclose(total, slash(p) + mass * np.eye(4), atol=1e-12)


# Kernels


def test_base_states():
    """Electrons give spinors or adjoint spinors, photons polarization vectors"""
    u = base_state(electron_params(0, True), P)
    assert np.allclose(u.value, spinor(P, "up"))
    assert u.absorbed == frozenset({0})
    ubar = base_state(electron_params(2, False), P)
    assert np.allclose(ubar.value, adjoint_spinor(P, "up"))
    assert np.allclose(ubar.momentum, -P)
    photon = base_state(photon_params(1, True), K)
    assert np.allclose(photon.momentum, K)


def test_off_shell_input():
    """An electron momentum off its mass shell is rejected"""
    with pytest.raises(OffShell):
        base_state(electron_params(0, True), P * 1.5)


def test_vertex_argument_order_and_overlap():
    """A vertex wants a photon then a fermion, with disjoint absorbed sets"""
    u = base_state(electron_params(0, True), P)
    photon = base_state(photon_params(1, True), K)
    psi = vertex(photon, u)
    assert psi.absorbed == frozenset({0, 1})
    assert np.allclose(psi.momentum, P + K)
    with pytest.raises(KindMismatch):
        vertex(u, photon)
    with pytest.raises(OverlappingAbsorbedSets):
        vertex(photon, psi)


def test_join_needs_all_externals():
    """A join covering only part of the process is incomplete"""
    u = base_state(electron_params(0, True), P)
    ubar = base_state(electron_params(2, False), P)
    with pytest.raises(IncompleteDiagram):
        join(ubar, vertex(base_state(photon_params(1, True), K), u), n_external=4)
    with pytest.raises(KindMismatch):
        join(u, u, n_external=1)


def test_sums():
    """The sum kernel returns |Σ|²"""
    assert sum_diagrams([1 + 1j, 2 - 1j]) == 3 + 0j
    assert squared_sum([1 + 1j, 2 - 1j]) == pytest.approx(9.0)
    with pytest.raises(ValueError):
        sum_diagrams([])


def test_kind_mismatch_becomes_kernel_mismatch():
    """Feeding a photon where a fermion belongs fails as KernelMismatch at run time"""
    u = base_state(electron_params(0, True), P)
    with pytest.raises(KindMismatch):
        KERNELS["QED_V"](Params(), u, u)
    g = Cdag()
    x = g.add_node(entry_task(0))
    f = g.add_node(compute_task("Bad"))
    g.add_edge(x, f)
    g.add_edge(f, g.add_node(data_task("Real")))
    bad = KernelRegistry([Kernel("Bad", lambda _, x: vertex(x, x), 1)])
    with pytest.raises(KernelMismatch):
        compile_graph(g, bad)([u])


# Process


@pytest.mark.parametrize(
    "text,n,expected",
    [
        ("e- gamma -> e- gamma", None, 1),
        ("e- 2gamma -> e- gamma", None, 2),
        ("e- gamma^3 -> e- gamma", None, 3),
        ("e- Ngamma -> e- gamma", 4, 4),
        ("e- photon^n -> e- photon", 2, 2),
    ],
)
def test_parse_compton(text, n, expected):
    """Process strings give the number of incoming photons"""
    assert ComptonProcess.parse(text, n).n == expected


@pytest.mark.parametrize(
    "text",
    ["e- gamma -> e- e-", "mu- gamma -> mu- gamma", "e- -> e- gamma", "e- gamma -> e- 2gamma"],
)
def test_unsupported_processes(text):
    """Anything but e- n·gamma -> e- gamma is rejected"""
    with pytest.raises(InvalidProcess):
        ComptonProcess.parse(text)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_incoming_photons=0),
        dict(n_incoming_photons=1, spin_in="sideways"),
        dict(n_incoming_photons=1, polarizations=("x",)),
        dict(n_incoming_photons=1, polarizations=("x", "z")),
    ],
)
def test_invalid_compton_process(kwargs):
    """Bad counts, spins and polarizations are rejected"""
    with pytest.raises(InvalidProcess):
        ComptonProcess(**kwargs)


def test_polarizations_by_photon_number():
    """A mapping sets photons by their 1-based number, the rest stay `x`"""
    model = QedModel()
    proc = model.parse_process("e- Ngamma -> e- gamma", 2, polarizations={3: "y", 1: "k"})
    assert proc.polarizations == ("k", "x", "y")
    with pytest.raises(InvalidProcess):
        model.parse_process("e- Ngamma -> e- gamma", 2, polarizations={4: "y"})


def test_default_polarizations():
    """Every photon defaults to `x`"""
    proc = ComptonProcess(2)
    assert proc.polarizations == ("x", "x", "x")
    assert proc.with_polarization(2, "k").polarizations == ("x", "x", "k")
    assert proc.n_external == 5


# Generator


def test_one_photon_graph():
    """26 nodes: 4 U, 4 V, 2 S2, 1 Sum and 15 data nodes"""
    g = generate_compton_dag(ComptonProcess(1))
    assert len(g) == 26
    assert kernel_counts(g) == {"QED_S2": 2, "QED_Sum": 1, "QED_U": 4, "QED_V": 4}
    assert len(g.data_nodes) == 15
    assert g.validate().ok
    assert g.entry_signature() == (0, 1, 2, 3)
    assert REFERENCE_NODE_COUNTS[1] == len(g)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_diagram_count(n):
    """(n+1)! diagrams are summed"""
    g = generate_compton_dag(ComptonProcess(n))
    assert count_diagrams(g, QED_TASKS.tag("S2")) == math.factorial(n + 1)
    assert g.validate().ok


def test_reference_size_deviation_is_logged(caplog):
    """Sizes that differ from the published table are reported with their composition"""
    with caplog.at_level(logging.WARNING):
        g = generate_compton_dag(ComptonProcess(2))
    if len(g) != REFERENCE_NODE_COUNTS[2]:
        assert "reference size" in caplog.text
        assert "QED_V" in caplog.text


def test_unreduced_graph_is_larger():
    """Without reuse every diagram builds its own subtrees"""
    proc = ComptonProcess(2)
    assert len(generate_compton_dag(proc, reuse=False)) > len(generate_compton_dag(proc))


# Phase space


@pytest.mark.parametrize("seed", range(5))
def test_sampled_inputs(seed):
    """Sampled momenta are on shell and conserve four-momentum"""
    proc = ComptonProcess(3)
    record = sample_compton_inputs(proc, seed)
    assert len(record) == proc.n_external
    incoming = np.sum(record[: proc.n + 1], axis=0)
    outgoing = record[proc.n + 1] + record[proc.n + 2]
    assert np.allclose(incoming, outgoing)
    assert minkowski_square(record[0]) == pytest.approx(1.0)
    assert minkowski_square(record[-1]) == pytest.approx(0.0, abs=1e-9)


# Oracle


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_graph_matches_oracle(n):
    """The executed graph equals the brute-force sum over photon orderings"""
    proc = ComptonProcess(n, spin_in="up", spin_out="down")
    compiled = compile_graph(generate_compton_dag(proc), KERNELS)
    for seed in range(100):
        record = sample_compton_inputs(proc, seed)
        assert relative_error(compiled(record), oracle_squared(proc, record)) < 1e-10


@pytest.mark.parametrize("n", [1, 2])
def test_electron_mass_reaches_the_propagators(n):
    """A lighter electron is used by every S1 and S2 node, whatever the registry default"""
    proc = ComptonProcess(n, electron_mass=0.5)
    g = generate_compton_dag(proc)
    joins = [v for v in g.compute_nodes if g.task(v).kernel_tag in ("QED_S1", "QED_S2")]
    assert joins and all(g.task(v).params["mass"] == 0.5 for v in joins)
    compiled = compile_graph(g, qed_kernels(mass=1.0))
    for seed in range(10):
        record = sample_compton_inputs(proc, seed)
        assert relative_error(compiled(record), oracle_squared(proc, record)) < 1e-10


@pytest.mark.parametrize("labels", [("x", "y"), ("y", "y"), ("y", "x")])
def test_polarized_graph_matches_oracle(labels):
    """Mixed polarizations agree with the oracle too"""
    proc = ComptonProcess(1, polarizations=labels)
    compiled = compile_graph(generate_compton_dag(proc), KERNELS)
    for seed in range(10):
        record = sample_compton_inputs(proc, seed)
        assert relative_error(compiled(record), oracle_squared(proc, record)) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gauge_invariance(n):
    """Replacing one polarization by k/k⁰ makes the amplitude vanish"""
    proc = ComptonProcess(n)
    for photon in range(n + 1):
        gauge = proc.with_polarization(photon, "k")
        for seed in range(20):
            record = sample_compton_inputs(proc, seed)
            reference = abs(oracle_amplitude(proc, record))
            assert abs(oracle_amplitude(gauge, record)) <= 1e-8 * reference


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gauge_invariance_of_the_graph(n):
    """The executed graph vanishes as well, for every photon"""
    proc = ComptonProcess(n)
    for photon in range(n + 1):
        g = generate_compton_dag(proc.with_polarization(photon, "k"))
        compiled = compile_graph(g, KERNELS)
        for seed in range(10):
            record = sample_compton_inputs(proc, seed)
            assert math.sqrt(compiled(record)) <= 1e-8 * abs(oracle_amplitude(proc, record))
