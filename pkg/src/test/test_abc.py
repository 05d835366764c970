import math

import pytest

from cdag.errors import InvalidProcess, KindMismatch, NearSingularPropagator, OffShell
from cdag.Exec import compile_graph
from cdag.Graph import Params, canonical_hash
from cdag.Metrics import kernel_counts
from cdag.Models.ABC import (
    AbcModel,
    AbcProcess,
    abc_base_state,
    abc_kernels,
    abc_oracle_squared,
    abc_vertex,
    generate_ab_dag,
    line_species,
    sample_abc_inputs,
)
from cdag.Models.ABC.Kernels import DEFAULT_COUPLING, propagator_factor
from cdag.Models.Kinematics import four_momentum, on_shell
from cdag.Models.LineDiagrams import count_diagrams
from cdag.Models.QED import ComptonProcess, generate_compton_dag
from cdag.Optimizer import reduce_to_fixpoint
from cdag.utils import relative_error

KERNELS = abc_kernels()


@pytest.mark.parametrize("n", [2, 4, 0, -1])
def test_invalid_counts(n):
    """Even or non-positive B-on counts have no tree-level diagrams"""
    with pytest.raises(InvalidProcess):
        AbcProcess(n)
    with pytest.raises(InvalidProcess):
        generate_ab_dag(n)


def test_masses_must_be_positive():
    with pytest.raises(InvalidProcess):
        AbcProcess(1, masses={"A": 1.0, "B": 1.0, "C": 0.0})


@pytest.mark.parametrize(
    "text,n,expected",
    [("A B -> A B", None, 1), ("A B^3 -> A B", None, 3), ("A B^N -> A B", 5, 5), ("A 3B -> A B", None, 3)],
)
def test_parse(text, n, expected):
    assert AbcProcess.parse(text, n).n == expected


@pytest.mark.parametrize("text", ["A B -> A A", "A C -> A B", "A B -> A B B"])
def test_unsupported_processes(text):
    with pytest.raises(InvalidProcess):
        AbcProcess.parse(text)


def test_line_species_alternates():
    """The line is a C-on after an odd number of absorbed B-ons"""
    assert [line_species(k) for k in range(4)] == ["A", "C", "A", "C"]


def test_vertex_changes_species():
    """An A-on absorbing a B-on becomes a C-on"""
    p = on_shell(1.0, [0.1, 0.2, 0.3])
    k = on_shell(1.0, [-0.3, 0.0, 0.4])
    a = abc_base_state(Params.of(index=0, species="A", direction="in", mass=1.0), p)
    b = abc_base_state(Params.of(index=1, species="B", direction="in", mass=1.0), k)
    state = abc_vertex(b, a)
    assert state.species == "C"
    assert state.absorbed == frozenset({0, 1})
    assert state.value == pytest.approx(-1j * DEFAULT_COUPLING)


def test_propagator_pole():
    with pytest.raises(NearSingularPropagator):
        propagator_factor(four_momentum(1.0, 0.0, 0.0, 0.0), 1.0)
    assert propagator_factor(four_momentum(2.0, 0.0, 0.0, 0.0), 1.0) == pytest.approx(1j / 3)


def test_two_vertices_need_a_line():
    """Two B-ons cannot meet at a vertex"""
    k = on_shell(1.0, [0.0, 0.0, 0.4])
    b1 = abc_base_state(Params.of(index=1, species="B", direction="in", mass=1.0), k)
    b2 = abc_base_state(Params.of(index=2, species="B", direction="in", mass=1.0), k)
    with pytest.raises(KindMismatch):
        abc_vertex(b1, b2)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_graph_shape(n):
    """(n+1)! diagrams, each joining an incoming and an outgoing half-line"""
    g = generate_ab_dag(n)
    assert g.validate().ok
    assert count_diagrams(g, "ABC_S2") == math.factorial(n + 1)
    assert kernel_counts(g)["ABC_U"] == n + 3


@pytest.mark.parametrize("n", [1, 3])
def test_same_topology_as_compton(n):
    """With descriptors erased the graph is the Compton graph of the same n"""
    abc = generate_ab_dag(n)
    qed = generate_compton_dag(ComptonProcess(n))
    assert len(abc) == len(qed)
    assert canonical_hash(abc, erase_descriptors=True) == canonical_hash(qed, erase_descriptors=True)
    assert canonical_hash(abc) != canonical_hash(qed)


@pytest.mark.parametrize("n", [1, 3])
def test_graph_matches_oracle(n):
    """The executed graph equals the brute-force sum over B-on orderings"""
    proc = AbcProcess(n)
    compiled = compile_graph(generate_ab_dag(proc), KERNELS)
    for seed in range(20):
        record = sample_abc_inputs(proc, seed)
        assert relative_error(compiled(record), abc_oracle_squared(proc, record)) < 1e-10


@pytest.mark.parametrize("n", [1, 3])
def test_unreduced_graph_reduces_to_the_generated_one(n):
    """Reducing the graph built without reuse gives the reuse graph and the same values"""
    proc = AbcProcess(n)
    unreduced = generate_ab_dag(proc, reuse=False)
    reduced, applied = reduce_to_fixpoint(unreduced)
    assert applied > 0
    assert canonical_hash(reduced) == canonical_hash(generate_ab_dag(proc))
    before, after = compile_graph(unreduced, KERNELS), compile_graph(reduced, KERNELS)
    for seed in range(10):
        record = sample_abc_inputs(proc, seed)
        assert relative_error(before(record), after(record)) <= 1e-12



def test_process_masses_reach_the_propagators():
    """A heavier C changes the graph value the same way it changes the oracle"""
    proc = AbcProcess(3, masses={"A": 1.0, "B": 1.0, "C": 2.5})
    g = generate_ab_dag(proc)
    compiled = compile_graph(g, abc_kernels())
    default = compile_graph(generate_ab_dag(AbcProcess(3)), abc_kernels())
    record = sample_abc_inputs(proc, 4)
    assert relative_error(compiled(record), abc_oracle_squared(proc, record)) < 1e-10
    assert relative_error(compiled(record), default(record)) > 1e-6

def test_coupling_scales_amplitude():
    """|M|² goes with g^(2(n+1))"""
    proc = AbcProcess(1)
    record = sample_abc_inputs(proc, 3)
    g = generate_ab_dag(proc)
    weak = compile_graph(g, abc_kernels(g=1.0))(record)
    strong = compile_graph(g, abc_kernels(g=2.0))(record)
    assert strong == pytest.approx(weak * 2.0**4)


def test_model_reads_configuration():
    """Masses and coupling come from the physics section"""
    model = AbcModel()
    configuration = {
        "physics": {"abc": {"masses": {"A": 1.0, "B": 1.0, "C": 1.0}, "coupling": 2.0}},
        "numerics": {"propagator_guard": 1e-12, "on_shell_tolerance": 1e-8},
    }
    proc = model.parse_process("A B^N -> A B", 1)
    record = model.sample_inputs(proc, 0)
    g = model.generate(proc)
    configured = compile_graph(g, model.kernels(configuration))(record)
    assert configured == pytest.approx(abc_oracle_squared(proc, record, g=2.0))


def test_off_shell_record_fails():
    proc = AbcProcess(1)
    record = sample_abc_inputs(proc, 0)
    record[0] = record[0] * 2.0
    with pytest.raises(OffShell):
        compile_graph(generate_ab_dag(proc), KERNELS)(record)
