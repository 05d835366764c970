import numpy as np
import pytest

from cdag.errors import BadDimensions, DimensionMismatch, OutOfBounds
from cdag.Exec import compile_graph
from cdag.Metrics import graph_metrics, kernel_counts
from cdag.Models.Strassen import (
    StrassenConfig,
    StrassenModel,
    generate_strassen_dag,
    mult_base,
    sample_strassen_inputs,
    slice_block,
    strassen_assemble,
    strassen_kernels,
)
from cdag.Optimizer import find_reductions, reduce_to_fixpoint
from cdag.utils import relative_error

KERNELS = strassen_kernels()


def assert_product(cfg: StrassenConfig, seed: int = 0):
    record = sample_strassen_inputs(cfg, seed)
    a = record[0]
    b = a if cfg.shared_operands else record[1]
    c = compile_graph(generate_strassen_dag(cfg), KERNELS)(record)
    assert np.linalg.norm(c - a @ b) <= 1e-9 * max(1.0, np.linalg.norm(a @ b))


@pytest.mark.parametrize(
    "n,cutoff", [(1, 1), (2, 1), (4, 1), (8, 2), (16, 4), (32, 8), (64, 16), (64, 64)]
)
def test_product_matches_numpy(n, cutoff):
    """The recursive graph computes A·B"""
    assert_product(StrassenConfig(n, cutoff))


@pytest.mark.parametrize("n,cutoff", [(4, 2), (8, 2)])
def test_squaring(n, cutoff):
    """With shared operands the graph computes A·A"""
    assert_product(StrassenConfig(n, cutoff, shared_operands=True), seed=7)


def test_one_level():
    """One recursion: 8 slices, 10 block sums, 7 products and one assembly"""
    g = generate_strassen_dag(StrassenConfig(4, 2))
    assert kernel_counts(g) == {
        "Add": 6,
        "MultBase": 7,
        "Slice": 8,
        "StrassenAssemble": 1,
        "Sub": 4,
    }
    assert g.validate().ok
    assert g.entry_signature() == (0, 1)


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_products_grow_by_seven(levels):
    cfg = StrassenConfig(2**levels, 1)
    assert cfg.levels == levels
    assert kernel_counts(generate_strassen_dag(cfg))["MultBase"] == 7**levels == cfg.mult_base_count


def test_no_recursion():
    """n == cutoff is a single multiplication"""
    g = generate_strassen_dag(StrassenConfig(4, 4))
    assert kernel_counts(g) == {"MultBase": 1}
    assert graph_metrics(g).compute_effort == 2 * 4**3


@pytest.mark.parametrize("n,cutoff", [(12, 4), (6, 4), (4, 8), (4, 0)])
def test_bad_dimensions(n, cutoff):
    with pytest.raises(BadDimensions):
        StrassenConfig(n, cutoff)


def test_distinct_operands_are_irreducible():
    """Every slice reads a different input or quadrant"""
    assert find_reductions(generate_strassen_dag(StrassenConfig(8, 2))) == []


def test_shared_operands_reduce():
    """Slicing the same matrix twice leaves duplicates the optimizer removes"""
    cfg = StrassenConfig(8, 2, shared_operands=True)
    g = generate_strassen_dag(cfg)
    assert find_reductions(g)
    reduced, applied = reduce_to_fixpoint(g)
    assert applied > 0
    assert len(reduced) < len(g)
    assert graph_metrics(reduced).compute_effort < graph_metrics(g).compute_effort
    record = sample_strassen_inputs(cfg, 1)
    before = compile_graph(g, KERNELS)(record)
    after = compile_graph(reduced, KERNELS)(record)
    assert relative_error(before, after) <= 1e-12


def test_kernel_errors():
    m = np.arange(16.0).reshape(4, 4)
    assert np.array_equal(slice_block(m, 1, 0, 2), [[8.0, 9.0], [12.0, 13.0]])
    with pytest.raises(OutOfBounds):
        slice_block(m, 1, 1, 3)
    with pytest.raises(DimensionMismatch):
        mult_base(np.ones((2, 3)), np.ones((3, 2)))
    with pytest.raises(DimensionMismatch):
        mult_base(np.ones((2, 2)), np.ones((3, 3)))
    with pytest.raises(DimensionMismatch):
        strassen_assemble(np.ones((2, 2)))


def test_model_defaults():
    """The Strassen model ignores the process text and defaults to one level of 8×8"""
    model = StrassenModel()
    cfg = model.parse_process("", None)
    assert (cfg.n, cfg.cutoff, cfg.shared_operands) == (8, 4, False)
    assert model.parse_process("", 16, cutoff=2).levels == 3
    assert model.owns(model.generate(cfg))
