import math

import pytest

from cdag.errors import NotAComputeNode
from cdag.Exec import Device
from cdag.Graph import Cdag
from cdag.Metrics import (
    GraphMetrics,
    device_rate_model,
    effort_cost_model,
    estimate_graph_cost,
    graph_compute_effort,
    graph_compute_intensity,
    graph_data_transfer,
    graph_stats,
    kernel_counts,
    task_compute_intensity,
    task_input_size,
    task_type_ratios,
    unit_cost_model,
)
from cdag.Models.Example import example_dag
from cdag.Models.QED import ComptonProcess, generate_compton_dag

EXAMPLE = example_dag()


def test_example_metrics():
    """C adds the three kernel efforts, D counts each 8-byte transport once per consumer"""
    assert graph_compute_effort(EXAMPLE) == 5
    assert graph_data_transfer(EXAMPLE) == 32
    assert graph_compute_intensity(EXAMPLE) == pytest.approx(5 / 32)


def test_task_metrics():
    """The multiplication reads two reals"""
    assert task_input_size(EXAMPLE, 6) == 16
    assert task_compute_intensity(EXAMPLE, 6) == pytest.approx(1 / 16)


def test_task_metrics_reject_data_nodes():
    """Per-task intensity is only defined for compute nodes"""
    with pytest.raises(NotAComputeNode):
        task_input_size(EXAMPLE, 0)


def test_empty_graph_metrics():
    """0/0 intensity is defined as 0"""
    m = GraphMetrics.of(Cdag())
    assert (m.compute_effort, m.data_transfer, m.compute_intensity) == (0, 0, 0.0)


def test_infinite_intensity_is_serialized_as_text():
    """A graph with effort but no transfer has I = inf"""
    m = GraphMetrics(10, 0, math.inf)
    assert m.to_json()["I"] == "inf"


def test_graph_stats_document():
    """The stats document lists counts, metrics and kernels"""
    stats = graph_stats(EXAMPLE)
    assert stats["nodes"] == 8
    assert stats["compute_nodes"] == 3
    assert stats["data_nodes"] == 5
    assert stats["C"] == 5
    assert stats["D"] == 32
    assert stats["per_kernel_counts"] == {"Affine": 1, "Mul": 1, "SinExp": 1}


def test_compton_composition():
    """The one-photon graph has 4 U, 4 V, 2 S2 and 1 Sum"""
    g = generate_compton_dag(ComptonProcess(1))
    assert kernel_counts(g) == {"QED_S2": 2, "QED_Sum": 1, "QED_U": 4, "QED_V": 4}
    assert len(g.data_nodes) == 15


def test_task_type_ratios_sum_to_one():
    """Data and kernel shares cover the whole graph"""
    ratios = task_type_ratios(generate_compton_dag(ComptonProcess(2)))
    assert sum(ratios.values()) == pytest.approx(1.0)
    assert task_type_ratios(Cdag()) == {}


def test_cost_models():
    """Simple-sum estimates under the unit, effort and device models"""
    assert estimate_graph_cost(EXAMPLE, unit_cost_model()) == 8
    assert estimate_graph_cost(EXAMPLE, effort_cost_model()) == 5 + 5 * 8
    device = Device(0, flops_rate=5.0, mem_bandwidth=8.0)
    assert estimate_graph_cost(EXAMPLE, device_rate_model(device)) == pytest.approx(1.0 + 5.0)
