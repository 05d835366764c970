"""
Canonical graph digests.

Node labels are seeded with (kind, kernel tag, parameter digest) and refined with
Weisfeiler-Leman iterations over both edge directions. Edges carry the argument
positions they feed, so swapping the inputs of a non-commutative kernel changes
the digest. Isomorphic graphs with equal descriptors always hash equal; the
converse holds for every graph this package generates but not in general.
"""

from collections import defaultdict

import networkx as nx

from .Cdag import Cdag

DEFAULT_ITERATIONS = 8


def _node_label(g: Cdag, node, erase_descriptors: bool) -> str:
    task = g.task(node)
    if erase_descriptors:
        return task.kind.value
    return f"{task.kind.value}|{task.kernel_tag}|{task.params.digest()}"


def _labelled_graph(g: Cdag, erase_descriptors: bool) -> nx.DiGraph:
    labelled = nx.DiGraph()
    for node in g.nodes:
        labelled.add_node(node, label=_node_label(g, node, erase_descriptors))
    for node in g.nodes:
        positions = defaultdict(list)
        for position, arg in enumerate(g.arguments(node)):
            positions[arg].append(str(position))
        for arg, where in positions.items():
            slots = ",".join(where)
            labelled.add_edge(arg, node, role=f"out:{slots}")
            labelled.add_edge(node, arg, role=f"in:{slots}")
    return labelled


def canonical_hash(
    g: Cdag, iterations: int = DEFAULT_ITERATIONS, erase_descriptors: bool = False
) -> str:
    """Digest of `g` that does not depend on node ids.

    Args:
        g: the graph
        iterations: number of refinement rounds
        erase_descriptors: hash the topology only (task kinds, no kernels or parameters)
    """
    labelled = _labelled_graph(g, erase_descriptors)
    return nx.weisfeiler_lehman_graph_hash(
        labelled, node_attr="label", edge_attr="role", iterations=iterations, digest_size=16
    )
