from dataclasses import dataclass, field
from enum import Enum
from hashlib import blake2b
from typing import Any, Iterator, NewType, Optional, TYPE_CHECKING
import json
import logging

import networkx as nx

from ..errors import (
    CycleDetected,
    DuplicateEdge,
    KindViolation,
    MultipleProducers,
    NotSingleExit,
    UnknownNode,
)

if TYPE_CHECKING:
    from .Validation import ValidationReport

NodeId = NewType("NodeId", int)


class TaskKind(Enum):
    """The two task kinds of a computable DAG. Every task is exactly one of them."""

    DATA = "data"
    COMPUTE = "compute"

    @property
    def opposite(self) -> "TaskKind":
        return TaskKind.COMPUTE if self is TaskKind.DATA else TaskKind.DATA


def _freeze(value: Any) -> Any:
    """Turn JSON-like values into hashable ones (lists become tuples, dicts become Params)."""
    if isinstance(value, Params):
        return value
    if isinstance(value, dict):
        return Params.of(**value)
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, Enum):
        return value.value
    return value


def _thaw(value: Any) -> Any:
    if isinstance(value, Params):
        return value.to_json()
    if isinstance(value, tuple):
        return [_thaw(v) for v in value]
    return value


@dataclass(frozen=True)
class Params:
    """Immutable, hashable parameter record of a task.

    Keys are kept sorted so that two records built from the same keyword
    arguments compare and hash equal regardless of argument order.
    """

    items: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def of(cls, **kwargs) -> "Params":
        return cls(tuple(sorted((key, _freeze(value)) for key, value in kwargs.items())))

    @classmethod
    def from_json(cls, data: Optional[dict]) -> "Params":
        return cls.of(**(data or {}))

    def to_json(self) -> dict:
        return {key: _thaw(value) for key, value in self.items}

    def __getitem__(self, key: str) -> Any:
        for name, value in self.items:
            if name == key:
                return value
        raise KeyError(key)

    def __contains__(self, key: str) -> bool:
        return any(name == key for name, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def get(self, key: str, default: Any = None) -> Any:
        try:
            return self[key]
        except KeyError:
            return default

    def replace(self, **kwargs) -> "Params":
        merged = dict(self.items)
        merged.update(kwargs)
        return Params.of(**merged)

    def digest(self) -> str:
        """Stable digest of the record, independent of the Python hash seed."""
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return blake2b(text.encode("utf-8"), digest_size=8).hexdigest()

    def __str__(self) -> str:
        return ", ".join(f"{key}={value}" for key, value in self.items)


@dataclass(frozen=True)
class TaskDescriptor:
    """What a node computes (compute task) or carries (data task).

    `effort` is the compute effort in FLOPs for compute tasks and the data size
    in bytes for data tasks.
    """

    kind: TaskKind
    kernel_tag: str
    params: Params = field(default_factory=Params)
    effort: int = 0

    def __post_init__(self):
        if self.effort < 0:
            raise ValueError(f"Task effort must be non-negative, got {self.effort}")

    @property
    def is_data(self) -> bool:
        return self.kind is TaskKind.DATA

    @property
    def is_compute(self) -> bool:
        return self.kind is TaskKind.COMPUTE

    @property
    def input_index(self) -> Optional[int]:
        """Position in the runtime input record, for entry data nodes."""
        return self.params.get("input_index")

    def __str__(self) -> str:
        params = f"({self.params})" if len(self.params) else ""
        return f"{self.kernel_tag}{params}"


def data_task(kernel_tag: str, effort: int = 0, **params) -> TaskDescriptor:
    """Build a data task descriptor."""
    return TaskDescriptor(TaskKind.DATA, kernel_tag, Params.of(**params), effort)


def compute_task(kernel_tag: str, effort: int = 0, **params) -> TaskDescriptor:
    """Build a compute task descriptor."""
    return TaskDescriptor(TaskKind.COMPUTE, kernel_tag, Params.of(**params), effort)


def entry_task(input_index: int, kernel_tag: str = "Input", effort: int = 0, **params) -> TaskDescriptor:
    """Build the descriptor of an entry data node bound to `input_index`."""
    return data_task(kernel_tag, effort, input_index=input_index, **params)


ID_DATA = data_task("IdentityData")
ID_COMPUTE = compute_task("IdentityCompute")


class Cdag:
    """
    A computable DAG: a bipartite directed acyclic graph of compute nodes (kernels)
    and data nodes (transports of their results), with a single data exit node.

    The adjacency lives in a `networkx.DiGraph`. Compute nodes additionally keep an
    ordered argument list, since kernels are applied to their inputs in a fixed
    order; an argument may repeat once node reductions have merged two inputs.

    Mutation is single-writer. Cycles are only detected by `validate`, since
    generators add edges in construction order.
    """

    def __init__(self):
        self._graph = nx.DiGraph()
        self._args: dict[NodeId, list[NodeId]] = {}
        self._next_id = 0

    def __repr__(self) -> str:
        return f"<Cdag {len(self)} nodes, {self._graph.number_of_edges()} edges>"

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __contains__(self, node: NodeId) -> bool:
        return node in self._graph

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self.nodes)

    @property
    def graph(self) -> nx.DiGraph:
        """Read-only view of the underlying adjacency."""
        return self._graph.copy(as_view=True)

    @property
    def nodes(self) -> list[NodeId]:
        """All node ids, sorted."""
        return sorted(self._graph.nodes)

    @property
    def edges(self) -> list[tuple[NodeId, NodeId]]:
        """All edges, sorted."""
        return sorted(self._graph.edges)

    @property
    def edge_count(self) -> int:
        return self._graph.number_of_edges()

    # Construction

    def add_node(self, task: TaskDescriptor) -> NodeId:
        """Add a node carrying `task`. Equal descriptors still give distinct nodes."""
        node = NodeId(self._next_id)
        self._insert(node, task)
        return node

    def _insert(self, node: NodeId, task: TaskDescriptor) -> None:
        if node in self._graph:
            raise ValueError(f"Node {node} already exists")
        self._graph.add_node(node, task=task)
        self._args[node] = []
        self._next_id = max(self._next_id, node + 1)

    def add_edge(self, src: NodeId, dst: NodeId, repeat: bool = False) -> None:
        """Connect `src` to `dst`, appending `src` to the ordered arguments of `dst`.

        Args:
            src: producing node
            dst: consuming node
            repeat: allow `src` to be passed again to a node it already feeds

        Raises:
            UnknownNode, KindViolation, DuplicateEdge, MultipleProducers
        """
        self._require(src)
        self._require(dst)
        if self.kind(src) is self.kind(dst):
            raise KindViolation(
                f"Edge {src}->{dst} connects two {self.kind(src).value} nodes"
            )
        if self._graph.has_edge(src, dst):
            if not repeat:
                raise DuplicateEdge(f"Edge {src}->{dst} already present")
            self._args[dst].append(src)
            return
        if self.kind(dst) is TaskKind.DATA and self._graph.in_degree(dst) > 0:
            raise MultipleProducers(f"Data node {dst} already has a producer")
        self._graph.add_edge(src, dst)
        self._args[dst].append(src)

    def remove_node(self, node: NodeId) -> None:
        """Delete a node and its edges. Node ids are never handed out again."""
        self._require(node)
        for child in list(self._graph.successors(node)):
            self._args[child] = [a for a in self._args[child] if a != node]
        self._graph.remove_node(node)
        del self._args[node]

    def remove_edge(self, src: NodeId, dst: NodeId) -> None:
        """Delete an edge and every argument position it fed."""
        if not self._graph.has_edge(src, dst):
            raise UnknownNode(f"No edge {src}->{dst}")
        self._graph.remove_edge(src, dst)
        self._args[dst] = [a for a in self._args[dst] if a != src]

    def replace_argument(self, node: NodeId, old: NodeId, new: NodeId) -> None:
        """Make `node` read `new` wherever it read `old`, keeping argument positions."""
        self._require(node)
        self._require(new)
        if self.kind(new) is not self.kind(old):
            raise KindViolation(f"Cannot replace {old} by {new}: different task kinds")
        if self.kind(node) is TaskKind.DATA and self._graph.in_degree(node) > 0:
            producer = next(iter(self._graph.predecessors(node)))
            if producer != old:
                raise MultipleProducers(f"Data node {node} already has a producer")
        self._args[node] = [new if a == old else a for a in self._args[node]]
        if self._graph.has_edge(old, node):
            self._graph.remove_edge(old, node)
        self._graph.add_edge(new, node)

    # Queries

    def _require(self, node: NodeId) -> None:
        if node not in self._graph:
            raise UnknownNode(f"Unknown node {node}")

    def task(self, node: NodeId) -> TaskDescriptor:
        self._require(node)
        return self._graph.nodes[node]["task"]

    def kind(self, node: NodeId) -> TaskKind:
        return self.task(node).kind

    def arguments(self, node: NodeId) -> tuple[NodeId, ...]:
        """Ordered inputs of a node (the producer, for a data node)."""
        self._require(node)
        return tuple(self._args[node])

    def predecessors(self, node: NodeId) -> frozenset[NodeId]:
        """The set of nodes with an edge into `node`."""
        self._require(node)
        return frozenset(self._graph.predecessors(node))

    def successors(self, node: NodeId) -> frozenset[NodeId]:
        """The set of nodes `node` has an edge to."""
        self._require(node)
        return frozenset(self._graph.successors(node))

    def in_degree(self, node: NodeId) -> int:
        return self._graph.in_degree(node)

    def out_degree(self, node: NodeId) -> int:
        return self._graph.out_degree(node)

    def producer(self, node: NodeId) -> Optional[NodeId]:
        """The single producer of a data node, None for entry nodes."""
        args = self.arguments(node)
        return args[0] if args else None

    @property
    def data_nodes(self) -> list[NodeId]:
        return [n for n in self.nodes if self.kind(n) is TaskKind.DATA]

    @property
    def compute_nodes(self) -> list[NodeId]:
        return [n for n in self.nodes if self.kind(n) is TaskKind.COMPUTE]

    @property
    def entry_nodes(self) -> list[NodeId]:
        """Nodes without incoming edges, sorted."""
        return [n for n in self.nodes if self._graph.in_degree(n) == 0]

    @property
    def exit_nodes(self) -> list[NodeId]:
        """Nodes without outgoing edges, sorted."""
        return [n for n in self.nodes if self._graph.out_degree(n) == 0]

    @property
    def exit_node(self) -> NodeId:
        """The single exit node of a valid graph.

        Raises:
            NotSingleExit
        """
        exits = self.exit_nodes
        if len(exits) != 1:
            raise NotSingleExit(f"Graph has {len(exits)} exit nodes, expected one")
        return exits[0]

    def entry_signature(self) -> tuple[int, ...]:
        """Sorted input indices bound by the entry nodes."""
        indices = (self.task(n).input_index for n in self.entry_nodes)
        return tuple(sorted(i for i in indices if i is not None))

    def topological_order(self) -> list[NodeId]:
        """Deterministic topological order, ties broken by lowest node id.

        Raises:
            CycleDetected
        """
        try:
            return list(nx.lexicographical_topological_sort(self._graph, key=int))
        except nx.NetworkXUnfeasible as e:
            raise CycleDetected(str(e)) from e

    def validate(self) -> "ValidationReport":
        """Report every violated structural rule. An empty report means the graph is valid."""
        from .Validation import validate

        return validate(self)

    def copy(self) -> "Cdag":
        """Independent copy with the same node ids."""
        other = Cdag()
        other._graph = self._graph.copy()
        other._args = {node: list(args) for node, args in self._args.items()}
        other._next_id = self._next_id
        return other

    def relabeled(self, mapping: dict[NodeId, NodeId]) -> "Cdag":
        """Copy of the graph with node ids renamed through `mapping`."""
        other = Cdag()
        for node in self.nodes:
            other._insert(NodeId(mapping[node]), self.task(node))
        for node in self.nodes:
            for arg in self._args[node]:
                other.add_edge(NodeId(mapping[arg]), NodeId(mapping[node]), repeat=True)
        logging.debug(f"Relabeled graph with {len(mapping)} nodes")
        return other


# Functional spellings of the graph operations


def add_node(g: Cdag, task: TaskDescriptor) -> NodeId:
    return g.add_node(task)


def add_edge(g: Cdag, src: NodeId, dst: NodeId) -> None:
    g.add_edge(src, dst)


def predecessors(g: Cdag, node: NodeId) -> frozenset[NodeId]:
    return g.predecessors(node)


def successors(g: Cdag, node: NodeId) -> frozenset[NodeId]:
    return g.successors(node)


def topological_order(g: Cdag) -> list[NodeId]:
    return g.topological_order()
