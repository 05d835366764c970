from collections import defaultdict
from dataclasses import dataclass
import logging

from ..errors import NotSplittable, StaleGroup, UnknownNode
from ..Graph.Cdag import Cdag, NodeId, TaskDescriptor, TaskKind


@dataclass(frozen=True)
class MetricDelta:
    """Signed change of compute effort C and data transfer D caused by one operation."""

    d_compute_effort: int
    d_data_transfer: int

    def __neg__(self) -> "MetricDelta":
        return MetricDelta(-self.d_compute_effort, -self.d_data_transfer)


@dataclass(frozen=True)
class ReductionGroup:
    """Nodes with the same task and the same ordered arguments; they compute the same value."""

    members: tuple[NodeId, ...]
    task: TaskDescriptor
    shared_parents: tuple[NodeId, ...]

    @property
    def kind(self) -> TaskKind:
        return self.task.kind

    @property
    def survivor(self) -> NodeId:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SplitTarget:
    """A node with several successors, to be duplicated once per successor."""

    node: NodeId
    successor_count: int


def find_reductions(g: Cdag) -> list[ReductionGroup]:
    """All maximal groups of two or more reducible nodes, ordered by their lowest member."""
    buckets: dict[tuple, list[NodeId]] = defaultdict(list)
    for node in g.nodes:
        buckets[(g.task(node), g.arguments(node))].append(node)
    groups = [
        ReductionGroup(tuple(members), task, args)
        for (task, args), members in buckets.items()
        if len(members) >= 2
    ]
    return sorted(groups, key=lambda grp: grp.members[0])


def find_splits(g: Cdag) -> list[SplitTarget]:
    """Every node with at least two successors."""
    return [SplitTarget(n, g.out_degree(n)) for n in g.nodes if g.out_degree(n) >= 2]


def is_current(g: Cdag, grp: ReductionGroup) -> bool:
    """Whether the group still describes reducible nodes of `g`."""
    if len(grp.members) < 2:
        return False
    for member in grp.members:
        if member not in g:
            return False
        if g.task(member) != grp.task or g.arguments(member) != grp.shared_parents:
            return False
    return True


def _check_group(g: Cdag, grp: ReductionGroup) -> None:
    if not is_current(g, grp):
        raise StaleGroup(f"Reduction group {list(grp.members)} no longer matches the graph")


def _check_split(g: Cdag, tgt: SplitTarget) -> list[NodeId]:
    if tgt.node not in g:
        raise UnknownNode(f"Unknown node {tgt.node}")
    children = sorted(g.successors(tgt.node))
    if len(children) < 2:
        raise NotSplittable(f"Node {tgt.node} has {len(children)} successor(s)")
    if len(children) != tgt.successor_count:
        raise StaleGroup(
            f"Node {tgt.node} has {len(children)} successors, expected {tgt.successor_count}"
        )
    return children


def apply_reduction(g: Cdag, grp: ReductionGroup, inplace: bool = False) -> Cdag:
    """Merge the group into its lowest-id member, which takes over all their successors.

    Raises:
        StaleGroup: the group does not match the graph any more
    """
    target = g if inplace else g.copy()
    _check_group(target, grp)
    survivor = grp.survivor
    for member in grp.members[1:]:
        for child in sorted(target.successors(member)):
            target.replace_argument(child, member, survivor)
        target.remove_node(member)
    logging.debug(f"Reduced {len(grp)} x {grp.task} into node {survivor}")
    return target


def apply_split(g: Cdag, tgt: SplitTarget, inplace: bool = False) -> Cdag:
    """Give every successor of the node its own copy, with the same task and arguments.

    Raises:
        NotSplittable: the node has fewer than two successors
    """
    target = g if inplace else g.copy()
    children = _check_split(target, tgt)
    task = target.task(tgt.node)
    args = target.arguments(tgt.node)
    for child in children[1:]:
        clone = target.add_node(task)
        for arg in args:
            target.add_edge(arg, clone, repeat=True)
        target.replace_argument(child, tgt.node, clone)
    logging.debug(f"Split node {tgt.node} into {len(children)} copies")
    return target


def predict_delta(g: Cdag, op: ReductionGroup | SplitTarget) -> MetricDelta:
    """Exact change of (C, D) that applying `op` to `g` causes.

    A reduction of k nodes with effort c and parent sizes d_j changes C by
    -(k-1)c and D by -(k-1)·Σd_j. Merged data nodes only lose the edges to
    consumers they shared. A split is the inverse.
    """
    if isinstance(op, ReductionGroup):
        _check_group(g, op)
        k = len(op.members)
        if op.kind is TaskKind.COMPUTE:
            parent_size = sum(g.task(p).effort for p in set(op.shared_parents))
            return MetricDelta(-(k - 1) * op.task.effort, -(k - 1) * parent_size)
        # the producer is a compute node; only doubled consumer edges disappear
        before = sum(g.out_degree(m) for m in op.members)
        after = len(set().union(*(g.successors(m) for m in op.members)))
        return MetricDelta(0, op.task.effort * (after - before))

    children = _check_split(g, op)
    k = len(children)
    task = g.task(op.node)
    if task.kind is TaskKind.COMPUTE:
        parent_size = sum(g.task(p).effort for p in g.predecessors(op.node))
        return MetricDelta((k - 1) * task.effort, (k - 1) * parent_size)
    # copies of a data node share its consumers out between them
    return MetricDelta(0, 0)
