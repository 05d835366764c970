from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import networkx as nx

from ..errors import ValidationFailed

if TYPE_CHECKING:
    from .Cdag import Cdag, NodeId


class ViolationKind(Enum):
    KIND_VIOLATION = "KindViolation"
    CYCLE_DETECTED = "CycleDetected"
    MULTIPLE_PRODUCERS = "MultipleProducers"
    NO_EXIT = "NoExit"
    MULTIPLE_EXITS = "MultipleExits"
    NON_DATA_EXIT = "NonDataExit"
    NO_ENTRY = "NoEntry"
    NON_DATA_ENTRY = "NonDataEntry"
    ARGUMENT_MISMATCH = "ArgumentMismatch"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    nodes: tuple["NodeId", ...]
    message: str

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.message}"


@dataclass
class ValidationReport:
    """All structural problems found in a graph. Empty means valid."""

    violations: list[Violation] = field(default_factory=list)
    entries: tuple["NodeId", ...] = ()
    exits: tuple["NodeId", ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def raise_for_violations(self) -> None:
        if self.violations:
            raise ValidationFailed(self)

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


def validate(g: "Cdag") -> ValidationReport:
    """Check the bipartite, acyclic, single-producer, single-exit and entry rules."""
    from .Cdag import TaskKind

    graph = g.graph
    report = ValidationReport(entries=tuple(g.entry_nodes), exits=tuple(g.exit_nodes))

    for src, dst in g.edges:
        if g.kind(src) is g.kind(dst):
            report.violations.append(
                Violation(
                    ViolationKind.KIND_VIOLATION,
                    (src, dst),
                    f"edge {src}->{dst} joins two {g.kind(src).value} nodes",
                )
            )

    try:
        cycle = nx.find_cycle(graph)
        nodes = tuple(edge[0] for edge in cycle)
        report.violations.append(
            Violation(ViolationKind.CYCLE_DETECTED, nodes, f"cycle through {list(nodes)}")
        )
    except nx.NetworkXNoCycle:
        pass

    for node in g.data_nodes:
        if g.in_degree(node) > 1:
            report.violations.append(
                Violation(
                    ViolationKind.MULTIPLE_PRODUCERS,
                    (node,),
                    f"data node {node} has {g.in_degree(node)} producers",
                )
            )

    for node in g.nodes:
        if set(g.arguments(node)) != set(g.predecessors(node)):
            report.violations.append(
                Violation(
                    ViolationKind.ARGUMENT_MISMATCH,
                    (node,),
                    f"arguments of {node} disagree with its incoming edges",
                )
            )

    if not report.exits:
        report.violations.append(Violation(ViolationKind.NO_EXIT, (), "graph has no exit node"))
    elif len(report.exits) > 1:
        report.violations.append(
            Violation(
                ViolationKind.MULTIPLE_EXITS,
                report.exits,
                f"graph has {len(report.exits)} exit nodes {list(report.exits)}",
            )
        )
    for node in report.exits:
        if g.kind(node) is not TaskKind.DATA:
            report.violations.append(
                Violation(ViolationKind.NON_DATA_EXIT, (node,), f"exit node {node} is a compute node")
            )

    if not report.entries:
        report.violations.append(Violation(ViolationKind.NO_ENTRY, (), "graph has no entry node"))
    for node in report.entries:
        if g.kind(node) is not TaskKind.DATA:
            report.violations.append(
                Violation(
                    ViolationKind.NON_DATA_ENTRY, (node,), f"entry node {node} is a compute node"
                )
            )

    return report
