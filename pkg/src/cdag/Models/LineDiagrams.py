"""
Tree-level diagrams of one fermion-like line absorbing N bosons.

Every ordering of the bosons along the line is one diagram. The line is cut
in two: the incoming half absorbs the first (N+1)//2 bosons of the ordering,
starting next to the incoming particle, and the outgoing half absorbs the
rest, starting next to the outgoing particle. A half-line absorbing one boson
is a vertex of the boson's and the line end's base states; a longer one is a
vertex of the next boson with the propagated shorter half-line. The two halves
of a diagram are joined, and all diagrams are summed.

With reuse, every base state, half-line and propagated half-line is built
once per (side, ordered boson sequence) and shared between diagrams.
"""

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional
import logging

from ..Graph.Cdag import Cdag, NodeId, compute_task, data_task, entry_task
from .State import LineSide


@dataclass(frozen=True)
class ExternalParticle:
    """An external particle and its position in the input record."""

    index: int
    species: str
    incoming: bool
    state: str = ""
    mass: float = 0.0

    @property
    def direction(self) -> str:
        return "in" if self.incoming else "out"

    def params(self) -> dict:
        return dict(
            index=self.index,
            species=self.species,
            direction=self.direction,
            state=self.state,
            mass=self.mass,
        )


@dataclass(frozen=True)
class LineProcess:
    """A line with its bosons. `propagator_params` go onto every S1 and S2 node."""

    line_in: ExternalParticle
    line_out: ExternalParticle
    bosons: tuple[ExternalParticle, ...]
    propagator_params: dict = field(default_factory=dict, hash=False)

    @property
    def externals(self) -> list[ExternalParticle]:
        return sorted((self.line_in, self.line_out, *self.bosons), key=lambda p: p.index)

    @property
    def n_external(self) -> int:
        return len(self.bosons) + 2


@dataclass(frozen=True)
class LineTasks:
    """Kernel tags, efforts and data sizes a model plugs into the line generator.

    `data` maps a data role (input, incoming, outgoing, boson, diagram, result)
    to the data tag and size in bytes of the nodes carrying it.
    """

    prefix: str
    efforts: dict[str, int]
    data: dict[str, tuple[str, int]] = field(default_factory=dict)

    def tag(self, kernel: str) -> str:
        return f"{self.prefix}_{kernel}"

    @staticmethod
    def sum_effort(k: int) -> int:
        """Adding k complex numbers and taking the squared modulus."""
        return 2 * (k - 1) + 3


def split_ordering(order: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Incoming and outgoing half-line sequences of one boson ordering."""
    m = (len(order) + 1) // 2
    return order[:m], tuple(reversed(order[m:]))


class LineDiagramBuilder:
    def __init__(self, process: LineProcess, tasks: LineTasks, reuse: bool = True):
        self.process = process
        self.tasks = tasks
        self.reuse = reuse
        self.g = Cdag()
        self._particles = {p.index: p for p in process.externals}
        self._entries: dict[int, NodeId] = {}
        self._memo: dict[tuple, NodeId] = {}

    def _data(self, role: str) -> tuple[str, int]:
        return self.tasks.data[role]

    def _call(self, kernel: str, args: list[NodeId], role: str, **params) -> NodeId:
        """Add a compute node on `args` and the data node carrying its result."""
        tag = self.tasks.tag(kernel)
        effort = (
            self.tasks.sum_effort(len(args)) if kernel == "Sum" else self.tasks.efforts[kernel]
        )
        task = self.g.add_node(compute_task(tag, effort, **params))
        for arg in args:
            self.g.add_edge(arg, task, repeat=True)
        data_tag, size = self._data(role)
        result = self.g.add_node(data_task(data_tag, size))
        self.g.add_edge(task, result)
        return result

    def _shared(self, key: tuple, build) -> NodeId:
        if not self.reuse:
            return build()
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    def entry(self, index: int) -> NodeId:
        """Entry nodes are always shared: one per external particle."""
        if index not in self._entries:
            tag, size = self._data("input")
            self._entries[index] = self.g.add_node(entry_task(index, tag, size))
        return self._entries[index]

    def base(self, index: int) -> NodeId:
        particle = self._particles[index]
        if particle is self.process.line_in:
            role = "incoming"
        elif particle is self.process.line_out:
            role = "outgoing"
        else:
            role = "boson"
        return self._shared(
            ("base", index),
            lambda: self._call("U", [self.entry(index)], role, **particle.params()),
        )

    def half_line(self, side: LineSide, bosons: tuple[int, ...]) -> NodeId:
        role = side.value
        end = self.process.line_in if side is LineSide.INCOMING else self.process.line_out

        def build() -> NodeId:
            if len(bosons) == 1:
                return self._call("V", [self.base(bosons[0]), self.base(end.index)], role)
            inner = self.propagated(side, bosons[:-1])
            return self._call("V", [self.base(bosons[-1]), inner], role)

        return self._shared(("half", side, bosons), build)

    def propagated(self, side: LineSide, bosons: tuple[int, ...]) -> NodeId:
        return self._shared(
            ("propagated", side, bosons),
            lambda: self._call(
                "S1", [self.half_line(side, bosons)], side.value, **self.process.propagator_params
            ),
        )

    def diagram(self, order: tuple[int, ...]) -> NodeId:
        incoming, outgoing = split_ordering(order)
        adjoint = self.half_line(LineSide.OUTGOING, outgoing)
        spinor = self.half_line(LineSide.INCOMING, incoming)
        return self._call(
            "S2",
            [adjoint, spinor],
            "diagram",
            n_external=self.process.n_external,
            **self.process.propagator_params,
        )

    def orderings(self) -> list[tuple[int, ...]]:
        return list(permutations(p.index for p in self.process.bosons))

    def build(self) -> Cdag:
        diagrams = [self.diagram(order) for order in self.orderings()]
        self._call("Sum", diagrams, "result", n_diagrams=len(diagrams))
        logging.info(
            f"Generated {self.tasks.prefix} graph: {len(diagrams)} diagrams, "
            f"{len(self.g)} nodes (reuse={self.reuse})"
        )
        return self.g


def generate_line_dag(process: LineProcess, tasks: LineTasks, reuse: bool = True) -> Cdag:
    if len(process.bosons) < 2:
        raise ValueError("A line diagram needs at least two bosons")
    return LineDiagramBuilder(process, tasks, reuse).build()


def count_diagrams(g: Cdag, join_tag: str) -> int:
    """Number of complete diagrams: join nodes feeding the sum."""
    return sum(1 for n in g.compute_nodes if g.task(n).kernel_tag == join_tag)


def compare_node_count(n: int, actual: int, reference: dict[int, int], composition: Optional[dict] = None) -> bool:
    """Log a warning when a generated graph size differs from a published reference size."""
    expected = reference.get(n)
    if expected is None or expected == actual:
        return expected == actual
    logging.warning(
        f"Graph for n={n} has {actual} nodes, reference size is {expected}"
        + (f"; composition {composition}" if composition else "")
    )
    return False
