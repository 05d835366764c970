from dataclasses import dataclass
from typing import Optional

from parsimonious import NodeVisitor
from parsimonious.nodes import Node

from ...errors import InvalidProcess


@dataclass(frozen=True)
class ParsedProcess:
    """Particles on both sides of a process, each with its multiplicity."""

    incoming: tuple[tuple[str, int], ...]
    outgoing: tuple[tuple[str, int], ...]

    def count(self, name: str, incoming: bool = True) -> int:
        side = self.incoming if incoming else self.outgoing
        return sum(k for particle, k in side if particle == name)

    def names(self, incoming: bool = True) -> list[str]:
        side = self.incoming if incoming else self.outgoing
        return [particle for particle, _ in side]

    def __str__(self) -> str:
        def show(side):
            return " ".join(name if k == 1 else f"{name}^{k}" for name, k in side)

        return f"{show(self.incoming)} -> {show(self.outgoing)}"


class ProcessVisitor(NodeVisitor):
    def visit_root(self, _node, children):
        _, incoming, _, _, _, outgoing, _ = children
        return dict(type="process", incoming=incoming, outgoing=outgoing)

    def visit_side(self, _node, children):
        particle, other_particles = children
        if isinstance(other_particles, Node):
            other_particles = []
        return [particle] + [p[1] for p in other_particles]

    def visit_particle(self, _node, children):
        multiplicity, name, power = children
        prefix = 1 if isinstance(multiplicity, Node) else multiplicity[0]
        suffix = 1 if isinstance(power, Node) else power[0]
        return dict(type="particle", name=name, count=[prefix, suffix])

    def visit_multiplicity(self, _node, children):
        return children[0]

    def visit_prefix_placeholder(self, _node, children):
        return children[0]

    def visit_power(self, _node, children):
        _, count = children
        return count[0]

    def visit_name(self, node, _children):
        return node.text

    def visit_placeholder(self, _node, _children):
        return None

    def visit_pos_integer(self, node, _children):
        return int(node.text)

    def generic_visit(self, node, children):
        return children or node


class ProcessInterpreter:
    """Evaluate a visited process tree, filling `N` placeholders with `n`."""

    def __init__(self, n: Optional[int] = None):
        self.n = n

    def eval(self, node):
        node_type = node["type"]
        eval_method = getattr(self, f"eval_{node_type}")
        return eval_method(node)

    def eval_process(self, node) -> ParsedProcess:
        incoming = tuple(self.eval(p) for p in node["incoming"])
        outgoing = tuple(self.eval(p) for p in node["outgoing"])
        return ParsedProcess(incoming, outgoing)

    def eval_particle(self, node) -> tuple[str, int]:
        count = 1
        for factor in node["count"]:
            if factor is None:
                if self.n is None:
                    raise InvalidProcess(f"Particle {node['name']} uses N but no count was given")
                factor = self.n
            count *= factor
        if count < 1:
            raise InvalidProcess(f"Particle {node['name']} needs a positive count")
        return node["name"], count
