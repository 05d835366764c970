from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from ..errors import OverlappingAbsorbedSets


class ValueKind(Enum):
    BISPINOR = "bispinor"
    ADJOINT = "adjoint"
    LORENTZ = "lorentz"
    SCALAR = "scalar"


class LineSide(Enum):
    """Where a partial diagram lives: on the incoming or outgoing half of the line, or a boson."""

    INCOMING = "incoming"
    OUTGOING = "outgoing"
    BOSON = "boson"


@dataclass(frozen=True, eq=False)
class SubdiagramState:
    """Value of a partial Feynman diagram.

    `momentum` is the signed sum of the absorbed external momenta (incoming
    particles count positive, outgoing negative).
    """

    value: Any
    kind: ValueKind
    momentum: np.ndarray
    absorbed: frozenset[int]
    side: LineSide
    species: str = ""

    def __repr__(self) -> str:
        return (
            f"SubdiagramState({self.kind.value}, side={self.side.value}, "
            f"absorbed={sorted(self.absorbed)}, species={self.species!r})"
        )

    @property
    def on_line(self) -> bool:
        return self.side is not LineSide.BOSON


def merge_absorbed(a: SubdiagramState, b: SubdiagramState) -> frozenset[int]:
    """Union of two absorbed sets that must not overlap."""
    if a.absorbed & b.absorbed:
        raise OverlappingAbsorbedSets(
            f"Absorbed sets {sorted(a.absorbed)} and {sorted(b.absorbed)} overlap"
        )
    return a.absorbed | b.absorbed
