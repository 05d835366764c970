"""Speedup of an optimized plan once the optimization time is paid for."""

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from ..errors import NoBreakEven


@dataclass(frozen=True)
class BreakEvenInput:
    """Per-sample times before (`t_e`) and after (`t_e_opt`) optimizing, the time spent
    optimizing (`t_o`) and the number of samples `n`. All in seconds."""

    t_e: float
    t_e_opt: float
    t_o: float = 0.0
    n: float = 1.0

    def __post_init__(self):
        if self.t_e <= 0 or self.t_e_opt <= 0:
            raise ValueError(f"Sample times must be positive, got {self.t_e}, {self.t_e_opt}")
        if self.t_o < 0 or self.n <= 0:
            raise ValueError(f"Need t_o >= 0 and n > 0, got {self.t_o}, {self.n}")

    def at(self, n: float) -> "BreakEvenInput":
        return replace(self, n=n)


def speedup(inp: BreakEvenInput) -> float:
    """Total unoptimized time over optimized time including optimization, for `inp.n` samples."""
    return (inp.t_e * inp.n) / (inp.t_e_opt * inp.n + inp.t_o)


def break_even_n(inp: BreakEvenInput) -> float:
    """Sample count at which the speedup reaches 1.

    Raises:
        NoBreakEven: the optimized plan is not faster per sample
    """
    if inp.t_e <= inp.t_e_opt:
        raise NoBreakEven(
            f"Optimized time {inp.t_e_opt:.3e}s is not below unoptimized time {inp.t_e:.3e}s"
        )
    return inp.t_o / (inp.t_e - inp.t_e_opt)


def speedup_curve(inp: BreakEvenInput, exponents: Iterable[int] = range(0, 9)) -> list[tuple[float, float]]:
    """(N, speedup) at N = 10^e for every exponent."""
    return [(float(n), speedup(inp.at(float(n)))) for n in np.power(10.0, list(exponents))]
