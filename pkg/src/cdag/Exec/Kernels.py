from dataclasses import dataclass
from typing import Any, Callable, Iterable, Iterator, Optional
import logging

from ..errors import KernelMismatch, UnknownKernel
from ..Graph.Cdag import Params

KernelFunction = Callable[..., Any]


@dataclass(frozen=True)
class Kernel:
    """A pure function `function(params, *args)` bound to a kernel tag.

    `arity` is the exact number of arguments, or None for variadic kernels
    taking at least `min_arity` arguments.
    """

    tag: str
    function: KernelFunction
    arity: Optional[int] = None
    min_arity: int = 0

    def check_arity(self, count: int) -> None:
        if self.arity is not None and count != self.arity:
            raise KernelMismatch(f"Kernel {self.tag} takes {self.arity} arguments, got {count}")
        if count < self.min_arity:
            raise KernelMismatch(
                f"Kernel {self.tag} takes at least {self.min_arity} arguments, got {count}"
            )

    def __call__(self, params: Params, *args: Any) -> Any:
        self.check_arity(len(args))
        return self.function(params, *args)


class KernelRegistry:
    """Map from kernel tag to Kernel. Read-only once handed to a plan."""

    def __init__(self, kernels: Iterable[Kernel] = (), name: str = "kernels"):
        self.name = name
        self._kernels: dict[str, Kernel] = {}
        for kernel in kernels:
            self.register(kernel)

    def __repr__(self) -> str:
        return f"<KernelRegistry {self.name}: {', '.join(self.tags)}>"

    def __contains__(self, tag: str) -> bool:
        return tag in self._kernels

    def __iter__(self) -> Iterator[Kernel]:
        return iter(self._kernels.values())

    def __len__(self) -> int:
        return len(self._kernels)

    def __getitem__(self, tag: str) -> Kernel:
        try:
            return self._kernels[tag]
        except KeyError:
            raise UnknownKernel(f"No kernel {tag!r} in registry {self.name}") from None

    @property
    def tags(self) -> list[str]:
        return sorted(self._kernels)

    def register(self, kernel: Kernel) -> Kernel:
        if kernel.tag in self._kernels:
            logging.warning(f"Kernel {kernel.tag} replaced in registry {self.name}")
        self._kernels[kernel.tag] = kernel
        return kernel

    def kernel(self, tag: str, arity: Optional[int] = None, min_arity: int = 0):
        """Decorator registering a function as a kernel."""

        def deco(function: KernelFunction) -> KernelFunction:
            self.register(Kernel(tag, function, arity, min_arity))
            return function

        return deco

    def merged(self, other: "KernelRegistry") -> "KernelRegistry":
        return KernelRegistry([*self, *other], name=f"{self.name}+{other.name}")
