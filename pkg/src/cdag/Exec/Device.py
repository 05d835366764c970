from dataclasses import dataclass, field
from typing import Optional
import math

from ..configuration import DEFAULT_DEVICE


@dataclass(frozen=True)
class Device:
    """A compute device: FLOP rate and memory bandwidth."""

    id: int
    flops_rate: float = DEFAULT_DEVICE["flops_rate"]
    mem_bandwidth: float = DEFAULT_DEVICE["mem_bandwidth"]

    def __post_init__(self):
        if self.flops_rate <= 0 or self.mem_bandwidth <= 0:
            raise ValueError(f"Device {self.id} needs positive rates")

    def compute_time(self, flops: float) -> float:
        return flops / self.flops_rate


@dataclass(frozen=True)
class Machine:
    """A set of devices joined by an interconnect.

    `links` may override the interconnect rate of single device pairs; lookups
    are symmetric and the same device always transfers instantly.
    """

    devices: tuple[Device, ...]
    interconnect: float = DEFAULT_DEVICE["interconnect"]
    links: dict[frozenset[int], float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.devices:
            raise ValueError("A machine needs at least one device")
        if self.interconnect <= 0 or any(rate <= 0 for rate in self.links.values()):
            raise ValueError("Transfer rates must be positive")
        ids = [d.id for d in self.devices]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Duplicate device ids in {ids}")

    @classmethod
    def single(cls, device: Optional[Device] = None) -> "Machine":
        return cls((device or Device(0),))

    @classmethod
    def uniform(
        cls,
        count: int,
        flops_rate: float = DEFAULT_DEVICE["flops_rate"],
        mem_bandwidth: float = DEFAULT_DEVICE["mem_bandwidth"],
        interconnect: float = DEFAULT_DEVICE["interconnect"],
    ) -> "Machine":
        """`count` identical devices numbered from 0."""
        return cls(
            tuple(Device(i, flops_rate, mem_bandwidth) for i in range(count)),
            interconnect,
        )

    @classmethod
    def from_configuration(cls, configuration: dict) -> "Machine":
        section = configuration.get("device", DEFAULT_DEVICE)
        return cls.uniform(
            int(section.get("count", 1)),
            float(section.get("flops_rate", DEFAULT_DEVICE["flops_rate"])),
            float(section.get("mem_bandwidth", DEFAULT_DEVICE["mem_bandwidth"])),
            float(section.get("interconnect", DEFAULT_DEVICE["interconnect"])),
        )

    def __len__(self) -> int:
        return len(self.devices)

    def device(self, device_id: int) -> Device:
        for device in self.devices:
            if device.id == device_id:
                return device
        raise KeyError(device_id)

    def transfer_rate(self, a: int, b: int) -> float:
        """Bytes per second between two devices, +inf on the same device."""
        if a == b:
            return math.inf
        return self.links.get(frozenset((a, b)), self.interconnect)

    def transfer_time(self, size: float, a: int, b: int) -> float:
        return size / self.transfer_rate(a, b)
