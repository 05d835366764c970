import numpy as np

from ...errors import DimensionMismatch, OutOfBounds
from ...Exec.Kernels import Kernel, KernelRegistry
from ...Graph.Cdag import Params

FLOAT_SIZE = 8


def block_size(b: int) -> int:
    """Bytes of a b×b block of reals."""
    return b * b * FLOAT_SIZE


def mult_effort(b: int) -> int:
    return 2 * b**3


def add_effort(b: int) -> int:
    return b * b


def assemble_effort(h: int) -> int:
    """Eight block additions to form the four quadrants."""
    return 8 * h * h


def _square(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} expects square blocks, got shape {m.shape}")
    return m


def slice_block(m: np.ndarray, row: int, col: int, size: int) -> np.ndarray:
    """Quadrant (row, col) of size `size`.

    Raises:
        OutOfBounds
    """
    m = np.asarray(m, dtype=float)
    if row < 0 or col < 0 or (row + 1) * size > m.shape[0] or (col + 1) * size > m.shape[1]:
        raise OutOfBounds(f"Quadrant ({row}, {col}) of size {size} outside shape {m.shape}")
    return m[row * size : (row + 1) * size, col * size : (col + 1) * size].copy()


def add_blocks(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"Cannot add {x.shape} and {y.shape}")
    return x + y


def sub_blocks(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"Cannot subtract {y.shape} from {x.shape}")
    return x - y


def mult_base(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = _square(x, "MultBase"), _square(y, "MultBase")
    if x.shape != y.shape:
        raise DimensionMismatch(f"Cannot multiply {x.shape} by {y.shape}")
    return x @ y


def strassen_assemble(*m: np.ndarray) -> np.ndarray:
    """C from the seven products:
    C11 = M1 + M4 - M5 + M7, C12 = M3 + M5, C21 = M2 + M4, C22 = M1 - M2 + M3 + M6.
    """
    if len(m) != 7:
        raise DimensionMismatch(f"Assembly takes 7 blocks, got {len(m)}")
    m1, m2, m3, m4, m5, m6, m7 = (np.asarray(b, dtype=float) for b in m)
    if len({b.shape for b in (m1, m2, m3, m4, m5, m6, m7)}) != 1:
        raise DimensionMismatch("Assembly blocks differ in shape")
    return np.block([[m1 + m4 - m5 + m7, m3 + m5], [m2 + m4, m1 - m2 + m3 + m6]])


def strassen_kernels() -> KernelRegistry:
    return KernelRegistry(
        [
            Kernel(
                "Slice",
                lambda params, m: slice_block(m, params["row"], params["col"], params["size"]),
                1,
            ),
            Kernel("Add", lambda _, x, y: add_blocks(x, y), 2),
            Kernel("Sub", lambda _, x, y: sub_blocks(x, y), 2),
            Kernel("MultBase", lambda _, x, y: mult_base(x, y), 2),
            Kernel("StrassenAssemble", lambda _, *m: strassen_assemble(*m), 7),
        ],
        name="strassen",
    )
