from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional
import logging
import random

from ..errors import SignatureMismatch
from ..Graph.Cdag import Cdag
from ..utils import alias_param, relative_error
from .Operations import apply_reduction, find_reductions, is_current, predict_delta

Evaluator = Callable[[Cdag], Callable[[Any], Any]]


@dataclass(frozen=True)
class OperationRecord:
    """One applied operation, as written to the optimization log."""

    op: str
    members: tuple[int, ...]
    d_compute_effort: int
    d_data_transfer: int

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "members": list(self.members),
            "dC": self.d_compute_effort,
            "dD": self.d_data_transfer,
        }


@alias_param("order_seed", "seed")
def reduce_to_fixpoint(
    g: Cdag,
    order_seed: int = 0,
    log: Optional[list[OperationRecord]] = None,
) -> tuple[Cdag, int]:
    """Apply node reductions until none is left.

    Groups found in one scan are applied in an order shuffled by `order_seed`;
    a group made stale by an earlier one is skipped and picked up again by the
    next scan. Whatever the order, the result is the same up to node ids.

    Returns:
        the reduced copy of `g` and the number of reductions applied
    """
    result = g.copy()
    rng = random.Random(order_seed)
    applied = 0
    scans = 0
    while True:
        groups = find_reductions(result)
        if not groups:
            break
        scans += 1
        rng.shuffle(groups)
        for grp in groups:
            if not is_current(result, grp):
                logging.debug(f"Skipping stale group {list(grp.members)}")
                continue
            delta = predict_delta(result, grp)
            apply_reduction(result, grp, inplace=True)
            applied += 1
            if log is not None:
                log.append(
                    OperationRecord(
                        "reduce", grp.members, delta.d_compute_effort, delta.d_data_transfer
                    )
                )
    logging.info(
        f"Reduced graph from {len(g)} to {len(result)} nodes "
        f"({applied} reductions, {scans} scans)"
    )
    return result, applied


def check_equivalence(
    g1: Cdag,
    g2: Cdag,
    evaluator: Evaluator,
    inputs: Iterable[Any],
    tol: float = 1e-10,
) -> bool:
    """Whether both graphs give the same exit value on every input record.

    `evaluator` turns a graph into a callable on input records.

    Raises:
        SignatureMismatch: the graphs do not bind the same input indices
    """
    if g1.entry_signature() != g2.entry_signature():
        raise SignatureMismatch(
            f"Entry signatures differ: {g1.entry_signature()} vs {g2.entry_signature()}"
        )
    run1, run2 = evaluator(g1), evaluator(g2)
    for i, record in enumerate(inputs):
        error = relative_error(run1(record), run2(record))
        if error > tol:
            logging.warning(f"Graphs disagree on input {i}: relative error {error:.3e}")
            return False
    return True
