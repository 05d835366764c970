from .Operations import (
    MetricDelta,
    ReductionGroup,
    SplitTarget,
    apply_reduction,
    apply_split,
    find_reductions,
    find_splits,
    is_current,
    predict_delta,
)
from .Fixpoint import OperationRecord, check_equivalence, reduce_to_fixpoint
