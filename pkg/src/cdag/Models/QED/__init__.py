from .Algebra import (
    ALPHA,
    GAMMA,
    METRIC,
    adjoint_spinor,
    anticommutator,
    coupling,
    polarization,
    propagator,
    slash,
    spinor,
)
from .Kernels import (
    QED_EFFORTS,
    QED_TASKS,
    base_state,
    join,
    propagate,
    qed_kernels,
    squared_sum,
    sum_diagrams,
    vertex,
)
from .Generator import (
    REFERENCE_NODE_COUNTS,
    ComptonProcess,
    generate_compton_dag,
    sample_compton_inputs,
)
from .Oracle import oracle_amplitude, oracle_squared
from .Model import QedModel
