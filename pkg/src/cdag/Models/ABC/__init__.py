from .Kernels import (
    ABC_EFFORTS,
    ABC_TASKS,
    abc_base_state,
    abc_join,
    abc_kernels,
    abc_propagator,
    abc_vertex,
    line_species,
)
from .Generator import AbcProcess, generate_ab_dag, sample_abc_inputs
from .Oracle import abc_oracle_amplitude, abc_oracle_squared
from .Model import AbcModel
