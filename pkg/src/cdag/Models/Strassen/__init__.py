from .Kernels import (
    add_blocks,
    mult_base,
    slice_block,
    strassen_assemble,
    strassen_kernels,
    sub_blocks,
)
from .Generator import StrassenConfig, generate_strassen_dag, sample_strassen_inputs
from .Model import StrassenModel
