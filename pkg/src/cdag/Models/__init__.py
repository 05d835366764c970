from .Base import Model
from .Example import ExampleModel, example_dag, example_kernels, example_value
from .QED import ComptonProcess, QedModel, generate_compton_dag
from .ABC import AbcModel, AbcProcess, generate_ab_dag
from .Strassen import StrassenConfig, StrassenModel, generate_strassen_dag
