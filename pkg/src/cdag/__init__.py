from .configuration import read_configuration, write_configuration, open_config_folder
from .environment import Environment, get_global_environment
from .errors import CdagError
from .utils import alias_param, info_message
from .Graph import Cdag, TaskKind, canonical_hash, compute_task, data_task, entry_task
from .Metrics import graph_metrics, graph_stats, kernel_counts
from .Optimizer import apply_reduction, apply_split, find_reductions, reduce_to_fixpoint
from .Exec import Machine, compile_graph, emit_listing, execute, execute_batch, lower, schedule
