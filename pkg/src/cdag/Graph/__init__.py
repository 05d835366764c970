from .Cdag import (
    Cdag,
    NodeId,
    Params,
    TaskDescriptor,
    TaskKind,
    ID_COMPUTE,
    ID_DATA,
    compute_task,
    data_task,
    entry_task,
)
from .Validation import ValidationReport, Violation, ViolationKind, validate
from .Hashing import canonical_hash
from .Serialization import (
    emit_graph_json,
    export_dot,
    graph_from_json,
    graph_to_json,
    load_graph,
    load_graph_json,
    save_graph,
)
