from .Metrics import (
    GraphMetrics,
    graph_compute_effort,
    graph_compute_intensity,
    graph_data_transfer,
    graph_metrics,
    graph_stats,
    kernel_counts,
    task_compute_intensity,
    task_input_size,
    task_type_ratios,
)
from .CostModel import (
    CostModel,
    device_rate_model,
    effort_cost_model,
    estimate_graph_cost,
    unit_cost_model,
)
