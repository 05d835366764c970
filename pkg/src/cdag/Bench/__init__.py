from .BreakEven import BreakEvenInput, break_even_n, speedup, speedup_curve
from .Harness import BenchReport, bench_pipeline, bench_sweep, median_time, timed
from .Export import CSV_HEADER, export_csv, export_curve_csv, save_csv
