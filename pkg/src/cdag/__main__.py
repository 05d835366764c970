"""Command line front end: `cdag <command> ...` or `python -m cdag <command> ...`."""

from typing import Any, Optional, Sequence
import argparse
import json
import logging
import re
import sys

import numpy as np
from rich.console import Console
from rich.table import Table

from .Bench import BreakEvenInput, bench_sweep, break_even_n, export_csv, speedup, speedup_curve
from .configuration import (
    CONFIG_FILE,
    USER_DIRECTORY,
    default_seed,
    open_config_folder,
    read_configuration,
    setup_logging,
)
from .environment import Environment, get_global_environment
from .errors import (
    BenchError,
    GraphError,
    GraphFormatError,
    ModelError,
    NumericFailure,
    OperationError,
    PlanError,
)
from .Exec import (
    Machine,
    emit_listing,
    estimate_runtime,
    execute_batch,
    lower,
    plan_to_json,
    schedule,
    bind,
)
from .Graph import canonical_hash, emit_graph_json, export_dot, load_graph
from .Metrics import graph_stats, task_type_ratios
from .Models.Base import Model
from .Optimizer import reduce_to_fixpoint
from .utils import info_message

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 4

console = Console(stderr=True)


class UsageError(Exception): ...


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors exit with 4 here."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json_value(value: Any) -> Any:
    """Kernel values as JSON: complex numbers become [re, im], arrays nested lists."""
    if hasattr(value, "value"):
        value = value.value
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return [[float(z.real), float(z.imag)] for z in value.ravel()]
        return value.tolist()
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _load_valid_graph(path: str):
    g = load_graph(path)
    g.validate().raise_for_violations()
    return g


def _process_options(args: argparse.Namespace) -> dict:
    options = {
        "spin_in": args.spin_in,
        "spin_out": args.spin_out,
        "cutoff": args.cutoff,
        "shared_operands": args.shared,
    }
    if args.polarizations:
        options["polarizations"] = _polarizations(args.polarizations)
    return options


def _polarizations(text: str) -> tuple[str, ...] | dict[int, str]:
    """`x,y,k` lists every photon; `k1=x,k3=y` sets photons by their 1-based number."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not any("=" in item for item in items):
        return tuple(items)
    labels = {}
    for item in items:
        key, _, label = (part.strip() for part in item.partition("="))
        if not re.fullmatch(r"k[1-9]\d*", key) or not label:
            raise UsageError(f"Bad polarization {item!r}, expected k<i>=x|y|k")
        labels[int(key[1:])] = label
    return labels


def _process(model: Model, args: argparse.Namespace, n: Optional[int] = None) -> Any:
    return model.parse_process(
        args.process or model.default_process,
        n if n is not None else args.n,
        **_process_options(args),
    )


def _machine(args: argparse.Namespace, configuration: dict) -> Machine:
    machine = Machine.from_configuration(configuration)
    if getattr(args, "devices", None):
        device = machine.devices[0]
        machine = Machine.uniform(
            args.devices, device.flops_rate, device.mem_bandwidth, machine.interconnect
        )
    return machine


def _seed(args: argparse.Namespace, configuration: dict) -> int:
    return args.seed if args.seed is not None else default_seed(configuration)


# Commands


def cmd_generate(args, env: Environment) -> int:
    model = env.model(args.model)
    process = _process(model, args)
    g = model.generate(process, reuse=not args.no_reuse)
    logging.info(f"Generated {process} with {len(g)} nodes")
    _write(emit_graph_json(g), args.output)
    return EXIT_OK


def cmd_stats(args, env: Environment) -> int:
    g = _load_valid_graph(args.graph)
    stats = graph_stats(g)
    iterations = env.configuration["optimizer"]["hash_iterations"]
    stats["hash"] = canonical_hash(g, iterations=iterations)
    if not args.table:
        _write(json.dumps(stats, sort_keys=False), args.output)
        return EXIT_OK
    table = Table(title=args.graph)
    table.add_column("kernel")
    table.add_column("count", justify="right")
    table.add_column("share", justify="right")
    ratios = task_type_ratios(g)
    table.add_row("data", str(stats["data_nodes"]), f"{ratios.get('data', 0.0):.1%}")
    for tag, count in stats["per_kernel_counts"].items():
        table.add_row(tag, str(count), f"{ratios[tag]:.1%}")
    Console().print(table)
    Console().print(f"nodes={stats['nodes']} C={stats['C']} D={stats['D']} I={stats['I']}")
    return EXIT_OK


def cmd_optimize(args, env: Environment) -> int:
    g = _load_valid_graph(args.graph)
    log = []
    reduced, applied = reduce_to_fixpoint(g, order_seed=_seed(args, env.configuration), log=log)
    _write(emit_graph_json(reduced), args.output)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as f:
            for record in log:
                f.write(json.dumps(record.to_json()) + "\n")
    console.print(f"[bold blue]{applied} reductions, {len(g)} -> {len(reduced)} nodes[/bold blue]")
    return EXIT_OK


def cmd_schedule(args, env: Environment) -> int:
    g = _load_valid_graph(args.graph)
    machine = _machine(args, env.configuration)
    s = schedule(g, machine)
    document = s.to_json()
    document["estimated_runtime"] = estimate_runtime(g, s, machine)
    _write(json.dumps(document), args.output)
    return EXIT_OK


def _input_records(args, env: Environment, model: Model) -> list:
    if args.inputs:
        with open(args.inputs, "r", encoding="utf-8") as f:
            raw = json.load(f)
        if not isinstance(raw, list):
            raise UsageError("The inputs file must hold a JSON array of input records")
        process = _process(model, args) if args.process or args.n else None
        return [model.decode_input(process, record) for record in raw]
    samples = args.samples or (1 if args.random else 0)
    if not samples:
        raise UsageError("Give an inputs file, --random or --samples with a process")
    return model.sample_batch(_process(model, args), samples, _seed(args, env.configuration))


def cmd_run(args, env: Environment) -> int:
    g = _load_valid_graph(args.graph)
    model = env.model(args.model) if args.model else env.infer_model(g)
    kernels = model.kernels(env.configuration)
    plan = lower(g, schedule(g, _machine(args, env.configuration)))
    if args.dump_plan:
        with open(args.dump_plan, "w", encoding="utf-8") as f:
            json.dump(plan_to_json(plan), f)
    records = _input_records(args, env, model)
    result = execute_batch(bind(plan, kernels), kernels, records, args.workers)
    _write(json.dumps([_json_value(v) for v in result.values]), args.output)
    for index, error in sorted(result.errors.items()):
        console.print(f"[red]sample {index}: {type(error).__name__}: {error}[/red]")
    if any(isinstance(e, NumericFailure) for e in result.errors.values()):
        return EXIT_NUMERIC
    result.raise_first()
    return EXIT_OK


def cmd_emit_code(args, env: Environment) -> int:
    g = _load_valid_graph(args.graph)
    _write(emit_listing(g, schedule(g, _machine(args, env.configuration))), args.output)
    return EXIT_OK


def cmd_export_dot(args, env: Environment) -> int:
    _write(export_dot(_load_valid_graph(args.graph)), args.output)
    return EXIT_OK


def cmd_bench(args, env: Environment) -> int:
    model = env.model(args.model)
    bench = env.configuration["bench"]
    sizes = args.sizes or [args.n]
    processes = [_process(model, args, n) for n in sizes]
    reports = bench_sweep(
        model,
        processes,
        samples=args.samples or bench["samples"],
        seed=_seed(args, env.configuration),
        repetitions=max(args.repetitions or bench["repetitions"], 1),
        warmup=bench["warmup"],
        workers=args.workers or bench["workers"],
        exponents=tuple(bench["n_exponents"]),
        kernels=model.kernels(env.configuration),
        tol=env.configuration["numerics"]["comparison_tolerance"],
    )
    _write(export_csv(reports), args.output)
    table = Table(title=f"{model.tag} benchmark")
    for column in ("process", "nodes", "reduced", "t_o", "t_e", "t_e_opt", "C ratio", "speedup"):
        table.add_column(column, justify="right")
    for r in reports:
        table.add_row(
            r.process,
            str(r.nodes_unreduced),
            str(r.nodes),
            f"{r.t_opt:.3e}",
            f"{r.t_e:.3e}",
            f"{r.t_e_opt:.3e}",
            f"{r.flops_speedup:.2f}",
            f"{r.measured_speedup:.2f}",
        )
    console.print(table)
    return EXIT_OK


def cmd_break_even(args, env: Environment) -> int:
    inp = BreakEvenInput(args.t_e, args.t_e_opt, args.t_o, args.samples or 1)
    document = {"speedup": speedup(inp), "curve": speedup_curve(inp)}
    try:
        document["break_even_n"] = break_even_n(inp)
    except BenchError as e:
        console.print(f"[yellow]{e}[/yellow]")
        document["break_even_n"] = None
    _write(json.dumps(document), args.output)
    return EXIT_OK


def cmd_config(args, env: Environment) -> int:
    if args.open:
        info_message(f"Opening {USER_DIRECTORY}", should_print=True)
        open_config_folder()
    else:
        console.print(f"[bold blue]{CONFIG_FILE}[/bold blue]")
        _write(json.dumps(env.configuration, indent=4), None)
    return EXIT_OK


# Parser


def _add_process_arguments(parser: argparse.ArgumentParser, model_required: bool = True) -> None:
    parser.add_argument(
        "--model", "-m", required=model_required, help="qed, abc, strassen or example"
    )
    parser.add_argument("--process", "-p", default="", help='e.g. "e- Ngamma -> e- gamma"')
    parser.add_argument(
        "-n", "--n", type=int, default=None, help="value of N in the process string"
    )
    parser.add_argument("--spin-in", default="up")
    parser.add_argument("--spin-out", default="up")
    parser.add_argument(
        "--pol",
        "--polarizations",
        dest="polarizations",
        default="",
        help="k1=x,k2=y,... or one label per photon, e.g. x,y,k",
    )
    parser.add_argument("--cutoff", type=int, default=None, help="Strassen base block size")
    parser.add_argument("--shared", action="store_true", help="Strassen: multiply A by itself")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="cdag", description="Computable DAGs")
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("generate", help="build the graph of a process")
    _add_process_arguments(p)
    p.add_argument("--no-reuse", action="store_true", help="do not share subdiagrams")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", help="node counts and C, D, I of a graph")
    p.add_argument("graph")
    p.add_argument("--table", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("optimize", help="reduce a graph to its fixpoint")
    p.add_argument("graph")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--log", help="JSON lines file of applied operations")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("schedule", help="static schedule and runtime estimate")
    p.add_argument("graph")
    p.add_argument("--devices", type=int, default=None)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("run", help="execute a graph on input records")
    p.add_argument("graph")
    p.add_argument("--inputs", "-i", help="JSON array of input records")
    p.add_argument("--samples", type=int, default=0, help="random records instead of a file")
    p.add_argument("--random", action="store_true", help="one random record unless --samples")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-plan")
    p.add_argument("--output", "-o")
    _add_process_arguments(p, model_required=False)
    p.set_defaults(func=cmd_run, devices=None)

    p = sub.add_parser("emit-code", help="pseudo-code listing of the lowered graph")
    p.add_argument("graph")
    p.add_argument("--devices", type=int, default=None)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_emit_code)

    p = sub.add_parser("export-dot", help="Graphviz source of a graph")
    p.add_argument("graph")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("bench", help="time generation, reduction and execution")
    _add_process_arguments(p)
    p.add_argument("--sizes", type=int, nargs="*", help="process sizes to sweep")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", "-o", help="CSV file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("break-even", help="speedup including optimization time")
    p.add_argument("--t-e", type=float, required=True)
    p.add_argument("--t-e-opt", type=float, required=True)
    p.add_argument("--t-o", type=float, default=0.0)
    p.add_argument("--samples", type=float, default=None)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_break_even)

    p = sub.add_parser("config", help="show or open the configuration")
    p.add_argument("--open", action="store_true")
    p.set_defaults(func=cmd_config)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configuration = read_configuration()
    setup_logging(args.log_level or configuration["logging"]["level"])
    env = get_global_environment()
    env.configure(configuration)
    logging.info(f"cdag {args.command}")

    try:
        return args.func(args, env)
    except GraphFormatError as e:
        console.print(f"[red]Cannot read graph: {e}[/red]")
        return EXIT_USAGE
    except (GraphError, OperationError, PlanError) as e:
        logging.error(e)
        console.print(f"[red]{type(e).__name__}: {e}[/red]")
        return EXIT_VALIDATION
    except NumericFailure as e:
        logging.error(e)
        console.print(f"[red]{type(e).__name__}: {e}[/red]")
        return EXIT_NUMERIC
    except (ModelError, BenchError, UsageError, ValueError, OSError) as e:
        logging.error(e)
        console.print(f"[red]{e}[/red]")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
