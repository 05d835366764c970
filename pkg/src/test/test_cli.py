import csv
import io
import json
import math

import numpy as np
import pytest

from cdag import configuration as config
from cdag.__main__ import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from cdag.Graph import canonical_hash, load_graph, save_graph
from cdag.Models import example_dag, example_value


@pytest.fixture(autouse=True)
def user_directory(tmp_path, monkeypatch):
    directory = tmp_path / "user"
    monkeypatch.setattr(config, "USER_DIRECTORY", str(directory))
    monkeypatch.setattr(config, "CONFIG_FILE", str(directory / "config.json"))
    monkeypatch.setattr(config, "LOG_FILE", str(directory / "cdag.log"))
    monkeypatch.delenv(config.SEED_VARIABLE, raising=False)
    return directory


@pytest.fixture
def example_graph(tmp_path):
    path = tmp_path / "example.json"
    save_graph(example_dag(), str(path))
    return path


def test_generate_and_stats(tmp_path):
    graph = tmp_path / "compton.json"
    stats = tmp_path / "stats.json"
    assert main(["generate", "-m", "qed", "-p", "e- Ngamma -> e- gamma", "-n", "1", "-o", str(graph)]) == EXIT_OK
    assert len(load_graph(str(graph))) == 26
    assert main(["stats", str(graph), "-o", str(stats)]) == EXIT_OK
    document = json.loads(stats.read_text())
    assert document["nodes"] == 26
    assert document["per_kernel_counts"]["QED_S2"] == 2
    assert document["hash"] == canonical_hash(load_graph(str(graph)), iterations=8)


def test_generate_is_deterministic(tmp_path):
    outputs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        main(["generate", "-m", "abc", "-n", "3", "-o", str(path)])
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_optimize_reduces_unreduced_graph(tmp_path):
    graph, reduced, log = tmp_path / "g.json", tmp_path / "r.json", tmp_path / "ops.jsonl"
    main(["generate", "-m", "qed", "-n", "2", "--no-reuse", "-o", str(graph)])
    assert main(["optimize", str(graph), "--seed", "3", "--log", str(log), "-o", str(reduced)]) == EXIT_OK
    before, after = load_graph(str(graph)), load_graph(str(reduced))
    assert len(after) < len(before)
    records = [json.loads(line) for line in log.read_text().splitlines()]
    assert records and all(r["op"] == "reduce" for r in records)
    assert all(r["dC"] <= 0 for r in records)


def test_run_example(example_graph, tmp_path):
    inputs, output = tmp_path / "inputs.json", tmp_path / "out.json"
    inputs.write_text(json.dumps([[0.5, 1.0], [0.0, 0.4]]))
    assert main(["run", str(example_graph), "-i", str(inputs), "-o", str(output)]) == EXIT_OK
    values = json.loads(output.read_text())
    assert values[0] == pytest.approx(example_value(0.5, 1.0))
    assert values[1] == pytest.approx(0.0, abs=1e-12)


def test_run_sampled_compton(tmp_path):
    graph, output, plan = tmp_path / "g.json", tmp_path / "out.json", tmp_path / "plan.json"
    main(["generate", "-m", "qed", "-n", "1", "-o", str(graph)])
    code = main(
        ["run", str(graph), "-n", "1", "--samples", "4", "--workers", "2", "--dump-plan", str(plan), "-o", str(output)]
    )
    assert code == EXIT_OK
    values = json.loads(output.read_text())
    assert len(values) == 4
    assert all(v > 0.0 for v in values)
    assert json.loads(plan.read_text())


def test_polarizations_by_photon_number(tmp_path):
    """`--pol k2=y` sets the outgoing photon of a one-photon process, k1 stays x"""
    graph = tmp_path / "g.json"
    assert main(["generate", "-m", "qed", "--n", "1", "--pol", "k2=y", "-o", str(graph)]) == EXIT_OK
    g = load_graph(str(graph))
    states = {
        g.task(v).params["index"]: g.task(v).params["state"]
        for v in g.compute_nodes
        if g.task(v).kernel_tag == "QED_U" and g.task(v).params["species"] == "photon"
    }
    assert states == {1: "x", 3: "y"}


def test_run_random_strassen(tmp_path):
    """`--random` draws one input record"""
    graph, output = tmp_path / "g.json", tmp_path / "out.json"
    shape = ["-m", "strassen", "--n", "4", "--cutoff", "2"]
    assert main(["generate", *shape, "-o", str(graph)]) == EXIT_OK
    assert main(["run", str(graph), *shape, "--random", "--seed", "3", "-o", str(output)]) == EXIT_OK
    values = json.loads(output.read_text())
    assert len(values) == 1
    assert np.asarray(values[0]).shape == (4, 4)


def test_off_shell_input_exits_3(tmp_path):
    graph, inputs = tmp_path / "g.json", tmp_path / "inputs.json"
    main(["generate", "-m", "qed", "-n", "1", "-o", str(graph)])
    record = [[2.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 1.0]]
    inputs.write_text(json.dumps([record]))
    assert main(["run", str(graph), "-i", str(inputs), "-o", str(tmp_path / "out.json")]) == EXIT_NUMERIC


def test_invalid_graph_exits_2(tmp_path):
    """A compute node without an output is not a valid graph"""
    path = tmp_path / "bad.json"
    path.write_text(
        json.dumps(
            {
                "nodes": [
                    {"id": 0, "kind": "data", "kernel": "Input", "params": {"input_index": 0}},
                    {"id": 1, "kind": "compute", "kernel": "Mul", "params": {}, "effort": 1},
                ],
                "edges": [[0, 1]],
            }
        )
    )
    assert main(["stats", str(path)]) == EXIT_VALIDATION


def test_malformed_graph_exits_4(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    assert main(["stats", str(path)]) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "-m", "gluon", "-n", "1"],
        ["generate", "-m", "abc", "-n", "2"],
        ["generate", "-m", "qed", "-p", "e- -> e- gamma"],
        ["break-even", "--t-e", "0", "--t-e-opt", "1"],
        ["generate", "-m", "qed", "-n", "1", "--pol", "k3=y"],
        ["generate", "-m", "qed", "-n", "1", "--pol", "k1=z"],
        ["generate", "-m", "qed", "-n", "1", "--pol", "photon1=y"],
    ],
)
def test_usage_errors_exit_4(argv):
    assert main(argv) == EXIT_USAGE


def test_argparse_errors_exit_4():
    with pytest.raises(SystemExit) as e:
        main(["transmogrify"])
    assert e.value.code == EXIT_USAGE


def test_schedule_two_devices(example_graph, tmp_path):
    output = tmp_path / "schedule.json"
    assert main(["schedule", str(example_graph), "--devices", "2", "-o", str(output)]) == EXIT_OK
    document = json.loads(output.read_text())
    assert len(document["steps"]) == 8
    assert {device for _, device in document["steps"]} <= {0, 1}
    assert document["estimated_runtime"] > 0.0


def test_emit_code_and_dot(example_graph, tmp_path):
    listing, dot = tmp_path / "listing.txt", tmp_path / "g.dot"
    assert main(["emit-code", str(example_graph), "-o", str(listing)]) == EXIT_OK
    assert listing.read_text().strip().splitlines()[-1].startswith("return")
    assert main(["export-dot", str(example_graph), "-o", str(dot)]) == EXIT_OK
    assert dot.read_text().startswith("digraph")


def test_bench_csv(tmp_path):
    output = tmp_path / "bench.csv"
    code = main(
        ["bench", "-m", "qed", "--sizes", "1", "2", "--samples", "2", "--repetitions", "1", "-o", str(output)]
    )
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(output.read_text())))
    assert rows[0][:3] == ["n", "nodes", "C"]
    assert [row[0] for row in rows[1:]] == ["1", "2"]


def test_break_even(capsys):
    assert main(["break-even", "--t-e", "2", "--t-e-opt", "1", "--t-o", "10", "--samples", "10"]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["break_even_n"] == pytest.approx(10.0)
    assert document["speedup"] == pytest.approx(1.0)
    assert len(document["curve"]) == 9


def test_break_even_never(capsys):
    assert main(["break-even", "--t-e", "1", "--t-e-opt", "2"]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["break_even_n"] is None
    assert not math.isnan(document["speedup"])


def test_config_shows_defaults(capsys):
    assert main(["config"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["device"]["count"] == 1
