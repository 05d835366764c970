import pytest

from cdag.environment import Environment, get_global_environment
from cdag.errors import UnknownModel
from cdag.Models import ExampleModel, QedModel, example_dag
from cdag.Models.ABC import AbcModel, generate_ab_dag
from cdag.Models.QED import ComptonProcess, generate_compton_dag
from cdag.Models.Strassen import StrassenConfig, generate_strassen_dag


def test_subscribe():
    env = Environment()
    model = QedModel()
    env.subscribe(model)
    assert env.model("qed") is model
    assert model.env is env
    with pytest.raises(UnknownModel):
        env.model("gluon")


def test_global_environment_knows_builtin_models():
    env = get_global_environment()
    assert {"qed", "abc", "strassen", "example"} <= set(env.models)
    assert get_global_environment() is env


@pytest.mark.parametrize(
    "g,tag",
    [
        (generate_compton_dag(ComptonProcess(1)), "qed"),
        (generate_ab_dag(1), "abc"),
        (generate_strassen_dag(StrassenConfig(4, 2)), "strassen"),
        (example_dag(), "example"),
    ],
)
def test_infer_model(g, tag):
    """The model is found from the kernel tags of the graph"""
    assert get_global_environment().infer_model(g).tag == tag


def test_no_model_owns_the_graph():
    env = Environment()
    env.subscribe(AbcModel())
    with pytest.raises(UnknownModel):
        env.infer_model(example_dag())


def test_kernels_use_configuration():
    """Kernels are built with the environment's configuration"""
    env = Environment(
        {
            "physics": {"abc": {"masses": {"A": 1.0, "B": 1.0, "C": 1.0}, "coupling": 1.0}},
            "numerics": {"propagator_guard": 1e-12, "on_shell_tolerance": 1e-8},
        }
    )
    env.subscribe(AbcModel())
    env.subscribe(ExampleModel())
    assert "ABC_V" in env.kernels("abc")
    assert env.kernels("example").tags == ["Affine", "Mul", "SinExp"]
