from typing import Optional, TYPE_CHECKING

from .errors import UnknownModel

if TYPE_CHECKING:
    from .Graph.Cdag import Cdag
    from .Models.Base import Model


class Environment:
    """The Environment class is a global object that holds the models known to the system."""

    def __init__(self, configuration: Optional[dict] = None):
        self._models: dict[str, "Model"] = {}
        self.configuration = configuration

    @property
    def models(self) -> dict[str, "Model"]:
        """Return the registered models, keyed by tag"""
        return self._models

    def subscribe(self, model: "Model") -> None:
        """Register a model with the environment
        Args:
            model: The model to register, reachable afterwards under `model.tag`

        """
        self._models[model.tag] = model
        model.env = self
        if self.configuration is not None:
            model.configure(self.configuration)

    def configure(self, configuration: dict) -> None:
        """Set the configuration and hand it to every registered model"""
        self.configuration = configuration
        for model in self._models.values():
            model.configure(configuration)

    def model(self, tag: str) -> "Model":
        """Return the model registered under `tag`

        Raises:
            UnknownModel
        """
        try:
            return self._models[tag]
        except KeyError:
            raise UnknownModel(f"Unknown model {tag!r}, expected one of {sorted(self._models)}")

    def infer_model(self, g: "Cdag") -> "Model":
        """Return the first model whose kernels cover every compute node of `g`

        Raises:
            UnknownModel
        """
        for model in self._models.values():
            if model.owns(g):
                return model
        raise UnknownModel("No registered model provides all kernels of the graph")

    def kernels(self, tag: str):
        """Kernel registry of a model, built from the environment's configuration"""
        return self.model(tag).kernels(self.configuration)


environment = Environment()


def get_global_environment() -> Environment:
    """Return the global environment, registering the built-in models on first use"""
    if not environment.models:
        from .Models import AbcModel, ExampleModel, QedModel, StrassenModel

        for model in (QedModel(), AbcModel(), StrassenModel(), ExampleModel()):
            environment.subscribe(model)
    return environment
