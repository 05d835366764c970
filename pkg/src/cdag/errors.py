class CdagError(Exception): ...


# Graph structure


class GraphError(CdagError): ...


class UnknownNode(GraphError): ...


class KindViolation(GraphError): ...


class DuplicateEdge(GraphError): ...


class MultipleProducers(GraphError): ...


class CycleDetected(GraphError): ...


class NotAComputeNode(GraphError): ...


class NotSingleExit(GraphError): ...


class ValidationFailed(GraphError):
    """Raised from a non-empty ValidationReport."""

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class GraphFormatError(GraphError): ...


# Graph operations


class OperationError(CdagError): ...


class StaleGroup(OperationError): ...


class NotSplittable(OperationError): ...


class SignatureMismatch(OperationError): ...


# Plans and execution


class PlanError(CdagError): ...


class UnboundEntry(PlanError): ...


class UnknownKernel(PlanError): ...


class KernelMismatch(PlanError): ...


class SSAViolation(PlanError): ...


class InputMismatch(PlanError): ...


class InvalidSchedule(PlanError): ...


# Numerics


class NumericFailure(CdagError): ...


class NearSingularPropagator(NumericFailure): ...


class OffShell(NumericFailure): ...


class BelowThreshold(NumericFailure): ...


class KernelFailure(NumericFailure):
    """A kernel raised an exception of its own, such as a numpy LinAlgError."""


# Models


class ModelError(CdagError): ...


class KindMismatch(ModelError): ...


class OverlappingAbsorbedSets(ModelError): ...


class IncompleteDiagram(ModelError): ...


class InvalidProcess(ModelError): ...


class ProcessSyntaxError(InvalidProcess): ...


class UnknownModel(ModelError): ...


class BadDimensions(ModelError): ...


class OutOfBounds(ModelError): ...


class DimensionMismatch(ModelError): ...


# Benchmarks


class BenchError(CdagError): ...


class NoBreakEven(BenchError): ...
