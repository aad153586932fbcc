class EhrhartError(Exception): ...


class ParameterError(EhrhartError, ValueError): ...


class MalformedSamplesError(EhrhartError, ValueError): ...


class BudgetExceededError(EhrhartError): ...


class PolytopeError(EhrhartError): ...


class ChiselPreconditionError(PolytopeError): ...


class UnboundedSystemError(PolytopeError): ...


class NonIntegralVertexError(PolytopeError): ...


class PolytopeFileError(PolytopeError): ...


class PlanStageError(PolytopeError):
    """A chiseling stage whose depth is too large for the current edges."""

    def __init__(self, stage: int, message: str):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage
