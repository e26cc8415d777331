"""Exception hierarchy shared by the whole pipeline."""


class TropTangentError(Exception):
    """Base class; ``code`` is the machine readable tag used in JSON output."""

    code = "error"

    def __init__(self, message: str, cell=None):
        super().__init__(message)
        self.message = message
        self.cell = cell

    def to_json(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.cell is not None:
            body["cell"] = self.cell
        return {"error": body}


class RankError(TropTangentError):
    code = "rank"


class InputError(TropTangentError):
    code = "input"


class AssumptionError(TropTangentError):
    """An input violates a standing hypothesis of the construction."""

    code = "assumption"


class HypothesisError(TropTangentError):
    """A stage was requested for a curve outside its scope."""

    code = "hypothesis"


class DivergenceError(TropTangentError):
    code = "divergence"


class NotApplicable(TropTangentError):
    """A fast path's preconditions do not hold for this cell."""

    code = "not_applicable"


class ComplexError(TropTangentError):
    """A weighted complex is not balanced or has the wrong dimension."""

    code = "invalid_complex"


class InconsistencyError(TropTangentError):
    """Reconstructed data does not reproduce its input."""

    code = "inconsistency"
