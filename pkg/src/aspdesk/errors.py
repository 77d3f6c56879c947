"""Exception hierarchy shared across the workbench.

Every error carries a stable machine-readable code so the CLI and the HTTP
service can map failures onto documented envelopes without string matching.
"""


class AspDeskError(Exception):
    code = "internal-error"

    def __init__(self, message, *, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    @property
    def message(self) -> str:
        return str(self)


class ModelError(AspDeskError):
    """A model invariant was violated while constructing a value."""

    code = "model-error"


class UnknownDialectError(AspDeskError):
    code = "unknown-dialect"


class UnsupportedConstructError(AspDeskError):
    code = "unsupported-construct"


class EvaluationError(AspDeskError):
    code = "evaluation-error"


class SafetyError(AspDeskError):
    code = "unsafe-program"


class CapacityError(AspDeskError):
    code = "capacity-exceeded"


class ConsistencyError(AspDeskError):
    code = "inconsistent-interpretation"


class NonGroundError(AspDeskError):
    code = "non-ground-literal"


class FormatError(AspDeskError):
    """Solver output (or an interpretation text) did not match the expected shape."""

    code = "format-error"

    def __init__(self, message, *, line=None):
        super().__init__(message)
        self.line = line


class LaunchError(AspDeskError):
    code = "launch-error"


class ToolFailureError(AspDeskError):
    code = "tool-failure"

    def __init__(self, message, *, raw_errors=""):
        super().__init__(message)
        self.raw_errors = raw_errors


class IntegrityError(AspDeskError):
    code = "registry-integrity"


class ConflictError(AspDeskError):
    code = "conflict"


class NotFoundError(AspDeskError):
    code = "not-found"


class DanglingReferenceError(AspDeskError):
    code = "dangling-reference"


class VocabularyError(AspDeskError):
    code = "vocabulary-error"


class SceneError(AspDeskError):
    code = "scene-error"


class VisualizationUnsatError(AspDeskError):
    code = "visualization-unsat"


class AbductionUnsatError(AspDeskError):
    code = "abduction-unsat"


class OperationCancelled(AspDeskError):
    code = "cancelled"
