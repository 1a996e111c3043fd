"""Exception hierarchy shared by all subsystems."""


class LoopspaceError(Exception):
    """Base class for all errors raised by loopspace_lab."""


class PreconditionError(LoopspaceError, ValueError):
    """An operation was called with inputs violating its contract."""


class AmbientMismatchError(PreconditionError):
    """Two values live in different ambient algebras."""


class DomainError(PreconditionError):
    """An evaluation point lies outside the admissible domain."""


class SingularInputError(PreconditionError):
    """Input sits at a singularity of the requested map (e.g. the origin
    for a radial projection)."""


class TangencyError(PreconditionError):
    """A vector field failed the tangency requirement along its base loop."""

    def __init__(self, message: str, max_defect: float):
        super().__init__(f"{message} (max defect {max_defect:.3e})")
        self.max_defect = max_defect


class ConstructionError(LoopspaceError):
    """A geometric construction could not be completed for the given data."""


class ResolutionError(PreconditionError):
    """The sample grid is too coarse to resolve the requested feature."""


class ConnectivityError(LoopspaceError):
    """No admissible path between the requested endpoints was found."""


class MetricError(LoopspaceError):
    """A pulled-back metric failed positive-semidefiniteness checks."""


class ConfigError(LoopspaceError, ValueError):
    """Invalid experiment configuration."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
