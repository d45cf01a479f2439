"""Exception types raised by pipeline construction and refinement."""


class PipelineError(Exception):
    """Base class for all stepchain errors."""


class DuplicateName(PipelineError):
    """A step name is already taken at the same nesting level."""


class MissingName(PipelineError):
    """A step body has no derivable name and none was supplied."""


class UnknownStep(PipelineError):
    """A path segment names no step at its level."""


class NotNested(PipelineError):
    """A path descends through a step whose body is not a nested pipeline."""


class StaleRef(PipelineError):
    """A step handle is used after a structural change at its level."""


class CycleDetected(PipelineError):
    """A nested body would (transitively) contain its own host pipeline."""


class InvalidWrapperResult(PipelineError):
    """A wrap callback returned something that is not a usable step body."""


class UnknownTraitKey(PipelineError):
    """A trait key matches no direct step name (strict mode)."""


class InvalidTraitValue(PipelineError):
    """A trait value is neither a callable nor the absent marker."""


class InterfaceViolation(PipelineError):
    """The pipeline does not satisfy its declared interface."""


class ReservedName(PipelineError):
    """A refiner name collides with a built-in pipeline operation."""


class UnknownRefiner(PipelineError):
    """No refiner is registered under the requested name."""


class InvariantViolation(PipelineError):
    """A refiner left the step sequence invalid; the mutation was rolled back."""


class AlreadySettled(PipelineError):
    """A deferred value was resolved or rejected more than once."""
