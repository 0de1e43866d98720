"""Exception types shared across the planners, simulator, and service."""


class PlanningError(Exception):
    """Base class for all planning failures."""


class SceneFormatError(PlanningError):
    """Scene or shot-spec input does not match the documented schema."""


class DegenerateSceneError(PlanningError):
    """Scene geometry does not admit planning (coincident subjects, ...)."""


class DegeneratePoseError(PlanningError):
    """Camera pose with undefined roll (view direction vertical) or zero extent."""


class UnreachableFramingError(PlanningError):
    """Screen-space placement iteration failed to converge."""


class InfeasibleError(PlanningError):
    """No constraint-satisfying plan exists (or was found) for this request."""


class UnstretchableError(PlanningError):
    """Time-stretching cannot fix the reported violation (duration-independent limit)."""

    def __init__(self, message: str, quantity: str | None = None):
        super().__init__(message)
        self.quantity = quantity


class BusyError(PlanningError):
    """A shot command arrived while a transition is already executing."""
