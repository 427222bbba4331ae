"""Shared exception types."""


class MalformedInput(ValueError):
    """Input violates a documented precondition or schema."""


class RefinementExhausted(RuntimeError):
    """Generator could not be refined deeply enough within the generation cap."""


class ScheduleInfeasible(RuntimeError):
    """The perturbation budget collapsed below the configured minimum step."""


class VerificationFailed(AssertionError):
    """An internal guarantee that is proven to hold failed to re-verify."""


class VacuousDefect(ValueError):
    """The gap-constrained triple set is empty; no minimum defect exists."""
