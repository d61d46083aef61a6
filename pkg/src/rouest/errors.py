"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the documented domain of an operation."""


class PoleError(ValueError):
    """Function evaluated at a pole (non-positive integer gamma argument)."""


class ConvergenceError(RuntimeError):
    """An iterative scheme (series, quadrature) failed to converge."""


class BracketError(RuntimeError):
    """Root bracketing failed (window exhausted or no sign change)."""


class EstimationError(RuntimeError):
    """Failure in one stage of the estimation pipeline.

    ``stage`` names the stage that failed: "moments", "solve_uv",
    "basis", "solve_sigma" or "recover".
    """

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
