"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge or produced an unusable result.

    Carries the last residual so callers can report how far off the
    computation ended.
    """

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual
