"""Exception types shared across the package."""


class LevelCapError(RuntimeError):
    """Raised when a requested graph level exceeds the configured cap.

    8^m + 1 vertices grow too fast to build silently; the cap turns a
    would-be out-of-memory failure into an explicit error.
    """


class DivergedError(RuntimeError):
    """Raised when an explicit time-stepping run overflows to non-finite values."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"solution became non-finite at step {step}")
