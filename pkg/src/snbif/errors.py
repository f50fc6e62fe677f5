"""Exception types shared across the package."""


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario input; message carries the key path."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class NonConvergenceError(RuntimeError):
    """A pullback iteration hit its horizon cap before the Cauchy test passed."""

    def __init__(self, message, last_values=None, horizon=None):
        super().__init__(message)
        self.last_values = last_values
        self.horizon = horizon


class TrackingLostError(RuntimeError):
    """An equilibrium track could not be re-anchored; carries progress in [0,1]."""

    def __init__(self, message, progress=0.0):
        super().__init__(message)
        self.progress = progress
