"""Exception types raised across the package."""


class FolnerLabError(Exception):
    pass


class RecipeTooLarge(FolnerLabError):
    pass


class InvalidMetric(FolnerLabError):
    pass


class TruncationError(FolnerLabError):
    """An ambient-exact query touched points whose ambient ball leaves the window."""


class EmptySet(FolnerLabError):
    pass


class BudgetExceeded(FolnerLabError):
    """Search budget exhausted before any candidate met the target.

    ``best`` holds the best certificate seen (may be None) and ``examined``
    the number of candidates evaluated.
    """

    def __init__(self, message, best=None, examined=0):
        super().__init__(message)
        self.best = best
        self.examined = examined


class FixedPointPresent(FolnerLabError):
    def __init__(self, fixed_points):
        super().__init__(f"partial translation has fixed points: {sorted(fixed_points)[:10]}")
        self.fixed_points = sorted(fixed_points)


class WindowMismatch(FolnerLabError):
    pass


class PreconditionFailed(FolnerLabError):
    pass


class ZeroProjection(FolnerLabError):
    pass


class DependentBasis(FolnerLabError):
    pass


class UnsaturatedWindow(FolnerLabError):
    def __init__(self, offenders):
        super().__init__(f"window not saturated; offending points: {sorted(offenders)[:10]}")
        self.offenders = sorted(offenders)


class RangeOverlap(FolnerLabError):
    pass


class InvalidCertificate(FolnerLabError):
    pass


class ConfigError(FolnerLabError):
    pass


class TaskFailure(FolnerLabError):
    pass
