"""Exception types raised across the toolkit."""


class ParikhKitError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(ParikhKitError, ValueError):
    pass


class SolverCapExceeded(ParikhKitError):
    """The linear Diophantine solver explored more candidates than allowed."""


class SupportEnumerationCapExceeded(ParikhKitError):
    pass


class MonoidCapExceeded(ParikhKitError):
    """Matrix saturation did not close within the cap; the monoid is likely infinite."""


class NotBoundedError(ParikhKitError):
    pass


class SocleViolation(ParikhKitError):
    pass


class ConstraintDeterminismUnverified(ParikhKitError):
    pass


class ModelFormatError(ParikhKitError, ValueError):
    """A model file could not be parsed."""
