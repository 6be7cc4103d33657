class DomainError(ValueError):
    """Inputs fall outside an operation's domain (mismatched grids, bad points, ...)."""


class RefusalError(RuntimeError):
    """An operation declines to run: a size guard was hit or a precondition failed."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details
