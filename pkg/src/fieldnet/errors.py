"""Exception types shared across the package.

Invalid arguments raise the builtin ``ValueError``; division by zero in a
field raises ``ZeroDivisionError``.
"""


class CapacityError(RuntimeError):
    """A configured size or search budget was exceeded.

    ``partial`` carries whatever results were produced before the limit hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


class InconsistencyError(RuntimeError):
    """A result guaranteed by construction failed re-verification."""
