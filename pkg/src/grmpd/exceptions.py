class CapExceeded(RuntimeError):
    """An exhaustive computation would exceed its configured size cap."""


class InfoSetError(ValueError):
    """A position set is not an information set of the code."""


class DecodeFailure(RuntimeError):
    """Every permutation composite was tried without passing the syndrome test."""

    def __init__(self, message, perms_tried=0):
        super().__init__(message)
        self.perms_tried = perms_tried
