"""Exception hierarchy shared by every module."""


class PivotGraphError(Exception):
    pass


class InputError(PivotGraphError, ValueError):
    """Malformed input or a violated precondition."""


class DataInconsistencyError(InputError):
    """Fiber data that passes schema validation but is arithmetically impossible."""

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class CapacityError(PivotGraphError):
    """A group or subgroup enumeration would exceed its configured cap.

    Kept separate from InputError so the verifier can log a skip instead of
    reporting a failure.
    """
