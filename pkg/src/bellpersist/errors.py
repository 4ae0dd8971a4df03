"""Shared exception types."""


class CapabilityError(ValueError):
    """The request exceeds a documented size cap of an exact routine."""


class NoCrossingError(RuntimeError):
    """A threshold crossing was not found inside the search window."""

    def __init__(self, message: str, window: tuple[int, int]):
        super().__init__(f"{message} (searched N in [{window[0]}, {window[1]}])")
        self.window = window
