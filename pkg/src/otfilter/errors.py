"""Exception types shared across the package."""


class FilterDegeneracyError(RuntimeError):
    """All importance weights collapsed to numerical zero."""

    def __init__(self, message, step_index=None, diagnostics=None):
        super().__init__(message)
        self.step_index = step_index
        self.diagnostics = diagnostics or {}


class FilterDivergenceError(RuntimeError):
    """A state sample left the finite range during propagation."""

    def __init__(self, message, step_index=None, hypothesis=None, member=None):
        super().__init__(message)
        self.step_index = step_index
        self.hypothesis = hypothesis
        self.member = member


class TransportError(RuntimeError):
    """The transport solver could not produce a feasible coupling."""
