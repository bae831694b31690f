"""Toolkit exception types, shared by every module and mapped to CLI/HTTP codes."""


class ValidationError(ValueError):
    """An input violates a documented constraint; the message names the constraint."""


class InfeasibleError(RuntimeError):
    """A plan or command cannot be satisfied (e.g. power budget below a single heater)."""


class SingularSystemError(RuntimeError):
    """The assembled system has a floating substructure and cannot be solved."""

    def __init__(self, message: str, floating_nodes=None):
        super().__init__(message)
        self.floating_nodes = list(floating_nodes or [])


class TrimDisconnectionWarning(UserWarning):
    """Trimming split the lattice into multiple components (operation still applied)."""
