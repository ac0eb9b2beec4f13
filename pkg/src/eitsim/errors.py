"""Exception types shared across the package."""


class EITError(Exception):
    """Base class for all errors raised by eitsim."""


class PoleError(EITError, ArithmeticError):
    """A closed-form response hit an exact pole.

    ``where`` names the offending term (``"total"``, ``"loop2"``, ...) and
    ``omega`` the drive frequency at which it occurred, when known.
    """

    def __init__(self, message, where=None, omega=None):
        super().__init__(message)
        self.where = where
        self.omega = omega


class NetlistError(EITError, ValueError):
    """Malformed netlist text. Carries 1-based ``line`` and ``column``."""

    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class SingularCircuitError(EITError, ArithmeticError):
    """The nodal matrix is singular (floating node, shorted source, ...)."""

    def __init__(self, message, pivot_index, omega=None):
        super().__init__(message)
        self.pivot_index = pivot_index
        self.omega = omega


class SolverCheckError(EITError, ArithmeticError):
    """A post-solve consistency check (KCL, Tellegen) exceeded tolerance."""


class IntegrationError(EITError, ArithmeticError):
    """The time-domain integrator diverged or was misconfigured."""


class NotApplicable(EITError):
    """A check was skipped because its preconditions cannot be met."""
