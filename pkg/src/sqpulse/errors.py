"""Exception hierarchy shared by the engines and the command line."""


class SqpulseError(Exception):
    """Base class for all package errors."""


class ParameterError(SqpulseError, ValueError):
    """Physical parameters outside the validity range of the model."""


class DimensionError(SqpulseError, ValueError):
    """Operand shapes do not agree."""


class NumericFailure(SqpulseError, RuntimeError):
    """A numerical result violated a physical bound."""


class CutoffError(NumericFailure):
    """Population reached the top of the truncated Fock space."""


class PositivityError(NumericFailure):
    """Density matrix acquired a negative eigenvalue beyond tolerance."""


class TruncationError(NumericFailure):
    """Too much weight outside the {0, 1} photon subspace for a two-qubit metric."""


class ConvergenceError(NumericFailure):
    """Quadrature did not converge within its node limit."""


class ConfigError(SqpulseError):
    """Malformed or inconsistent sweep configuration."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
