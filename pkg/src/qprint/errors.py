"""Exception types raised across the package."""


class QPrintError(Exception):
    """Base class for every error the package raises on purpose."""


class NumericalError(QPrintError):
    """A simulation or calculator left its trusted regime (CLI exit code 3)."""


class ZeroOnContour(NumericalError):
    pass


class Instability(NumericalError):
    pass


class AccuracyGuard(NumericalError):
    pass


class SolidAngleDegenerate(NumericalError):
    pass


class ResonanceError(NumericalError):
    pass


class PeriodMismatch(NumericalError):
    pass


class CutoffWarning(UserWarning):
    """Intermediate-state sum has not converged at the requested cutoff."""


class ConfigError(QPrintError):
    """Base for configuration problems (CLI exit code 2)."""


class ParseError(ConfigError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ValidationError(ConfigError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class FormatError(QPrintError):
    """Malformed snapshot file."""
