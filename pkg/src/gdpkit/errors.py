"""Exception hierarchy shared by all subpackages."""


class GdpError(Exception):
    """Base class for toolkit errors."""


class FormulaSyntaxError(GdpError, ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


class SortError(GdpError, TypeError):
    pass


class UnboundVariable(GdpError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}" if self.args else "unbound variable"


class NotPresburger(GdpError):
    pass


class BoxTooLarge(GdpError):
    pass


class UnsupportedAtom(GdpError):
    pass


class DegenerateTerm(GdpError):
    pass


class NotAFunction(GdpError):
    pass


class NotFiberConstant(GdpError):
    pass


class NonLinearExponent(GdpError):
    pass


class UnboundParameter(GdpError, KeyError):
    pass


class ModelRequired(GdpError):
    pass


class NotClearable(GdpError):
    pass


class InsufficientPrecision(GdpError):
    pass


class NotMeasurableFragment(GdpError):
    pass


class BudgetExceeded(GdpError):
    pass


class NoFit(GdpError):
    pass


class InsufficientDepth(GdpError):
    pass


class NotRectilinearizable(GdpError):
    """Raised when no coordinate order yields a product decomposition."""
