# errors.py
from typing import Iterable, Optional, Tuple


class QctlError(Exception):
    """Base class for every error the toolkit reports to callers."""

    message_key = "error_generic"

    def message_args(self) -> dict:
        return {"detail": str(self), "where": ""}


# --- syntax -----------------------------------------------------------------

class QctlSyntaxError(QctlError):
    message_key = "error_syntax"

    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None,
                 expected: Iterable[str] = ()):
        self.detail = detail
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))
        where = f"{line}:{column}: " if line is not None else ""
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{detail}{hint}")

    def message_args(self) -> dict:
        return {
            "line": self.line if self.line is not None else "?",
            "column": self.column if self.column is not None else "?",
            "detail": self.detail,
            "expected": ", ".join(self.expected) or "-",
        }


# --- well-formedness --------------------------------------------------------

class WellFormednessError(QctlError):
    """``span`` is the (line, column) of the offending statement when it was parsed from text."""

    message_key = "error_wellformed"
    span: Optional[Tuple[int, int]] = None

    def message_args(self) -> dict:
        args = super().message_args()
        if self.span is not None:
            args["where"] = f" at {self.span[0]}:{self.span[1]}"
        return args


class VarMissing(WellFormednessError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"variable '{var}' is not in the environment")


class VarClash(WellFormednessError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"variable '{var}' is already in the environment")


class BranchMismatch(WellFormednessError):
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"branches end in different environments: {left} vs {right}")


class ControlCaptured(WellFormednessError):
    def __init__(self, var: str):
        self.var = var
        super().__init__(f"qcase control '{var}' occurs inside a branch")


class WhileShape(WellFormednessError):
    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"loop body must return {expected}, returns {got}")


class NotWellFormed(WellFormednessError):
    def __init__(self, detail: str, span: Optional[Tuple[int, int]] = None):
        super().__init__(detail)
        self.span = span


# --- environments -----------------------------------------------------------

class EnvError(QctlError):
    message_key = "error_env"


class EnvOverlap(EnvError):
    pass


class EnvMismatch(EnvError):
    pass


class ControlInEnv(EnvError):
    pass


# --- linear algebra ---------------------------------------------------------

class LinalgError(QctlError):
    message_key = "error_linalg"


class ShapeMismatch(LinalgError):
    pass


class NotHermitian(LinalgError):
    pass


class InvalidKraus(LinalgError):
    pass


class NotUnitary(LinalgError):
    pass


class NotSubUnitary(LinalgError):
    pass


class QubitCapExceeded(LinalgError):
    pass


class MatrixFormatError(QctlError):
    message_key = "error_input"


# --- evaluation and analysis ------------------------------------------------

class IllFormed(QctlError):
    message_key = "error_wellformed"


class ZeroInput(QctlError):
    message_key = "error_input"

    def __init__(self, detail: str = "input state has norm zero"):
        super().__init__(detail)


class NonConvergence(QctlError):
    """Kleene iteration hit its cap; ``result`` is the last iterate, a lower bound of the fixpoint."""

    message_key = "error_nonconvergence"

    def __init__(self, residual: float, iterations: int, result=None):
        self.residual = residual
        self.iterations = iterations
        self.result = result
        super().__init__(f"no fixpoint after {iterations} iterations (residual {residual:.3e})")

    def message_args(self) -> dict:
        return {"iterations": self.iterations, "residual": f"{self.residual:.3e}"}


class NotDistinct(QctlError):
    message_key = "error_generic"


class InvalidVacExt(QctlError):
    message_key = "error_generic"
