from typing import Any, Dict


class StmodError(Exception):
    """Base class for every error raised by ray-stmod.

    Keyword arguments passed to the constructor are kept as ``context``
    and end up in the machine-readable error object printed by the CLI.
    """

    def __init__(self, message: str = "", **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        ret = {"error": type(self).__name__, "message": self.message}
        ret.update(
            {k: v
             for k, v in self.context.items() if v is not None})
        return ret


class DivisionByZero(StmodError, ZeroDivisionError):
    pass


class FieldMismatch(StmodError, TypeError):
    pass


class ShapeError(StmodError, ValueError):
    pass


class NoSolution(StmodError, ValueError):
    """Raised by exact solves; ``context["columns"]`` lists the
    right-hand-side columns that are inconsistent."""


class GroupTooLarge(StmodError, ValueError):
    pass


class NotARepresentation(StmodError, ValueError):
    pass


class NotEquivariant(StmodError, ValueError):
    pass


class Mismatch(StmodError, ValueError):
    pass


class DecompositionInconclusive(StmodError, RuntimeError):
    pass


class CapExceeded(StmodError, RuntimeError):
    pass


class ParseError(StmodError, ValueError):
    pass


class UsageError(StmodError, ValueError):
    pass
