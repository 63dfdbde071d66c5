"""
Исключения пакета fibered_reps
"""

from typing import Optional


class FiberedRepsError(Exception):
    pass


class FieldMismatchError(FiberedRepsError, ValueError):
    pass


class DimensionMismatchError(FiberedRepsError, ValueError):
    pass


class NotSquareError(DimensionMismatchError):
    pass


class OrderMismatchError(FiberedRepsError, ValueError):
    pass


class ReducibleFactorError(FiberedRepsError, ValueError):
    pass


class ModulusRequiredError(FiberedRepsError, ValueError):
    pass


class RootIndexError(FiberedRepsError, IndexError):
    pass


class IndeterminateError(FiberedRepsError, ArithmeticError):
    pass


class IllConditionedError(FiberedRepsError, ArithmeticError):
    pass


class RelatorError(FiberedRepsError, ValueError):
    """Релятор не обращается в единицу"""

    def __init__(self, relator: str, message: Optional[str] = None):
        self.relator = relator
        super().__init__(message or f"Relator {relator} is not satisfied")


class SpecValidationError(FiberedRepsError, ValueError):
    """Спецификация монодромии не прошла именованную проверку"""

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(f"{check}: {message}")


class SpecFileError(FiberedRepsError, ValueError):

    def __init__(self, field: str, message: str, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}{location}: {message}")
