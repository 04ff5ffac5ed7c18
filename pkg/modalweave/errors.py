"""Exception hierarchy shared by the library and the command line."""

from __future__ import annotations

from typing import Optional


class WorkbenchError(Exception):
    """Base class; `code` is the stable one-line tag printed by the CLI."""

    code = "E_PARAM"


class ParseError(WorkbenchError):
    code = "E_PARSE"

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class UnknownModality(WorkbenchError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown modality '{name}'")


class UnknownWorld(WorkbenchError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown world '{name}'")


class BadParameter(WorkbenchError):
    pass


class NotPointGenerated(WorkbenchError):
    pass


class BudgetExceeded(WorkbenchError):
    code = "E_BUDGET"

    def __init__(self, required_bits: int, evaluations: int, budget: int):
        self.required_bits = required_bits
        self.evaluations = evaluations
        self.budget = budget
        super().__init__(
            f"needs {required_bits} valuation bits ({evaluations} evaluations), budget is {budget}"
        )


class FileFormatError(WorkbenchError):
    code = "E_IO"
