"""modalweave package exports."""

from .algebra import FiniteBAO, complex_algebra, ultrafilter_frame, canonical_extension, validates_equation
from .config import AppConfig, LedgerConfig, LoggingConfig, SemanticsConfig
from .errors import BudgetExceeded, ParseError, WorkbenchError
from .formula import ModalFormula, Signature, format_formula, parse_formula
from .frames import Frame, Model
from .ledger import reproduce_claims
from .semantics import satisfies, valid_on_frame

__all__ = [
    "AppConfig",
    "SemanticsConfig",
    "LedgerConfig",
    "LoggingConfig",
    "WorkbenchError",
    "ParseError",
    "BudgetExceeded",
    "Signature",
    "ModalFormula",
    "parse_formula",
    "format_formula",
    "Frame",
    "Model",
    "satisfies",
    "valid_on_frame",
    "FiniteBAO",
    "complex_algebra",
    "ultrafilter_frame",
    "canonical_extension",
    "validates_equation",
    "reproduce_claims",
]
