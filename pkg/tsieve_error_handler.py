"""
Trinomial Sieve error handling.
Exception hierarchy, error categorization, statistics and the CLI exit-code contract.
"""

import functools
from collections import deque
import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Callable, Deque, Dict, Optional


class ErrorSeverity(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    INPUT = "input"
    SCHEMA = "schema"
    ARITHMETIC = "arithmetic"
    PRECONDITION = "precondition"
    SOUNDNESS = "soundness"
    UNKNOWN = "unknown"


class TrinomialSieveError(Exception):
    """Base class of every error raised by the library."""
    category = ErrorCategory.UNKNOWN


class InputError(TrinomialSieveError):
    """Malformed user input: bad rationals, bad schema, non-isolating rectangles."""
    category = ErrorCategory.INPUT


class SchemaError(InputError):
    """A job document that does not match the schema."""
    category = ErrorCategory.SCHEMA


class FieldArithmeticError(TrinomialSieveError):
    """Division by the zero element, elements of different fields."""
    category = ErrorCategory.ARITHMETIC


class PreconditionError(TrinomialSieveError):
    """An operation was called outside its documented domain."""
    category = ErrorCategory.PRECONDITION


class SoundnessError(TrinomialSieveError):
    """A certificate failed to re-validate. Always a bug."""
    category = ErrorCategory.SOUNDNESS


class TheoryViolation(SoundnessError):
    """A proven statement was refuted on a concrete instance."""


EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOUNDNESS = 2

HISTORY_LIMIT = 100


@dataclass
class ErrorInfo:
    """Detailed error information"""
    error_id: str
    category: ErrorCategory
    severity: ErrorSeverity
    message: str
    exit_code: int
    timestamp: datetime
    context: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "error_id": self.error_id,
            "category": self.category.value,
            "severity": self.severity.value,
            "message": self.message,
            "exit_code": self.exit_code,
        }


def exit_code_for(exception: BaseException) -> int:
    if isinstance(exception, SoundnessError) or isinstance(exception, AssertionError):
        return EXIT_SOUNDNESS
    if isinstance(exception, TrinomialSieveError):
        return EXIT_INPUT
    if isinstance(exception, (ValueError, KeyError, OSError, UnicodeDecodeError)):
        return EXIT_INPUT
    return EXIT_SOUNDNESS


class ErrorReporter:
    """Categorizes, logs and counts errors surfaced to the CLI."""

    def __init__(self):
        self.logger = logging.getLogger('tsieve.errors')
        # Fallback when the exception type alone does not say enough.
        self.error_patterns = {
            ErrorCategory.SCHEMA: [
                'validation error', 'extra inputs', 'field required', 'json', 'schema'
            ],
            ErrorCategory.INPUT: [
                'not a rational', 'rectangle', 'isolat', 'duplicate', 'zero element', 'preset'
            ],
            ErrorCategory.ARITHMETIC: [
                'division by zero', 'different fields', 'not invertible'
            ],
            ErrorCategory.SOUNDNESS: [
                'certificate', 'soundness', 'theory violation'
            ],
        }
        self.error_history: Deque[ErrorInfo] = deque(maxlen=HISTORY_LIMIT)
        self.category_counts: Dict[str, int] = {}
        self.severity_counts: Dict[str, int] = {}

    def categorize_error(self, exception: BaseException) -> ErrorCategory:
        if isinstance(exception, TrinomialSieveError) and exception.category is not ErrorCategory.UNKNOWN:
            return exception.category
        if isinstance(exception, AssertionError):
            return ErrorCategory.SOUNDNESS
        text = f"{type(exception).__name__} {exception}".lower()
        for category, patterns in self.error_patterns.items():
            for pattern in patterns:
                if pattern in text:
                    return category
        return ErrorCategory.UNKNOWN

    def determine_severity(self, category: ErrorCategory) -> ErrorSeverity:
        if category == ErrorCategory.SOUNDNESS:
            return ErrorSeverity.CRITICAL
        elif category == ErrorCategory.UNKNOWN:
            return ErrorSeverity.HIGH
        elif category in [ErrorCategory.ARITHMETIC, ErrorCategory.PRECONDITION]:
            return ErrorSeverity.MEDIUM
        else:
            return ErrorSeverity.LOW

    def handle_error(self, exception: BaseException, context: Optional[Dict[str, Any]] = None) -> ErrorInfo:
        error_id = f"ERR_{datetime.now().strftime('%Y%m%d_%H%M%S')}_{id(exception)}"
        category = self.categorize_error(exception)
        severity = self.determine_severity(category)
        if category == ErrorCategory.SOUNDNESS:
            exit_code = EXIT_SOUNDNESS
        elif category == ErrorCategory.UNKNOWN:
            exit_code = exit_code_for(exception)
        else:
            exit_code = EXIT_INPUT

        error_info = ErrorInfo(
            error_id=error_id,
            category=category,
            severity=severity,
            message=str(exception) or type(exception).__name__,
            exit_code=exit_code,
            timestamp=datetime.now(),
            context=context or {},
        )

        log = self.logger.error if severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL) else self.logger.warning
        log(f"Error {error_id}: {error_info.message} (Category: {category.value}, Severity: {severity.value})")

        self.error_history.append(error_info)
        self.category_counts[category.value] = self.category_counts.get(category.value, 0) + 1
        self.severity_counts[severity.value] = self.severity_counts.get(severity.value, 0) + 1
        return error_info

    def get_error_statistics(self) -> Dict[str, Any]:
        return {
            'total_errors': sum(self.category_counts.values()),
            'by_category': dict(self.category_counts),
            'by_severity': dict(self.severity_counts),
            'recent_errors': [error.to_json() for error in list(self.error_history)[-10:]],
        }


def soundness_guard(func: Callable) -> Callable:
    """Turn an AssertionError escaping a certified routine into a SoundnessError."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AssertionError as e:
            logging.getLogger('tsieve.errors').error(f"Assertion failed in {func.__name__}: {e}")
            raise SoundnessError(f"certificate failed in {func.__name__}: {e}") from e
    return wrapper


# Global error reporter instance
error_reporter = ErrorReporter()
