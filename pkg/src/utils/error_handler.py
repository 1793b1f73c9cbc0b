"""
Centralized Error Handling for the PIB Solver
Exception hierarchy, user-facing messages and process exit codes
"""

import traceback
import functools
from typing import Any, Callable, Optional

# Exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class PibError(Exception):
    """Base class for every error raised by the solver"""


class ConfigError(PibError):
    """Invalid or unreadable configuration; names the offending field"""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class FieldSpecError(PibError):
    """A FieldSpec invariant does not hold; field names the offending input"""

    def __init__(self, message: str, field: str = "spec"):
        self.field = field
        super().__init__(message)


class NotPrimitiveError(PibError):
    """Element does not generate the sextic field over Q"""

    def __init__(self, degree: int):
        self.degree = degree
        super().__init__(f"not primitive (minimal polynomial has degree {degree})")


class NonUnitError(PibError):
    """A unit was required but the element has norm other than +-1"""


class SingularSystemError(PibError):
    """Every row choice of a linear bound system is singular"""


class RootPairingError(PibError):
    """Roots of g cannot be paired with the embeddings of M at this precision"""


class PrecisionExhaustedError(PibError):
    """Precision escalation reached its cap without a trustworthy result"""


class SplitPrimeNotFoundError(PibError):
    """No fully split prime found before the iteration cap"""


class CorollaryHypothesisError(PibError):
    """Polynomial violates the reciprocal-generator hypotheses"""


class ErrorHandler:
    """Maps solver errors to messages and exit codes"""

    @staticmethod
    def handle_config_error(error: Exception, context: str = "Config") -> int:
        """Handle configuration and field-spec errors"""
        if isinstance(error, ConfigError):
            print(f"⚙️ {context} error in '{error.field}': {error.reason}")
        elif isinstance(error, SplitPrimeNotFoundError):
            print(f"🔎 {context}: {error}")
            print("💡 Tip: raise prime_start or check that g is irreducible.")
        else:
            print(f"⚙️ {context} error: {error}")
        return EXIT_CONFIG

    @staticmethod
    def handle_numeric_error(error: Exception, context: str = "Numerics") -> int:
        """Handle precision exhaustion"""
        print(f"🧮 {context} error: {error}")
        print("💡 Tip: increase the precision settings in the config.")
        return EXIT_NUMERIC

    @staticmethod
    def handle_math_error(error: Exception, context: str = "Computation") -> int:
        """Handle mathematical failures that are not config problems"""
        print(f"❌ {context} failed: {error}")
        return EXIT_FAILURE


def exit_code_for(error: Exception, context: str = "Operation") -> int:
    """Dispatch an exception to its handler and return the exit code"""
    if isinstance(error, (ConfigError, FieldSpecError, SplitPrimeNotFoundError)):
        return ErrorHandler.handle_config_error(error, context)
    if isinstance(error, PrecisionExhaustedError):
        return ErrorHandler.handle_numeric_error(error, context)
    return ErrorHandler.handle_math_error(error, context)


def safe_execute(error_context: str = "Operation", show_traceback: bool = False):
    """Decorator turning solver errors into exit codes for CLI commands"""

    def decorator(func: Callable[..., Optional[int]]) -> Callable[..., int]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            try:
                result = func(*args, **kwargs)
                return EXIT_OK if result is None else result
            except PibError as e:
                if show_traceback:
                    print(traceback.format_exc())
                return exit_code_for(e, error_context)
            except (FileNotFoundError, PermissionError) as e:
                return ErrorHandler.handle_config_error(ConfigError("config", str(e)), error_context)
            except Exception as e:
                print(f"❌ {error_context} failed: {e}")
                if show_traceback:
                    print(traceback.format_exc())
                return EXIT_FAILURE

        return wrapper

    return decorator
