import math
from typing import Any

from exceptions.wse_exceptions import ValidationException

class BaseAnalyzer:
    """Base class for the security-analysis services."""

    @staticmethod
    def _validate_range(name: str, value: float, low: float, high: float, tolerance: float = 0.0) -> float:
        """
        Validate that a scalar lies in the closed interval [low, high].

        Args:
            name: Parameter name used in the error message
            value: Value to check
            low: Lower end of the domain
            high: Upper end of the domain
            tolerance: Slack allowed on both ends

        Returns:
            The value as a float

        Raises:
            ValidationException: If the value is not finite or out of range
        """
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValidationException(f"{name} must be a real number, got {value!r}")
        if not math.isfinite(number) or number < low - tolerance or number > high + tolerance:
            raise ValidationException(f"{name} must lie in [{low}, {high}], got {number}")
        return number

    @staticmethod
    def _validate_positive_int(name: str, value: Any, minimum: int = 1) -> int:
        message = f"{name} must be an integer >= {minimum}, got {value!r}"
        if isinstance(value, bool):
            raise ValidationException(message)
        try:
            number = int(value)
        except (TypeError, ValueError, OverflowError):
            raise ValidationException(message)
        if number != value or number < minimum:
            raise ValidationException(message)
        return number

    @staticmethod
    def _clamp(value: float, low: float, high: float) -> float:
        return min(max(value, low), high)
