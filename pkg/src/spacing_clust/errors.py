"""
Error types for the clustering library.

Every failure the library raises on purpose derives from SpacingClustError,
so callers (CLI, HTTP service) can map whole families to exit codes.
"""

from typing import Optional


class SpacingClustError(Exception):
    """Base class for all library errors."""
    pass


class DatasetError(SpacingClustError):
    """Exception raised when an input file or matrix cannot be used."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigError(SpacingClustError):
    """Exception raised for invalid parameters or missing options."""
    pass


class SchedulerBudgetError(ConfigError):
    """Exception raised when an instance is too large for the exact scheduler."""
    pass


class OracleLimitError(ConfigError):
    """Exception raised when brute-force enumeration would exceed its cap."""
    pass


class InfeasibleError(SpacingClustError):
    """Exception raised when no clustering can satisfy the size constraint."""
    pass
