"""
Structured logger for estimator runs and campaigns.
"""

import logging
from typing import Any, Dict, Optional

from setmember.utils.logging.config import get_logger


class RunLogger:
    """
    Logging helper that appends key=value context to every message.
    Used by the run loop and the campaign harness so each line carries
    the mode, node count, seed or instant it refers to.
    """

    def __init__(self, name: str = "setmember.run", **context: Any):
        self.logger = get_logger(name)
        self.context: Dict[str, Any] = dict(context)

    def bind(self, **context: Any) -> "RunLogger":
        """Return a logger sharing this one's name with extra context."""
        bound = RunLogger(self.logger.name, **self.context)
        bound.context.update(context)
        return bound

    def info(self, message: str, **kwargs: Any) -> None:
        """Log info message with optional extra data."""
        self._log(self.logger.info, message, kwargs)

    def debug(self, message: str, **kwargs: Any) -> None:
        """Log debug message with optional extra data."""
        if self.logger.isEnabledFor(logging.DEBUG):
            self._log(self.logger.debug, message, kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        """Log warning message with optional extra data."""
        self._log(self.logger.warning, message, kwargs)

    def error(
        self, message: str, exception: Optional[Exception] = None, **kwargs: Any
    ) -> None:
        """Log error message with optional exception and extra data."""
        fields = {**self.context, **kwargs}
        if exception:
            self.logger.error(
                "%s - %s - %s: %s",
                message,
                self._format_kwargs(fields),
                type(exception).__name__,
                str(exception),
                exc_info=exception,
            )
        elif fields:
            self.logger.error("%s - %s", message, self._format_kwargs(fields))
        else:
            self.logger.error(message)

    def _log(self, emit, message: str, kwargs: Dict[str, Any]) -> None:
        fields = {**self.context, **kwargs}
        if fields:
            emit("%s - %s", message, self._format_kwargs(fields))
        else:
            emit(message)

    def _format_kwargs(self, kwargs: Dict[str, Any]) -> str:
        """Format kwargs as a string for logging."""
        return ", ".join(f"{key}={repr(value)}" for key, value in kwargs.items())
