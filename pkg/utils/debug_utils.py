import logging
import sys
from typing import Any, Optional
from enum import Enum

from config.settings import Settings

class LogLevel(Enum):
    """Enum for log levels."""
    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR

class DebugUtils:
    """Utility class for debug logging and configuration."""

    LOGGER_NAME = 'WseDi'

    _instance = None
    _logger = None
    _debug_mode = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(DebugUtils, cls).__new__(cls)
            cls._instance._setup_logger()
        return cls._instance

    def _setup_logger(self):
        """Setup the logger with the configured level and handlers."""
        try:
            if DebugUtils._logger is None:
                logger = logging.getLogger(self.LOGGER_NAME)
                logger.handlers = []
                level = logging.getLevelName(Settings.LOG_LEVEL.upper())
                if not isinstance(level, int):
                    level = logging.WARNING
                logger.setLevel(level)

                formatter = logging.Formatter(
                    '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
                )

                # stdout carries the artifacts
                console_handler = logging.StreamHandler(sys.stderr)
                console_handler.setFormatter(formatter)
                logger.addHandler(console_handler)

                if Settings.LOG_FILE:
                    file_handler = logging.FileHandler(Settings.LOG_FILE)
                    file_handler.setFormatter(formatter)
                    logger.addHandler(file_handler)

                logger.propagate = False
                DebugUtils._logger = logger
                logger.debug("Logger initialized successfully")
        except Exception as e:
            print(f"Error initializing logger: {str(e)}", file=sys.stderr)
            logger = logging.getLogger(self.LOGGER_NAME)
            logger.setLevel(logging.WARNING)
            logger.addHandler(logging.StreamHandler(sys.stderr))
            logger.propagate = False
            DebugUtils._logger = logger

    @classmethod
    def get_logger(cls) -> logging.Logger:
        """Get the logger instance."""
        if cls._instance is None:
            cls()
        return cls._logger

    @classmethod
    def log_error(cls, error: Exception, context: Optional[str] = None) -> None:
        """Log error details in a standardized format.

        Args:
            error: The exception that occurred
            context: Additional context about where the error occurred
        """
        logger = cls.get_logger()
        if context:
            logger.error(f"{context}: {type(error).__name__}: {str(error)}", exc_info=cls._debug_mode)
        else:
            logger.error(f"{type(error).__name__}: {str(error)}", exc_info=cls._debug_mode)

    @classmethod
    def set_debug_mode(cls, enabled: bool) -> None:
        """Enable or disable debug mode."""
        cls._debug_mode = enabled
        logger = cls.get_logger()
        logger.setLevel(logging.DEBUG if enabled else logging.getLevelName(Settings.LOG_LEVEL.upper()))

    @classmethod
    def _log(cls, level: LogLevel, *args: Any) -> None:
        """Internal logging method."""
        message = ' '.join(str(arg) for arg in args)
        cls.get_logger().log(level.value, message)

    @classmethod
    def debug(cls, *args: Any) -> None:
        """Log debug level message."""
        cls._log(LogLevel.DEBUG, *args)

    @classmethod
    def info(cls, *args: Any) -> None:
        """Log info level message."""
        cls._log(LogLevel.INFO, *args)

    @classmethod
    def warning(cls, *args: Any) -> None:
        """Log warning level message."""
        cls._log(LogLevel.WARNING, *args)

    @classmethod
    def error(cls, *args: Any) -> None:
        """Log error level message."""
        cls._log(LogLevel.ERROR, *args)

