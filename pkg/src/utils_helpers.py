"""Utility functions for the Q-Borel toolkit."""
import os
import json
import logging
from logging.handlers import RotatingFileHandler
from typing import Dict, Any, Optional
import datetime

logger = logging.getLogger(__name__)

# Attributes every LogRecord carries; anything else came in through `extra`.
_RECORD_FIELDS = set(
    vars(logging.LogRecord("", 0, "", 0, "", (), None)).keys()
) | {"message", "asctime"}


class JsonFormatter(logging.Formatter):
    """Render log records as one JSON object per line."""

    def format(self, record: logging.LogRecord) -> str:
        extra = {
            key: value
            for key, value in record.__dict__.items()
            if key not in _RECORD_FIELDS
        }
        payload = {
            "timestamp": datetime.datetime.utcnow().isoformat(),
            "level": record.levelname,
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
            "message": record.getMessage(),
            "extra": extra,
        }
        return json.dumps(payload, default=str)


def setup_logging(
    log_file: Optional[str],
    log_level: str,
    log_format: str = "json",
) -> None:
    """Configure logging with console and optional rotating file output.

    Args:
        log_file: Path to log file, or empty/None for console only
        log_level: Logging level (DEBUG, INFO, etc.)
        log_format: Log format ('json' or 'text')
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)

    if log_format == "json":
        formatter: logging.Formatter = JsonFormatter()
    else:
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - "
            "[%(module)s:%(funcName)s:%(lineno)d] - %(message)s"
        )

    handlers = []
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_file,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5
        )
        handlers.append(file_handler)

    console_handler = logging.StreamHandler()
    handlers.append(console_handler)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
    for handler in handlers:
        handler.setFormatter(formatter)
        root_logger.addHandler(handler)

    logging.debug("Logging configured", extra={
        "log_file": log_file,
        "log_level": log_level,
        "log_format": log_format
    })


def log_with_context(**kwargs: Any) -> Dict[str, Any]:
    """Create a context dictionary for structured logging.

    Args:
        **kwargs: Key-value pairs to add to context

    Returns:
        Dictionary with context information
    """
    return {"extra": kwargs}
