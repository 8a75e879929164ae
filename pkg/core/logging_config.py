"""
Centralized logging configuration for the LGCP pipeline.

Console output goes to standard error so that data artifacts written by the
CLI never mix with log lines. JSON structured records are used in production
runs, a colored one-line format otherwise.
"""

import json
import logging
import logging.handlers
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional


class StructuredFormatter(logging.Formatter):
    """Formatter for structured JSON logging"""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        if hasattr(record, "extra_data"):
            log_entry.update(record.extra_data)

        return json.dumps(log_entry, ensure_ascii=False, default=str)


class ConsoleFormatter(logging.Formatter):
    """Console formatter with colors for interactive runs"""

    COLORS = {
        'DEBUG': '\033[36m',    # Cyan
        'INFO': '\033[92m',     # Green
        'WARNING': '\033[93m',  # Yellow
        'ERROR': '\033[91m',    # Red
        'CRITICAL': '\033[95m', # Magenta
    }
    RESET = '\033[0m'

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        level = record.levelname
        if self.use_color:
            level = f"{self.COLORS.get(level, '')}{level}{self.RESET}"

        formatted = f"[{datetime.now().strftime('%H:%M:%S')}] [{level}] [{record.module}] {record.getMessage()}"

        extra = getattr(record, "extra_data", None)
        if extra:
            pairs = " ".join(f"{k}={v}" for k, v in extra.items())
            formatted += f" | {pairs}"

        if record.exc_info:
            formatted += f"\n{self.formatException(record.exc_info)}"

        return formatted


class LoggingConfig:
    """Centralized logging configuration manager"""

    def __init__(self,
                 log_level: str = "INFO",
                 log_dir: Optional[str] = None,
                 enable_file_logging: bool = False,
                 enable_console_logging: bool = True,
                 structured_logging: bool = False,
                 max_log_size_mb: int = 10,
                 backup_count: int = 5):
        """
        Initialize logging configuration.

        Args:
            log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_dir: Directory for the rotating run log (defaults to ./logs)
            enable_file_logging: Whether to log to files
            enable_console_logging: Whether to log to standard error
            structured_logging: Use JSON records instead of the console format
            max_log_size_mb: Maximum size of each log file in MB
            backup_count: Number of backup log files to keep
        """
        self.log_level = getattr(logging, log_level.upper())
        self.log_dir = Path(log_dir) if log_dir else Path("./logs")
        self.enable_file_logging = enable_file_logging
        self.enable_console_logging = enable_console_logging
        self.structured_logging = structured_logging
        self.max_log_size_mb = max_log_size_mb
        self.backup_count = backup_count

    def configure(self) -> None:
        """Configure the root logger"""
        root_logger = logging.getLogger()
        root_logger.handlers.clear()
        root_logger.setLevel(self.log_level)

        if self.enable_console_logging:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(self.log_level)
            if self.structured_logging:
                console_handler.setFormatter(StructuredFormatter())
            else:
                console_handler.setFormatter(ConsoleFormatter(use_color=sys.stderr.isatty()))
            root_logger.addHandler(console_handler)

        if self.enable_file_logging:
            self._setup_file_handler(root_logger)

        self._configure_third_party_loggers()

        logging.getLogger(__name__).debug("Logging system configured", extra={
            "extra_data": {
                "log_level": logging.getLevelName(self.log_level),
                "file_logging": self.enable_file_logging,
                "structured_logging": self.structured_logging,
            }
        })

    def _setup_file_handler(self, root_logger: logging.Logger) -> None:
        """Setup the rotating run log"""
        self.log_dir.mkdir(parents=True, exist_ok=True)
        handler = logging.handlers.RotatingFileHandler(
            self.log_dir / "run.log",
            maxBytes=self.max_log_size_mb * 1024 * 1024,
            backupCount=self.backup_count,
            encoding='utf-8'
        )
        handler.setLevel(self.log_level)
        if self.structured_logging:
            handler.setFormatter(StructuredFormatter())
        else:
            handler.setFormatter(logging.Formatter(
                '[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            ))
        root_logger.addHandler(handler)

    def _configure_third_party_loggers(self) -> None:
        """Quiet noisy third-party libraries"""
        for logger_name in ('matplotlib', 'numexpr', 'urllib3'):
            logging.getLogger(logger_name).setLevel(logging.WARNING)


_logging_config: Optional[LoggingConfig] = None


def setup_logging(config_dict: Optional[Dict[str, Any]] = None) -> None:
    """
    Setup logging for the application.

    Args:
        config_dict: Configuration dictionary with logging settings
    """
    global _logging_config

    is_production = os.getenv("LGCP_ENVIRONMENT", "development").lower() == "production"
    defaults = {
        "log_level": os.getenv("LGCP_LOG_LEVEL", "INFO"),
        "log_dir": os.getenv("LGCP_LOG_DIR"),
        "enable_file_logging": os.getenv("LGCP_ENABLE_FILE_LOGGING", "false").lower() == "true",
        "enable_console_logging": True,
        "structured_logging": is_production,
        "max_log_size_mb": 10,
        "backup_count": 5,
    }
    merged = {**defaults, **(config_dict or {})}

    _logging_config = LoggingConfig(**merged)
    _logging_config.configure()


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the given name.

    Library code never configures handlers itself; records propagate to
    whatever the entry point (CLI or test runner) installed.
    """
    return logging.getLogger(name)


def log_with_context(logger: logging.Logger, level: int, message: str, **context) -> None:
    """Log a message with additional context data"""
    logger.log(level, message, extra={"extra_data": context})


def log_performance(logger: logging.Logger, operation: str, duration_ms: float, **context) -> None:
    """Log performance metrics"""
    log_with_context(logger, logging.INFO, f"Performance: {operation}",
                     operation=operation, duration_ms=round(duration_ms, 3), **context)


def log_error_with_context(logger: logging.Logger, error: Exception,
                           operation: str, **context) -> None:
    """Log error with full context"""
    details = getattr(error, "details", None) or {}
    log_with_context(logger, logging.ERROR, f"Error in {operation}: {error}",
                     operation=operation, error_type=type(error).__name__,
                     **{**details, **context})
