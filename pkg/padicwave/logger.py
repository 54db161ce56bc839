"""Structured logging for library code and the command-line runner.

Library modules take ``logger = get_logger(__name__)`` and emit dotted event
names with key-value context. Fractions, absolute values, scalars and cosets
may be passed as they are; ``render_exact_values`` turns them into their
canonical strings.
"""

from __future__ import annotations

import logging
import sys
from fractions import Fraction
from functools import lru_cache
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal, Protocol, cast

import structlog
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from structlog.processors import CallsiteParameter

if TYPE_CHECKING:
    from structlog.types import EventDict, Processor, WrappedLogger

type BoundLogger = structlog.stdlib.BoundLogger
type LogLevel = Literal["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG", "NOTSET"]


class LoggingConfig(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="PADICWAVE_LOG_",
        extra="forbid",
        frozen=True,
    )

    level: LogLevel = Field(default="WARNING", description="Root level; commands stay quiet unless asked")
    json_output: bool = Field(default=False, description="Render JSON lines instead of the console format")
    file_path: str | None = Field(default=None, description="Rotating log file; stderr when unset")
    max_bytes: int = Field(default=10_000_000, ge=1024)
    backup_count: int = Field(default=3, ge=0)
    callsite: bool = Field(default=False, description="Add filename, line number and module to every event")

    @classmethod
    def for_cli(cls, verbose: bool) -> LoggingConfig:
        """Environment settings, with ``--verbose`` forcing DEBUG."""
        config = _get_default_config()
        return config.model_copy(update={"level": "DEBUG"}) if verbose else config


class FormatterStrategy(Protocol):
    def build_processors(self, config: LoggingConfig) -> list[Processor]: ...


class OutputStrategy(Protocol):
    def create_handler(self, config: LoggingConfig) -> logging.Handler: ...


def _exact(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, (tuple, list)):
        return [_exact(v) for v in value]
    if type(value).__module__.startswith("padicwave."):
        return str(value)
    return value


def render_exact_values(_logger: WrappedLogger, _method_name: str, event_dict: EventDict) -> EventDict:
    """Replace fractions and package values with their canonical strings."""
    for key, value in event_dict.items():
        if key != "event":
            event_dict[key] = _exact(value)
    return event_dict


def _shared_processors(config: LoggingConfig, timestamp_format: str, utc: bool) -> list[Processor]:
    processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
    ]
    if config.callsite:
        processors.append(
            structlog.processors.CallsiteParameterAdder(
                parameters=[CallsiteParameter.FILENAME, CallsiteParameter.LINENO, CallsiteParameter.MODULE]
            )
        )
    processors += [
        render_exact_values,
        structlog.processors.TimeStamper(fmt=timestamp_format, utc=utc),
        structlog.processors.format_exc_info,
    ]
    return processors


class JsonFormatterStrategy:
    def build_processors(self, config: LoggingConfig) -> list[Processor]:
        return [
            *_shared_processors(config, "iso", utc=True),
            structlog.processors.dict_tracebacks,
            structlog.processors.JSONRenderer(sort_keys=True),
        ]


class ConsoleFormatterStrategy:
    def build_processors(self, config: LoggingConfig) -> list[Processor]:
        return [
            *_shared_processors(config, "%H:%M:%S", utc=False),
            structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
        ]


class FileOutputStrategy:
    def create_handler(self, config: LoggingConfig) -> logging.Handler:
        if not config.file_path:
            raise ValueError("file_path required for FileOutputStrategy")
        log_path = Path(config.file_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(
            filename=str(log_path),
            maxBytes=config.max_bytes,
            backupCount=config.backup_count,
            encoding="utf-8",
        )
        handler.setLevel(config.level)
        handler.setFormatter(logging.Formatter("%(message)s"))
        return handler


class StreamOutputStrategy:
    def create_handler(self, config: LoggingConfig) -> logging.Handler:
        # stdout carries the JSON report
        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(config.level)
        handler.setFormatter(logging.Formatter("%(message)s"))
        return handler


class LoggerFactory:
    @staticmethod
    def create(config: LoggingConfig) -> BoundLogger:
        formatter: FormatterStrategy = JsonFormatterStrategy() if config.json_output else ConsoleFormatterStrategy()
        structlog.configure(
            processors=formatter.build_processors(config),
            wrapper_class=structlog.stdlib.BoundLogger,
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            cache_logger_on_first_use=False,
        )

        output: OutputStrategy = FileOutputStrategy() if config.file_path else StreamOutputStrategy()
        root = logging.getLogger()
        root.handlers = [output.create_handler(config)]
        root.setLevel(config.level)
        return cast(BoundLogger, structlog.get_logger())


@lru_cache(maxsize=1)
def _get_default_config() -> LoggingConfig:
    return LoggingConfig()


def configure_logging(config: LoggingConfig | None = None) -> None:
    LoggerFactory.create(config if config is not None else _get_default_config())


def get_logger(name: str | None = None) -> BoundLogger:
    return cast(BoundLogger, structlog.get_logger(name))


def bind_context(**kwargs: str | int | bool | None) -> None:
    structlog.contextvars.bind_contextvars(**kwargs)


def clear_context() -> None:
    structlog.contextvars.clear_contextvars()
