"""
Application Settings Module
Loads the engine configuration and configures structured logging
"""

import logging
import os
import sys
from dataclasses import dataclass, replace

import structlog
from dotenv import dotenv_values

from modules import getpath

ENV_PREFIX = 'IHX_'

_TRUE_VALUES = {'1', 'true', 'yes', 'on'}


@dataclass(frozen=True)
class Settings:
    env: str = 'production'
    log_level: str = 'INFO'
    log_format: str = 'console'
    default_seed: int = 0
    default_trials: int = 20
    validate_perversity: bool = True
    real_regime_check: bool = True
    report_schema_version: str = '1.0'

    def to_dict(self):
        return {
            'env': self.env,
            'log_level': self.log_level,
            'log_format': self.log_format,
            'default_seed': self.default_seed,
            'default_trials': self.default_trials,
            'validate_perversity': self.validate_perversity,
            'real_regime_check': self.real_regime_check,
            'report_schema_version': self.report_schema_version,
        }


def _as_bool(value):
    return str(value).strip().lower() in _TRUE_VALUES


def _read_config_files():
    """Read config/app.cfg, then config/app_local.cfg on top when it exists"""
    values = {}
    for name in ('/config/app.cfg', '/config/app_local.cfg'):
        path = getpath(name)
        if os.path.exists(path):
            values.update({k: v for k, v in dotenv_values(path).items() if v is not None})
    return values


def load_settings(environ=None):
    """
    Build the settings from the config files and IHX_* environment overrides

    Args:
        environ (Mapping): environment to read overrides from (defaults to os.environ)

    Returns:
        Settings
    """
    environ = os.environ if environ is None else environ
    values = _read_config_files()
    for key, value in environ.items():
        if key.startswith(ENV_PREFIX):
            values[key[len(ENV_PREFIX):]] = value

    defaults = Settings()
    return Settings(
        env=values.get('ENV', defaults.env),
        log_level=values.get('LOG_LEVEL', defaults.log_level).upper(),
        log_format=values.get('LOG_FORMAT', defaults.log_format).lower(),
        default_seed=int(values.get('DEFAULT_SEED', defaults.default_seed)),
        default_trials=int(values.get('DEFAULT_TRIALS', defaults.default_trials)),
        validate_perversity=_as_bool(values.get('VALIDATE_PERVERSITY', defaults.validate_perversity)),
        real_regime_check=_as_bool(values.get('REAL_REGIME_CHECK', defaults.real_regime_check)),
        report_schema_version=str(values.get('REPORT_SCHEMA_VERSION', defaults.report_schema_version)),
    )


def configure_logging(current):
    """Configure structlog to write key/value events to stderr"""
    level = logging.getLevelName(current.log_level)
    if not isinstance(level, int):
        level = logging.INFO

    if current.log_format == 'json':
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt='iso', utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def override(**changes):
    """Replace the process-wide settings and reconfigure logging"""
    global settings
    settings = replace(settings, **changes)
    configure_logging(settings)
    return settings


settings = load_settings()
configure_logging(settings)
