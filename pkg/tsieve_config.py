"""
Trinomial Sieve configuration and logging setup.
Settings come from the environment (optionally from .env files); command-line flags win.
"""

import contextvars
import logging
import os
import sys
from fractions import Fraction
from logging.handlers import RotatingFileHandler
from typing import Optional

from dotenv import load_dotenv

from tsieve_error_handler import InputError

BASE_DIR = os.path.dirname(os.path.abspath(__file__))

DEFAULT_MAX_DEGREE = 200
DEFAULT_EPS = Fraction(1, 2 ** 53)

job_id_ctx_var = contextvars.ContextVar('job_id', default='n/a')


def load_environment(base_dir: str = BASE_DIR) -> None:
    """Load .env then .env.local (override) from the cwd and from base_dir."""
    load_dotenv()
    try:
        load_dotenv('.env.local', override=True)
    except Exception:
        pass
    # Also load env files relative to the install directory to avoid CWD issues
    try:
        load_dotenv(os.path.join(base_dir, '.env'), override=False)
    except Exception:
        pass
    try:
        load_dotenv(os.path.join(base_dir, '.env.local'), override=True)
    except Exception:
        pass


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        value = int(raw)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name} must be an integer, got {raw!r}") from e
    if value < 1:
        raise InputError(f"{name} must be positive, got {value}")
    return value


def parse_eps(raw: str) -> Fraction:
    try:
        value = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"eps must be a positive rational P/Q, got {raw!r}") from e
    if value <= 0:
        raise InputError(f"eps must be positive, got {raw!r}")
    return value


class SieveConfig:
    def __init__(self) -> None:
        self.jobs = _env_int("TRINOMIAL_SIEVE_JOBS", str(os.cpu_count() or 1))
        self.max_degree = _env_int("TRINOMIAL_SIEVE_MAX_DEGREE", str(DEFAULT_MAX_DEGREE))
        raw_eps = os.getenv("TRINOMIAL_SIEVE_EPS")
        self.eps = parse_eps(raw_eps) if raw_eps else DEFAULT_EPS
        self.log_level = os.getenv("TRINOMIAL_SIEVE_LOG_LEVEL", "WARNING").upper()
        self.log_file: Optional[str] = os.getenv("TRINOMIAL_SIEVE_LOG_FILE", None)
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise InputError(f"unknown log level {self.log_level!r}")


class _JobIdFilter(logging.Filter):
    def filter(self, record):
        try:
            record.job_id = job_id_ctx_var.get()
        except Exception:
            if not hasattr(record, 'job_id'):
                record.job_id = 'n/a'
        return True


_configured = False


def setup_logging(config: SieveConfig) -> None:
    """Attach the console (and optional rotating file) handler once."""
    global _configured
    root_logger = logging.getLogger()
    root_logger.setLevel(config.log_level)
    if _configured:
        return

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
    console.addFilter(_JobIdFilter())
    root_logger.addHandler(console)

    if config.log_file:
        rotating_file_handler = RotatingFileHandler(
            config.log_file, maxBytes=5 * 1024 * 1024, backupCount=5, encoding='utf-8'
        )
        rotating_file_handler.setFormatter(
            logging.Formatter('%(asctime)s - %(levelname)s - [job=%(job_id)s] - %(message)s')
        )
        rotating_file_handler.addFilter(_JobIdFilter())
        root_logger.addHandler(rotating_file_handler)

    root_logger.addFilter(_JobIdFilter())
    _configured = True
