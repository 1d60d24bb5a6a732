"""
Configuration and logging initialization.
This module handles environment-driven settings shared by every analysis.
"""
import logging
import os
import sys
from dataclasses import dataclass, replace
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


@dataclass(frozen=True)
class Settings:
    """Budgets and defaults read from the environment"""
    window_budget: int = 2 ** 24
    search_budget: int = 200_000
    threshold_scan_limit: int = 4096
    seed: int = 0
    log_level: str = 'WARNING'

    @classmethod
    def from_env(cls) -> 'Settings':
        return cls(
            window_budget=int(os.getenv('CA_WINDOW_BUDGET', str(2 ** 24))),
            search_budget=int(os.getenv('CA_SEARCH_BUDGET', '200000')),
            threshold_scan_limit=int(os.getenv('CA_THRESHOLD_SCAN_LIMIT', '4096')),
            seed=int(os.getenv('CA_SEED', '0')),
            log_level=os.getenv('CA_LOG_LEVEL', 'WARNING').upper(),
        )


settings = Settings.from_env()


def configure(**overrides) -> Settings:
    """Replace settings fields (used by the CLI for --budget, --seed, --log-level)"""
    global settings
    overrides = {key: value for key, value in overrides.items() if value is not None}
    if overrides.get('window_budget', 1) < 1:
        raise ValueError("window budget must be positive")
    settings = replace(settings, **overrides)
    return settings


def window_budget(budget: int = None) -> int:
    """Budget for an exhaustive operation, falling back to the configured cap"""
    return settings.window_budget if budget is None else budget


def configure_logging(level: str = None):
    """Send log records to stderr; stdout stays reserved for command output"""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
