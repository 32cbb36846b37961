"""Configuration module for the ppres engine.

This module handles:
- Loading environment variables using python-dotenv
- Defining the Settings class with every tunable default
- Startup validation with descriptive error messages
- Exporting a singleton settings instance

Optional environment variables:
- PPRES_THREADS: Worker cap for grid checks and counting (default: 1)
- PPRES_T_MIN / PPRES_T_MAX: Default parameter grid (default: 0..12)
- PPRES_BOX_RADIUS: Assignments range over [-radius, radius] (default: 15)
- PPRES_WINDOW_MULTIPLIER: Search window factor for minus-infinity stabilization (default: 10)
- PPRES_SIMPLIFY_EXPANSION_LIMIT: Largest constant bound the simplifier unrolls (default: 4)
- PPRES_QFREE_EXPANSION_LIMIT: Disjunct budget of quantifier-free elimination (default: 1000000)
- PPRES_LOG_LEVEL: DEBUG, INFO, WARNING or ERROR (default: WARNING)
- PPRES_LOG_FORMAT: json or text (default: json)
- PPRES_CORPUS_PATH: Regression corpus directory (default: corpus)
"""

import logging
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
LOG_FORMATS = ("json", "text")


class ConfigurationError(Exception):
    """Raised when configuration is inconsistent or invalid."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


@dataclass
class Settings:
    """Engine settings loaded from environment variables.

    Values can also come from a .env file via python-dotenv; variables
    already set in the environment win.
    """

    # Parallelism
    PPRES_THREADS: int = field(default=1)

    # Equivalence grid
    PPRES_T_MIN: int = field(default=0)
    PPRES_T_MAX: int = field(default=12)
    PPRES_BOX_RADIUS: int = field(default=15)
    PPRES_WINDOW_MULTIPLIER: int = field(default=10)

    # Expansion limits
    PPRES_SIMPLIFY_EXPANSION_LIMIT: int = field(default=4)
    PPRES_QFREE_EXPANSION_LIMIT: int = field(default=1_000_000)

    # Logging
    PPRES_LOG_LEVEL: str = field(default="WARNING")
    PPRES_LOG_FORMAT: str = field(default="json")

    PPRES_CORPUS_PATH: str = field(default="corpus")

    def __post_init__(self) -> None:
        """Load environment variables after initialization."""
        self._load_from_environment()

    def _validate_int_range(
        self, value: str, min_val: int, max_val: int, name: str, default: int
    ) -> int:
        """Validate an integer is within range.

        Args:
            value: String value to parse
            min_val: Minimum allowed value
            max_val: Maximum allowed value
            name: Name of the setting for error messages
            default: Default value if parsing fails

        Returns:
            Validated integer within range
        """
        try:
            parsed = int(value)
        except (ValueError, TypeError):
            logging.warning(f"{name}={value!r} is not an integer, using {default}")
            return default
        if parsed < min_val or parsed > max_val:
            logging.warning(f"{name}={parsed} out of range [{min_val}, {max_val}], using {default}")
            return default
        return parsed

    def _load_from_environment(self) -> None:
        """Load all settings from environment variables."""
        load_dotenv()

        self.PPRES_THREADS = self._validate_int_range(
            os.getenv("PPRES_THREADS", "1"), 1, 64, "PPRES_THREADS", 1
        )
        self.PPRES_T_MIN = self._validate_int_range(
            os.getenv("PPRES_T_MIN", "0"), 0, 10_000, "PPRES_T_MIN", 0
        )
        self.PPRES_T_MAX = self._validate_int_range(
            os.getenv("PPRES_T_MAX", "12"), 0, 10_000, "PPRES_T_MAX", 12
        )
        self.PPRES_BOX_RADIUS = self._validate_int_range(
            os.getenv("PPRES_BOX_RADIUS", "15"), 0, 10_000, "PPRES_BOX_RADIUS", 15
        )
        self.PPRES_WINDOW_MULTIPLIER = self._validate_int_range(
            os.getenv("PPRES_WINDOW_MULTIPLIER", "10"), 1, 1000, "PPRES_WINDOW_MULTIPLIER", 10
        )
        self.PPRES_SIMPLIFY_EXPANSION_LIMIT = self._validate_int_range(
            os.getenv("PPRES_SIMPLIFY_EXPANSION_LIMIT", "4"),
            0,
            10_000,
            "PPRES_SIMPLIFY_EXPANSION_LIMIT",
            4,
        )
        self.PPRES_QFREE_EXPANSION_LIMIT = self._validate_int_range(
            os.getenv("PPRES_QFREE_EXPANSION_LIMIT", "1000000"),
            1,
            10**9,
            "PPRES_QFREE_EXPANSION_LIMIT",
            1_000_000,
        )
        self.PPRES_LOG_LEVEL = os.getenv("PPRES_LOG_LEVEL", "WARNING").upper()
        self.PPRES_LOG_FORMAT = os.getenv("PPRES_LOG_FORMAT", "json").lower()
        self.PPRES_CORPUS_PATH = os.getenv("PPRES_CORPUS_PATH", "corpus")

    def validate(self) -> None:
        """Check that the settings are mutually consistent.

        Raises:
            ConfigurationError: Listing every problem found.
        """
        problems = []
        if self.PPRES_T_MIN > self.PPRES_T_MAX:
            problems.append(f"PPRES_T_MIN={self.PPRES_T_MIN} exceeds PPRES_T_MAX={self.PPRES_T_MAX}")
        if self.PPRES_LOG_LEVEL not in LOG_LEVELS:
            problems.append(f"PPRES_LOG_LEVEL={self.PPRES_LOG_LEVEL} is not one of {', '.join(LOG_LEVELS)}")
        if self.PPRES_LOG_FORMAT not in LOG_FORMATS:
            problems.append(f"PPRES_LOG_FORMAT={self.PPRES_LOG_FORMAT} is not one of {', '.join(LOG_FORMATS)}")

        if problems:
            raise ConfigurationError(f"Invalid configuration: {'; '.join(problems)}")

    @property
    def t_values(self) -> range:
        """The default parameter grid."""
        return range(self.PPRES_T_MIN, self.PPRES_T_MAX + 1)


def get_settings() -> Settings:
    """Get a fresh Settings instance.

    For singleton behavior use the module-level `settings` variable.

    Returns:
        A Settings instance with values loaded from environment.
    """
    return Settings()


def validate_startup_configuration() -> Settings:
    """Validate configuration before the CLI or the HTTP app starts work.

    Returns:
        A validated Settings instance.

    Raises:
        ConfigurationError: If the configuration is inconsistent.
    """
    settings = Settings()
    settings.validate()
    return settings


# Created on import; tests build their own Settings instances.
settings = Settings()
