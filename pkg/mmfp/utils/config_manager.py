"""
Configuration Manager for mmfp
Loads settings from the environment (.env) and data/settings.json.
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .log import get_logger

logger = get_logger("Config")

DEFAULT_DEGREE_CAP = 2
DEFAULT_ROOT_DEGREE_BOUND = 64
DEFAULT_PRIME_BOUND = 37
DEFAULT_LOG_LEVEL = "WARNING"


class ConfigManager:
    """Manages runtime configuration for mmfp."""

    def __init__(self, root_dir: Optional[Path] = None):
        """
        Initialize the configuration manager and load .env if present.

        Args:
            root_dir: Repository root; defaults to the directory above the package
        """
        self.root_dir = Path(root_dir) if root_dir else Path(__file__).parent.parent.parent
        self.env_path = self.root_dir / '.env'
        self.data_dir = self.root_dir / 'data'
        self.settings_path = self.data_dir / 'settings.json'
        self.settings: Dict[str, Any] = {}

        # Environment variables already set win over .env (dotenv default)
        if self.env_path.exists():
            load_dotenv(self.env_path)

        self._load_settings()

    def _load_settings(self):
        """Load persistent settings from data/settings.json if available."""
        if not self.settings_path.exists():
            self.settings = {}
            return

        try:
            with open(self.settings_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            self.settings = data if isinstance(data, dict) else {}
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Error loading settings.json: {e}")
            self.settings = {}

    def _save_settings(self):
        """Persist current settings to disk."""
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            with open(self.settings_path, 'w', encoding='utf-8') as f:
                json.dump(self.settings, f, indent=2, ensure_ascii=False)
        except OSError as e:
            logger.warning(f"Error saving settings.json: {e}")

    def get(self, key: str, default: Optional[Any] = None) -> Optional[Any]:
        """
        Retrieve a configuration value.

        Precedence:
        1. Environment variable (uppercased key)
        2. Persisted settings.json value
        3. Provided default
        """
        if not key:
            return default

        env_value = os.getenv(key.upper())
        if env_value not in (None, ''):
            return env_value

        return self.settings.get(key, default)

    def get_int(self, key: str, default: int) -> int:
        """Retrieve an integer setting, falling back to default on bad values."""
        value = self.get(key, default)
        try:
            return int(value)
        except (TypeError, ValueError):
            logger.warning(f"Ignoring non-integer value {value!r} for {key}")
            return default

    def set(self, key: str, value: Any, save: bool = True):
        """
        Persist a configuration value to settings.json.

        Args:
            key: Setting name
            value: Value to store (JSON-serializable)
            save: Whether to immediately save to disk
        """
        if not key:
            return

        self.settings[key] = value
        if save:
            self._save_settings()

    @property
    def cache_dir(self) -> Optional[Path]:
        """Basis cache directory, or None when caching is off."""
        value = self.get('mmfp_cache_dir')
        return Path(value) if value else None

    @property
    def degree_cap(self) -> int:
        """Largest extension degree used when splitting Hecke matrices."""
        return self.get_int('mmfp_degree_cap', DEFAULT_DEGREE_CAP)

    @property
    def root_degree_bound(self) -> int:
        return self.get_int('mmfp_root_degree_bound', DEFAULT_ROOT_DEGREE_BOUND)

    @property
    def prime_bound(self) -> int:
        """Default bound L on the primes used for eigensystems."""
        return self.get_int('mmfp_prime_bound', DEFAULT_PRIME_BOUND)

    @property
    def log_level(self) -> str:
        value = str(self.get('mmfp_log_level', DEFAULT_LOG_LEVEL)).upper()
        if not isinstance(logging.getLevelName(value), int):
            return DEFAULT_LOG_LEVEL
        return value


# Global configuration instance
config = ConfigManager()
