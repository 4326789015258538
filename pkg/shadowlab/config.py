# Description: Configuration management for the shadowlab experiment runner.

from typing import Any, Dict, List, Optional
import os
import logging
from pathlib import Path

import yaml
from dotenv import load_dotenv

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

# Environment variables that override a configuration key.
ENV_OVERRIDES: Dict[str, str] = {
    'SHADOWLAB_OUTPUT_DIR': 'paths.output_dir',
    'SHADOWLAB_LOG_LEVEL': 'logging.level',
}


class Config:
    """
    Configuration management system for shadowlab.

    Loads the YAML configuration file, overlays values taken from the
    environment (a `.env` file is honoured through python-dotenv) and offers
    dot-notation access to nested keys.

    Example:
        >>> config = Config()
        >>> level = config.get('logging.level', default='INFO')
        >>> defaults = config.experiment_defaults('doubling-mes')
    """

    def __init__(self, config_file: Optional[str] = None) -> None:
        """
        Initialize configuration system.

        Args:
            config_file: Optional path to config file. If None, uses the
                repository-level config.yaml.
        """
        if config_file is None:
            config_file = str(Path(__file__).parent.parent / 'config.yaml')
        self.config_file: str = config_file
        self.config_data: Dict[str, Any] = self.load_config()
        self._apply_environment()

    def load_config(self) -> Dict[str, Any]:
        """
        Load and validate configuration from YAML file.

        Returns:
            Dict containing configuration data.

        Raises:
            ConfigError: If the file is missing, unparsable or not a mapping
        """
        if not os.path.exists(self.config_file):
            raise ConfigError(f"Configuration file not found: {self.config_file}")

        with open(self.config_file, 'r') as file:
            try:
                data = yaml.safe_load(file) or {}
            except yaml.YAMLError as e:
                raise ConfigError(f"Error parsing configuration file: {str(e)}") from e

        if not isinstance(data, dict):
            raise ConfigError(f"Configuration root must be a mapping: {self.config_file}")
        return data

    def _apply_environment(self) -> None:
        """Overlay environment variables (and a local .env file) onto the loaded data."""
        load_dotenv()
        for variable, key in ENV_OVERRIDES.items():
            value = os.environ.get(variable)
            if value:
                self.set(key, value)
                logger.debug(f"Configuration key {key} overridden by {variable}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Retrieve configuration value using dot notation.

        Args:
            key: Dot-separated configuration key (e.g., 'logging.level')
            default: Optional default value if key not found

        Returns:
            Configuration value or default

        Raises:
            KeyError: If key not found and no default provided
        """
        value: Any = self.config_data
        try:
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            if default is not None:
                return default
            raise KeyError(f"Configuration key not found: {key}")

    def set(self, key: str, value: Any) -> None:
        """Set a dot-notation key, creating intermediate sections."""
        keys = key.split('.')
        section = self.config_data
        for k in keys[:-1]:
            section = section.setdefault(k, {})
        section[keys[-1]] = value

    def validate_required_keys(self, required_keys: List[str]) -> None:
        """
        Validate presence of required configuration keys.

        Args:
            required_keys: List of required dot-notation keys

        Raises:
            ConfigError: If any required key is missing
        """
        missing_keys = []
        for key in required_keys:
            try:
                self.get(key)
            except KeyError:
                missing_keys.append(key)

        if missing_keys:
            raise ConfigError(
                f"Missing required configuration keys: {', '.join(missing_keys)}"
            )

    def experiment_defaults(self, experiment_name: str) -> Dict[str, Any]:
        """
        Parameter defaults for one experiment.

        Global `experiments.defaults` are overlaid with the experiment's own
        section, if any.
        """
        merged: Dict[str, Any] = dict(self.get('experiments.defaults', default={}) or {})
        merged.update(self.get(f'experiments.{experiment_name}', default={}) or {})
        return merged


def load_config(config_file: Optional[str] = None) -> Config:
    """
    Factory function to load configuration.

    Args:
        config_file: Optional path to config file

    Returns:
        Initialized Config object
    """
    return Config(config_file)
