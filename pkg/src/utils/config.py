"""Configuration management utilities."""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger

from .models import ActionParams, BackendKind

ADDRESS_ENV_VAR = "IBBS_ADDRESS"


class ConfigManager:
    """Manages configuration loading and validation."""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize configuration manager.

        Args:
            config_path: Path to configuration file. Defaults to config/settings.yaml
        """
        if config_path is None:
            config_path = Path(__file__).parent.parent.parent / "config" / "settings.yaml"

        self.config_path = Path(config_path)
        self._config: Dict[str, Any] = {}
        load_dotenv()
        self.load_config()

    def load_config(self) -> None:
        """Load configuration from YAML file."""
        try:
            if self.config_path.exists():
                with open(self.config_path, "r") as file:
                    self._config = yaml.safe_load(file) or {}
                logger.debug(f"Configuration loaded from {self.config_path}")
            else:
                logger.warning(f"Configuration file not found: {self.config_path}")
                self._config = self._get_default_config()
        except Exception as e:
            logger.error(f"Error loading configuration: {e}")
            self._config = self._get_default_config()

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation.

        Args:
            key: Configuration key in dot notation (e.g., 'protocol.n')
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value: Any = self._config
        try:
            for k in key.split("."):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> None:
        """Set configuration value using dot notation.

        Args:
            key: Configuration key in dot notation
            value: Value to set
        """
        keys = key.split(".")
        node = self._config

        for k in keys[:-1]:
            if k not in node or not isinstance(node[k], dict):
                node[k] = {}
            node = node[k]

        node[keys[-1]] = value

    def default_address(self) -> str:
        """Default transport address; the environment variable wins over the file."""
        return os.environ.get(ADDRESS_ENV_VAR) or self.get("wire.default_address", "127.0.0.1:7415")

    def build_action_params(self, backend: Optional[str] = None,
                            n: Optional[int] = None) -> ActionParams:
        """Build backend parameters from the ``action`` and ``protocol`` sections.

        Args:
            backend: Backend kind override
            n: Vector length override

        Returns:
            ActionParams; ``N`` is left unset for the CSIDH backend
        """
        kind = BackendKind(backend or self.get("action.backend", "toy"))
        length = int(n if n is not None else self.get("protocol.n", 16))

        if kind == BackendKind.TOY:
            return ActionParams(
                backend_kind=kind,
                N=int(self.get("action.toy.modulus", 101)),
                n=length,
                generator="shift",
            )

        ell_list = tuple(int(ell) for ell in self.get("action.csidh.prime_factors", [3, 5, 7]))
        p = 4
        for ell in ell_list:
            p *= ell
        return ActionParams(
            backend_kind=kind,
            p=p - 1,
            ell_list=ell_list,
            n=length,
            generator=self.get("action.csidh.generator", "ell3-plus"),
        )

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration."""
        return {
            "system": {
                "name": "isoblind toolkit",
                "version": "1.0.0",
            },
            "action": {
                "backend": "toy",
                "toy": {"modulus": 101},
                "csidh": {
                    "prime_factors": [3, 5, 7],
                    "generator": "ell3-plus",
                    "max_orbit": 1000,
                    "point_retry_budget": 64,
                },
            },
            "protocol": {
                "n": 16,
                "ibid_mode": "binary",
                "ibbs_mode": "otter",
                "strict_exceptional": True,
                "require_nonzero_master": True,
                "paper_retry_factor": 4,
            },
            "wire": {
                "version": 1,
                "transport": "pipe",
                "default_address": "127.0.0.1:7415",
                "recv_timeout": 30.0,
                "log_payloads": False,
            },
            "monitoring": {
                "log_level": "INFO",
                "log_file": "logs/ibbs.log",
                "transcript_file": "logs/transcript.log",
            },
            "bench": {
                "levels": [80, 100, 128, 192, 256],
                "count_n": [4, 16],
                "timing_repeats": 5,
                "reports_dir": "reports",
            },
        }

    def reload(self) -> None:
        """Reload configuration from file."""
        self.load_config()
        logger.info("Configuration reloaded")


# Global configuration instance
config = ConfigManager()
