"""
RTO Forge - Configuration Manager
Gestiona el archivo de valores por defecto del laboratorio (JSON o YAML)
"""

import copy
import json
import logging
import os
from datetime import datetime
from typing import Any, Dict, List, Optional

import yaml
from pydantic import ValidationError

from .errors import ConfigError, DomainError
from .exactnum import parse_rational
from .netsim.channel import ChannelConfig
from .rtocalc import RtoParams
from .scenario import Pathological, Uniform

logger = logging.getLogger(__name__)

CONFIG_VERSION = "1.0"

DEFAULT_CONFIG: Dict[str, Any] = {
    "alpha": "1/8",
    "beta": "1/4",
    "g": "1",
    "verify_horizon": 10,
    "pathological": {"period": 100, "base": "60", "spike": "75", "length": 1000},
    "uniform": {"lo": "60", "hi": "75", "seed": 42, "length": 1000, "g": "20"},
    "channel": {
        "drop_prob": 0.0,
        "dup_prob": 0.0,
        "min_delay": 1,
        "max_delay": 3,
        "fifo_acks": False,
        "seed": 0,
        "window": 1,
        "max_ticks": 100_000,
    },
}

_CHANNEL_ONLY_KEYS = ("window", "max_ticks")


class ConfigManager:
    """
    Gestor de configuración para RTO Forge

    Permite:
    - Cargar/guardar configuración en JSON o YAML (según la extensión)
    - Completar claves ausentes con los valores por defecto
    - Validar racionales y rangos antes de usarlos
    - Construir RtoParams, ChannelConfig y escenarios a partir del archivo

    Los racionales se guardan como texto ("1/8", "67.5").
    """

    def __init__(self, config_file: str, defaults: Dict[str, Any] = None, persist_defaults: bool = False):
        self.config_file = config_file
        self.defaults = copy.deepcopy(defaults if defaults is not None else DEFAULT_CONFIG)
        self._config: Dict[str, Any] = {}
        self._load_config()
        if persist_defaults and not os.path.exists(self.config_file):
            self._save_config()

    @property
    def is_yaml(self) -> bool:
        return self.config_file.endswith((".yaml", ".yml"))

    def _read_file(self) -> Dict[str, Any]:
        with open(self.config_file, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) if self.is_yaml else json.load(f)
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {self.config_file} must contain a mapping")
        return data

    def _load_config(self):
        """Carga la configuración desde archivo o usa defaults"""
        self._config = copy.deepcopy(self.defaults)
        if not os.path.exists(self.config_file):
            return
        try:
            loaded = self._read_file()
        except (json.JSONDecodeError, yaml.YAMLError, ConfigError, OSError) as e:
            logger.warning("Could not load config from %s, using defaults: %s", self.config_file, e)
            return

        # Merge con defaults, también un nivel dentro de las secciones
        for key, value in loaded.items():
            if isinstance(value, dict) and isinstance(self._config.get(key), dict):
                self._config[key].update(value)
            else:
                self._config[key] = value

    def _save_config(self):
        """
        Guarda la configuración actual al archivo

        Raises:
            ConfigError: Si no se puede escribir
        """
        config_to_save = {
            **self._config,
            "_metadata": {"last_updated": datetime.now().isoformat(), "version": CONFIG_VERSION},
        }
        try:
            directory = os.path.dirname(self.config_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.config_file, "w", encoding="utf-8") as f:
                if self.is_yaml:
                    yaml.safe_dump(config_to_save, f, sort_keys=False, allow_unicode=True)
                else:
                    json.dump(config_to_save, f, indent=2, ensure_ascii=False)
        except OSError as e:
            raise ConfigError(f"Error saving config to {self.config_file}: {e}")
        self._config["_metadata"] = config_to_save["_metadata"]

    def get(self, key: Optional[str] = None, default: Any = None) -> Any:
        """
        Obtiene un valor de configuración

        Args:
            key: Clave específica (si None, retorna toda la config)
            default: Valor por defecto si la clave no existe

        Returns:
            Valor de configuración o config completa
        """
        if key is None:
            return {k: copy.deepcopy(v) for k, v in self._config.items() if not k.startswith("_")}
        return copy.deepcopy(self._config.get(key, default))

    def update(self, updates: Dict[str, Any]) -> Dict[str, Any]:
        """
        Actualiza múltiples valores y guarda

        Returns:
            Configuración actualizada
        """
        for key, value in updates.items():
            if key.startswith("_"):
                continue
            if isinstance(value, dict) and isinstance(self._config.get(key), dict):
                self._config[key].update(value)
            else:
                self._config[key] = value
        self._save_config()
        return self.get()

    def set(self, key: str, value: Any) -> Any:
        if not key.startswith("_"):
            self._config[key] = value
            self._save_config()
        return value

    def reset(self, keys: Optional[List[str]] = None):
        """
        Resetea configuración a defaults

        Args:
            keys: Claves a resetear (si None, resetea todo)
        """
        if keys is None:
            self._config = copy.deepcopy(self.defaults)
        else:
            for key in keys:
                if key in self.defaults:
                    self._config[key] = copy.deepcopy(self.defaults[key])
        self._save_config()

    def get_info(self) -> Dict[str, Any]:
        metadata = self._config.get("_metadata", {})
        exists = os.path.exists(self.config_file)
        return {
            "config_file": self.config_file,
            "format": "yaml" if self.is_yaml else "json",
            "exists": exists,
            "size": os.path.getsize(self.config_file) if exists else 0,
            "last_updated": metadata.get("last_updated"),
            "version": metadata.get("version"),
            "keys_count": len([k for k in self._config if not k.startswith("_")]),
            "has_defaults": bool(self.defaults),
        }

    def rto_params(self, g: Any = None) -> RtoParams:
        """
        RtoParams a partir de alpha, beta y g

        Raises:
            ConfigError: Si algún valor no es un racional válido o está fuera de rango
        """
        try:
            return RtoParams(
                parse_rational(str(self._config["alpha"])),
                parse_rational(str(self._config["beta"])),
                parse_rational(str(g if g is not None else self._config["g"])),
            )
        except (KeyError, DomainError) as e:
            raise ConfigError(f"Invalid rto parameters in {self.config_file}: {e}")

    def channel_config(self, **overrides: Any) -> ChannelConfig:
        section = {k: v for k, v in self._config.get("channel", {}).items() if k not in _CHANNEL_ONLY_KEYS}
        section.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return ChannelConfig(**section)
        except ValidationError as e:
            raise ConfigError(f"Invalid channel section: {e}")

    def pathological(self) -> Pathological:
        section = self._config.get("pathological", {})
        try:
            return Pathological(
                int(section["period"]), parse_rational(str(section["base"])), parse_rational(str(section["spike"]))
            )
        except (KeyError, ValueError) as e:
            raise ConfigError(f"Invalid pathological section: {e}")

    def uniform(self, seed: Optional[int] = None) -> Uniform:
        section = self._config.get("uniform", {})
        try:
            return Uniform(
                parse_rational(str(section["lo"])),
                parse_rational(str(section["hi"])),
                int(section["seed"] if seed is None else seed),
            )
        except (KeyError, ValueError) as e:
            raise ConfigError(f"Invalid uniform section: {e}")

    def validate_config(self) -> Dict[str, Any]:
        """
        Valida la configuración actual

        Returns:
            Diccionario con valid, issues y warnings
        """
        issues = []
        warnings = []

        for key in self.defaults:
            if key not in self._config:
                issues.append(f"Missing required key: {key}")

        checks = {
            "rto parameters": self.rto_params,
            "channel": self.channel_config,
            "pathological": self.pathological,
            "uniform": self.uniform,
        }
        for label, build in checks.items():
            try:
                build()
            except ConfigError as e:
                issues.append(f"{label}: {e}")

        horizon = self._config.get("verify_horizon")
        if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
            issues.append("verify_horizon must be a positive integer")

        channel = self._config.get("channel", {})
        for key in _CHANNEL_ONLY_KEYS:
            value = channel.get(key)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                issues.append(f"channel.{key} must be a positive integer")

        try:
            uniform_g = parse_rational(str(self._config.get("uniform", {}).get("g", "0")))
            hi_lo = self.uniform()
            if uniform_g <= hi_lo.hi - hi_lo.lo:
                warnings.append("uniform.g <= 2r: timeouts may occur in the uniform scenario")
        except (ConfigError, DomainError):
            pass

        known = set(self.defaults) | {"_metadata"}
        for key in self._config:
            if key not in known:
                warnings.append(f"Unknown key '{key}' ignored")

        return {"valid": len(issues) == 0, "issues": issues, "warnings": warnings}
