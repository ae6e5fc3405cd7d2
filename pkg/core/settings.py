"""
RTO Forge - Settings
Ajustes de entorno (prefijo RTO_FORGE_, archivo .env opcional)
"""

import logging
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_CONFIG_FILE = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "apps", "rto_lab", "data", "rto_lab_config.json"
)

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class ToolkitSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="RTO_FORGE_", extra="ignore")

    config_file: str = DEFAULT_CONFIG_FILE
    log_level: str = "INFO"
    host: str = "0.0.0.0"
    port: int = 8020

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level '{value}'")
        return level


@lru_cache(maxsize=1)
def get_settings(env_file: Optional[str] = ".env") -> ToolkitSettings:
    """Carga .env (si existe) en el entorno y construye los ajustes una sola vez"""
    if env_file and os.path.exists(env_file):
        load_dotenv(env_file, override=False)
    return ToolkitSettings()


def configure_logging(level: str = "INFO"):
    """Configura el logger raíz una única vez"""
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT)
    logging.getLogger().setLevel(level.upper())
