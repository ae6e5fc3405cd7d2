"""
Tests del gestor de configuración y de los ajustes de entorno
"""

import json
from fractions import Fraction

import pytest
import yaml
from pydantic import ValidationError

from core.config_manager import DEFAULT_CONFIG, ConfigManager
from core.errors import ConfigError
from core.settings import ToolkitSettings


class TestConfigManager:
    def test_defaults_without_file(self, tmp_path):
        path = tmp_path / "missing.json"
        config = ConfigManager(str(path))
        assert config.get("alpha") == "1/8"
        assert config.get("channel")["max_delay"] == 3
        assert not path.exists()
        assert config.validate_config()["valid"]

    def test_persist_defaults(self, tmp_path):
        path = tmp_path / "data" / "config.json"
        ConfigManager(str(path), persist_defaults=True)
        saved = json.loads(path.read_text())
        assert saved["beta"] == "1/4"
        assert saved["_metadata"]["version"] == "1.0"

    def test_partial_sections_are_merged(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"g": "1/2", "channel": {"drop_prob": 0.25}}))
        config = ConfigManager(str(path))
        assert config.rto_params().g == Fraction(1, 2)
        channel = config.channel_config()
        assert channel.drop_prob == 0.25
        assert channel.max_delay == 3

    def test_yaml_files(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump({"alpha": "1/4", "uniform": {"seed": 3}}))
        config = ConfigManager(str(path))
        assert config.rto_params().alpha == Fraction(1, 4)
        assert config.uniform().seed == 3
        config.set("g", "2")
        assert yaml.safe_load(path.read_text())["g"] == "2"

    def test_broken_file_falls_back_to_defaults(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        config = ConfigManager(str(path))
        assert config.get() == {k: v for k, v in DEFAULT_CONFIG.items()}

    def test_update_and_reset(self, config):
        config.update({"channel": {"seed": 9}, "_metadata": {"ignored": True}})
        assert config.get("channel")["seed"] == 9
        assert config.get("channel")["min_delay"] == 1
        config.reset(["channel"])
        assert config.get("channel")["seed"] == 0
        info = config.get_info()
        assert info["exists"]
        assert info["format"] == "json"

    def test_get_returns_copies(self, config):
        config.get("channel")["seed"] = 123
        assert config.get("channel")["seed"] == 0

    def test_overrides(self, config):
        channel = config.channel_config(min_delay=3, max_delay=3, seed=None)
        assert (channel.min_delay, channel.max_delay, channel.seed) == (3, 3, 0)
        assert config.rto_params(g="20").g == 20
        with pytest.raises(ConfigError):
            config.channel_config(min_delay=5, max_delay=2)

    @pytest.mark.parametrize(
        "updates, fragment",
        [
            ({"alpha": "abc"}, "rto parameters"),
            ({"beta": "2"}, "rto parameters"),
            ({"channel": {"min_delay": 4}}, "channel"),
            ({"pathological": {"period": 1}}, "pathological"),
            ({"verify_horizon": 0}, "verify_horizon"),
        ],
    )
    def test_validation_issues(self, config, updates, fragment):
        config.update(updates)
        result = config.validate_config()
        assert not result["valid"]
        assert any(fragment in issue for issue in result["issues"])

    def test_validation_warnings(self, config):
        config.update({"uniform": {"g": "10"}, "colour": "blue"})
        result = config.validate_config()
        assert result["valid"]
        assert len(result["warnings"]) == 2

    def test_invalid_rto_params(self, config):
        config.set("alpha", "1")
        with pytest.raises(ConfigError):
            config.rto_params()


class TestSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("RTO_FORGE_PORT", raising=False)
        settings = ToolkitSettings()
        assert settings.port == 8020
        assert settings.config_file.endswith("rto_lab_config.json")

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("RTO_FORGE_PORT", "9000")
        monkeypatch.setenv("RTO_FORGE_LOG_LEVEL", "debug")
        settings = ToolkitSettings()
        assert settings.port == 9000
        assert settings.log_level == "DEBUG"

    def test_unknown_log_level(self, monkeypatch):
        monkeypatch.setenv("RTO_FORGE_LOG_LEVEL", "chatty")
        with pytest.raises(ValidationError):
            ToolkitSettings()
