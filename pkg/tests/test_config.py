from unittest.mock import patch

import pytest

from src.chisel.config import DEFAULT_BUDGET, Settings, check_log_level, get_env_var
from src.chisel.errors import ParameterError


class TestGetEnvVar:
    """Test cases for the get_env_var function in the config module."""

    @patch("src.chisel.config.os.getenv")
    def test_get_env_var_threads_exists(self, mock_getenv):
        """Test get_env_var returns CHISEL_THREADS when it exists."""
        mock_getenv.return_value = "4"

        result = get_env_var("CHISEL_THREADS")

        assert result == "4"
        mock_getenv.assert_called_once_with("CHISEL_THREADS", None)

    @patch("src.chisel.config.os.getenv")
    def test_get_env_var_log_level_with_default(self, mock_getenv):
        """Test get_env_var passes the default through to os.getenv."""
        mock_getenv.return_value = "WARNING"

        result = get_env_var("CHISEL_LOG_LEVEL", "WARNING")

        assert result == "WARNING"
        mock_getenv.assert_called_once_with("CHISEL_LOG_LEVEL", "WARNING")

    @patch("src.chisel.config.os.getenv")
    def test_get_env_var_none_when_not_exists(self, mock_getenv):
        """Test get_env_var returns None when variable doesn't exist and no default."""
        mock_getenv.return_value = None

        result = get_env_var("CHISEL_BUDGET")

        assert result is None
        mock_getenv.assert_called_once_with("CHISEL_BUDGET", None)


class TestSettings:
    """Settings read from CHISEL_* variables."""

    def test_defaults(self, monkeypatch):
        """Unset variables fall back to the defaults."""
        for name in ("CHISEL_THREADS", "CHISEL_BUDGET", "CHISEL_LOG_LEVEL"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings()
        assert settings.budget == DEFAULT_BUDGET
        assert settings.log_level == "WARNING"
        assert settings.threads >= 1

    def test_environment_overrides(self, monkeypatch):
        """Integers are parsed from the environment."""
        monkeypatch.setenv("CHISEL_THREADS", "3")
        monkeypatch.setenv("CHISEL_BUDGET", "1000")
        monkeypatch.setenv("CHISEL_LOG_LEVEL", "DEBUG")
        settings = Settings()
        assert (settings.threads, settings.budget, settings.log_level) == (3, 1000, "DEBUG")

    def test_empty_value_uses_default(self, monkeypatch):
        """An empty variable counts as unset."""
        monkeypatch.setenv("CHISEL_BUDGET", "")
        assert Settings().budget == DEFAULT_BUDGET

    def test_invalid_integer(self, monkeypatch):
        """Non-integer values are rejected with the variable name."""
        monkeypatch.setenv("CHISEL_THREADS", "many")
        with pytest.raises(ParameterError, match="CHISEL_THREADS"):
            Settings()

    def test_log_level_is_upper_cased(self, monkeypatch):
        """Level names are accepted in any case."""
        monkeypatch.setenv("CHISEL_LOG_LEVEL", "info")
        assert Settings().log_level == "INFO"

    def test_invalid_log_level(self, monkeypatch):
        """Unknown level names are rejected with the offending value."""
        monkeypatch.setenv("CHISEL_LOG_LEVEL", "BOGUS")
        with pytest.raises(ParameterError, match="BOGUS"):
            Settings()


class TestCheckLogLevel:
    """Validation of logging level names."""

    @pytest.mark.parametrize("level,expected", [("debug", "DEBUG"), (" Warning ", "WARNING")])
    def test_known_levels(self, level, expected):
        """Known names are normalized."""
        assert check_log_level(level) == expected

    @pytest.mark.parametrize("level", ["", "VERBOSE", "10"])
    def test_unknown_levels(self, level):
        """Anything else is a ParameterError."""
        with pytest.raises(ParameterError):
            check_log_level(level)
