"""
Tests for configuration module
"""
import importlib

import config
from config import LOGS_DIR, ensure_directories, get_config


def test_get_config():
    """Test configuration retrieval"""
    settings = get_config()

    assert set(settings) == {"engine", "decompose", "memo", "oracle", "cli", "logging"}


def test_ensure_directories():
    """Test directory creation"""
    ensure_directories()

    assert LOGS_DIR.exists()


def test_engine_config():
    """Test isomorphism engine configuration"""
    engine = get_config()["engine"]

    assert engine["reduction"] in ("modular", "pendant")
    assert engine["threads"] >= 1
    assert engine["verify"] is True


def test_memo_config():
    """Test memo table configuration"""
    memo = get_config()["memo"]

    assert memo["enabled"] is True
    assert memo["max_entries"] > 0


def test_cli_config():
    """Test command line defaults"""
    cli = get_config()["cli"]

    assert cli["default_format"] == "edgelist"
    assert cli["profile_sizes"] == sorted(cli["profile_sizes"])


def test_environment_overrides(monkeypatch):
    """Test CW3ISO_* environment variables"""
    monkeypatch.setenv("CW3ISO_THREADS", "4")
    monkeypatch.setenv("CW3ISO_REDUCTION", "pendant")
    monkeypatch.setenv("CW3ISO_LOG", "debug")
    try:
        reloaded = importlib.reload(config)
        settings = reloaded.get_config()
        assert settings["engine"]["threads"] == 4
        assert settings["engine"]["reduction"] == "pendant"
        assert settings["logging"]["handlers"]["default"]["level"] == "DEBUG"
    finally:
        monkeypatch.undo()
        importlib.reload(config)
