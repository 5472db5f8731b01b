import logging

import pytest

from src.spacing_clust.config import (
    AUTO_PRIM_ENV,
    LOG_LEVEL_ENV,
    THREADS_ENV,
    configure_logging,
    get_settings,
    override_settings,
    reset_settings,
)
from src.spacing_clust.errors import ConfigError
from src.spacing_clust.parallel import map_ordered


def test_defaults():
    settings = get_settings()
    assert 1 <= settings.threads <= 4
    assert settings.log_level == "INFO"
    assert settings.auto_prim_n == 2000
    assert get_settings() is settings


def test_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    monkeypatch.setenv(LOG_LEVEL_ENV, "debug")
    monkeypatch.setenv(AUTO_PRIM_ENV, "500")
    reset_settings()
    settings = get_settings()
    assert (settings.threads, settings.log_level, settings.auto_prim_n) == (3, "DEBUG", 500)


@pytest.mark.parametrize("name, value", [
    (THREADS_ENV, "many"),
    (THREADS_ENV, "0"),
    (LOG_LEVEL_ENV, "LOUD"),
    (AUTO_PRIM_ENV, "-5"),
])
def test_invalid_environment(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    reset_settings()
    with pytest.raises(ConfigError):
        get_settings()


def test_override_settings():
    settings = override_settings(threads=2, log_level="warning")
    assert settings.threads == 2
    assert settings.log_level == "WARNING"
    assert get_settings() is settings
    with pytest.raises(ConfigError):
        override_settings(threads=0)
    with pytest.raises(ConfigError):
        override_settings(log_level="chatty")


def test_configure_logging_level():
    root = logging.getLogger()
    saved_level, saved_handlers = root.level, list(root.handlers)
    try:
        configure_logging("warning")
        assert root.level == logging.WARNING
    finally:
        root.handlers[:] = saved_handlers
        root.setLevel(saved_level)


def test_map_ordered_keeps_input_order():
    assert map_ordered(lambda x: x * x, range(20), workers=4) == [x * x for x in range(20)]
    assert map_ordered(lambda x: x + 1, [1], workers=8) == [2]
    assert map_ordered(lambda x: x, [], workers=2) == []


def test_map_ordered_reraises():
    def boom(x):
        if x == 3:
            raise ValueError("three")
        return x

    with pytest.raises(ValueError, match="three"):
        map_ordered(boom, range(6), workers=3)
