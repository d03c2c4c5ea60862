import os
import logging
import pytest
from unittest.mock import patch
from hyx.utils.logger import setup_logger, get_logger, set_level
from rich.logging import RichHandler


@pytest.fixture(autouse=True)
def cleanup_loggers():
    """Fixture to clean up loggers after each test."""
    initial_loggers = list(logging.Logger.manager.loggerDict.keys())
    yield
    for name in list(logging.Logger.manager.loggerDict.keys()):
        if name not in initial_loggers:
            del logging.Logger.manager.loggerDict[name]
    set_level("INFO")


def test_setup_logger_defaults():
    """Test setup_logger with default settings (INFO level)."""
    logger = setup_logger("hyx.test_defaults")

    assert isinstance(logger, logging.Logger)
    assert logger.name == "hyx.test_defaults"
    assert logger.level == logging.INFO
    assert len(logger.handlers) == 1
    assert isinstance(logger.handlers[0], RichHandler)
    assert not logger.propagate  # Should not propagate to root


def test_handler_writes_to_stderr():
    """Standard output is reserved for command output."""
    logger = setup_logger("hyx.test_stderr")

    assert logger.handlers[0].console.stderr


def test_setup_logger_custom_level():
    logger = setup_logger("hyx.test_debug", level="DEBUG")

    assert logger.level == logging.DEBUG


def test_setup_logger_env_var_override():
    """Test that LOG_LEVEL env var sets the level when argument is not provided."""
    with patch.dict(os.environ, {"LOG_LEVEL": "ERROR"}, clear=True):
        logger = setup_logger("hyx.test_env")
        assert logger.level == logging.ERROR


def test_unknown_level_falls_back_to_info():
    with patch.dict(os.environ, {"LOG_LEVEL": "chatty"}, clear=True):
        assert setup_logger("hyx.test_unknown_level").level == logging.INFO


def test_get_logger_alias():
    logger_instance = get_logger("hyx.test_alias")

    assert logger_instance.name == "hyx.test_alias"
    assert logger_instance.level == logging.INFO
    assert len(logger_instance.handlers) == 1
    assert isinstance(logger_instance.handlers[0], RichHandler)


def test_logger_is_singleton_for_same_name():
    """Calling setup_logger twice with the same name returns the same configured instance."""
    l1 = setup_logger("hyx.test_singleton", level="INFO")
    l2 = setup_logger("hyx.test_singleton", level="DEBUG")

    assert l1 is l2
    assert len(l1.handlers) == 1
    assert l1.level == logging.INFO


def test_set_level_relevels_hyx_loggers_only():
    ours = setup_logger("hyx.test_relevel")
    foreign = setup_logger("elsewhere.test_relevel")

    set_level("DEBUG")

    assert ours.level == logging.DEBUG
    assert foreign.level == logging.INFO


def test_logger_captures_messages(caplog):
    logger = setup_logger("hyx.test_capture", level="INFO")

    # Temporarily enable propagation for caplog to capture messages
    logger.propagate = True
    try:
        with caplog.at_level(logging.INFO):
            logger.info("This is an info message.")
            logger.debug("This is a debug message.")
    finally:
        logger.propagate = False

    assert "This is an info message." in caplog.text
    assert "This is a debug message." not in caplog.text
