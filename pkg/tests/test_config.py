import logging

import pytest

from nmsem.config import Settings, configure_logging, load_settings


def test_defaults():
    settings = load_settings({})
    assert settings == Settings()
    assert settings.max_exhaustive_worlds == 3
    assert settings.max_lift_atoms == 2


def test_environment_overrides():
    settings = load_settings({"NMSEM_DEFAULT_SAMPLES": "7", "NMSEM_LOG_LEVEL": "debug"})
    assert settings.default_samples == 7
    assert settings.log_level == "debug"


def test_bad_number():
    with pytest.raises(ValueError):
        load_settings({"NMSEM_MAX_KLM_ATOMS": "three"})


def test_replace():
    assert Settings().replace(max_klm_atoms=2).max_klm_atoms == 2


def test_configure_logging():
    configure_logging("info")
    assert logging.getLogger().level == logging.INFO
    configure_logging(logging.WARNING)
    assert logging.getLogger().level == logging.WARNING
