import logging

import pytest

from photonbench.logger import default_logger


@pytest.fixture(autouse=True)
def reset_default_logger():
    """CLI runs switch console mirroring on and may raise the level."""

    yield
    default_logger.write_to_console = False
    default_logger.set_level(logging.INFO)
