"""
Logging for the orbits app.

Everything logs through the ``orbit_shapes`` logger: a debug file under
``ORBITS['LOG_DIR']`` and a console handler on stderr. stdout is reserved
for result records.
"""

import logging
import os

from .conf import get_setting

LOGGER_NAME = 'orbit_shapes'
FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(LOGGER_NAME)


def _console_handler(formatter):
    console_handler = logging.StreamHandler()
    console_handler.setLevel(get_setting('CONSOLE_LOG_LEVEL'))
    console_handler.setFormatter(formatter)
    return console_handler


def configure_logging():
    """Attach handlers once; later calls are no-ops."""
    if logger.handlers:
        return logger

    logger.setLevel(logging.DEBUG)
    logger.propagate = False
    formatter = logging.Formatter(FORMAT)

    log_dir = str(get_setting('LOG_DIR'))
    log_file = os.path.join(log_dir, 'orbits.log')
    try:
        os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
        logger.addHandler(_console_handler(formatter))
        logger.debug(f"Logger initialized. Log file: {log_file}")
    except OSError as e:
        logger.addHandler(_console_handler(formatter))
        logger.warning(f"Could not create log file, using console only: {e}")
    return logger


def set_console_level(level):
    """Change the level of the stderr handler (used by ``--verbosity``)."""
    configure_logging()
    for handler in logger.handlers:
        if type(handler) is logging.StreamHandler:
            handler.setLevel(level)


configure_logging()
