import logging
import logging.handlers
import sys
from typing import Optional

PACKAGE_LOGGER = "casimir_media"
LOG_FORMAT = "%(asctime)s %(processName)-10s %(name)s %(levelname)-8s %(message)s"


def verbosity_level(verbose: int) -> int:
    """-v count to a logging level: 0 WARNING, 1 INFO, 2+ DEBUG."""
    if verbose <= 0:
        return logging.WARNING
    if verbose == 1:
        return logging.INFO
    return logging.DEBUG


def configure_logging(level: int = logging.WARNING, logfile: Optional[str] = None) -> logging.Logger:
    """Attach stderr (and optionally rotating file) handlers to the package logger.

    Calling it again replaces the handlers installed by the previous call. Also used as
    the initializer of sweep worker processes.
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(logger.handlers):
        if getattr(handler, "_casimir_media", False):
            logger.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    handlers = [logging.StreamHandler(sys.stderr)]
    if logfile:
        handlers.append(
            logging.handlers.RotatingFileHandler(logfile, "a", 1_000_000, 10, encoding="utf-8")
        )
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._casimir_media = True
        logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger
