"""
Logging configuration.
"""
import logging
import sys

def setup_logger(level=logging.INFO):
    """
    Set up the root logger to output to the console.
    Calling it again only updates the level.
    """
    logger = logging.getLogger()
    logger.setLevel(level)
    if any(getattr(h, "_blendflow", False) for h in logger.handlers):
        return logger
    handler = logging.StreamHandler(sys.stdout)
    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    handler.setFormatter(formatter)
    handler._blendflow = True
    logger.addHandler(handler)
    return logger
