# src/logger/__init__.py

import logging
import os
import sys
from datetime import datetime
from from_root import from_root

# One log file per process, created at import time
LOG_DIR = os.path.join(from_root(), "logs")
LOG_FILE = os.path.join(LOG_DIR, f"lowcon_{datetime.now().strftime('%m_%d_%Y_%H_%M_%S')}.log")
os.makedirs(LOG_DIR, exist_ok=True)

LOG_FORMAT = "[ %(asctime)s ] %(name)s - %(levelname)s - %(message)s"

# Optional console echo, e.g. LOWCON_CONSOLE_LOG=INFO
CONSOLE_LEVEL = os.getenv("LOWCON_CONSOLE_LOG")


def get_logger(name: str = __name__) -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    logger.propagate = False

    if not logger.handlers:
        formatter = logging.Formatter(LOG_FORMAT)

        file_handler = logging.FileHandler(LOG_FILE)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        if CONSOLE_LEVEL:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(CONSOLE_LEVEL.upper())
            console_handler.setFormatter(formatter)
            logger.addHandler(console_handler)

    return logger
