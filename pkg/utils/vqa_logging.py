import logging.config
import os
from datetime import datetime
from pathlib import Path

from dotenv import find_dotenv, load_dotenv

load_dotenv(find_dotenv())

BASE_DIR = Path(__file__).resolve().parent.parent
LOG_DIR = os.environ.get("ASCVAR_LOG_DIR") or os.path.join(BASE_DIR, "logs")

os.makedirs(LOG_DIR, exist_ok=True)

# DEBUG adds stage boundaries and per-stage COBYLA results
LOG_LEVEL = os.environ.get("ASCVAR_LOG_LEVEL", "INFO").upper()

SIMULATION_LOG_FILE_NAME = f"{datetime.now():%Y_%m_%d}_" + "_simulation"
EXPERIMENT_LOG_FILE_NAME = f"{datetime.now():%Y_%m_%d}_" + "_experiment"

GENERAL_LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "color": {
            "()": "colorlog.ColoredFormatter",
            "format": "%(log_color)s%(asctime)s | %(levelname)s | %(message)s",
            "log_colors": {
                "DEBUG": "cyan",
                "INFO": "white",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red,bg_white",
            },
        },
        "standard": {
            "format": "%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "level": LOG_LEVEL,
            "formatter": "color",
            "stream": "ext://sys.stdout",
        },
        "simulation_file_main": {
            "class": "logging.FileHandler",
            "level": "DEBUG",
            "formatter": "standard",
            "filename": f"{LOG_DIR}/{SIMULATION_LOG_FILE_NAME}.log",
            "mode": "a",
            "encoding": "utf-8",
        },
        "experiment_file_main": {
            "class": "logging.FileHandler",
            "level": "DEBUG",
            "formatter": "standard",
            "filename": f"{LOG_DIR}/{EXPERIMENT_LOG_FILE_NAME}.log",
            "mode": "a",
            "encoding": "utf-8",
        },
    },
    "loggers": {
        "simulation": {
            "handlers": ["console", "simulation_file_main"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "experiment": {
            "handlers": ["console", "experiment_file_main"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}
logging.config.dictConfig(GENERAL_LOGGING_CONFIG)
simulation_logger = logging.getLogger("simulation")
experiment_logger = logging.getLogger("experiment")
