"""
Configuration settings for the cw3-iso toolkit
"""
import os
from pathlib import Path
from typing import Dict, Any

from dotenv import load_dotenv

load_dotenv()

# Base paths
PROJECT_ROOT = Path(__file__).parent
LOGS_DIR = PROJECT_ROOT / "logs"

# Isomorphism engine
ENGINE_CONFIG = {
    "threads": int(os.getenv("CW3ISO_THREADS", "1")),
    "reduction": os.getenv("CW3ISO_REDUCTION", "modular"),  # modular | pendant
    "verify": True,
}

# Parse-tree construction
DECOMPOSE_CONFIG = {
    "strict_disjointness": True,
    "use_shared_memo": True,
    "search_limit": 7,
}

# Shared decomposition memo table
MEMO_CONFIG = {
    "enabled": True,
    "max_entries": 200_000,
}

# Brute-force oracle limits
ORACLE_CONFIG = {
    "max_iso_n": 12,
    "max_modules_n": 12,
    "max_splits_n": 10,
    "max_cwd_n": 7,
}

# Command line
CLI_CONFIG = {
    "default_format": "edgelist",
    "profile_sizes": [10, 20, 40, 80],
    "profile_repeats": 3,
}

# Logging configuration
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
        },
    },
    "handlers": {
        "default": {
            "level": os.getenv("CW3ISO_LOG", "WARNING").upper(),
            "formatter": "standard",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
        },
        "file": {
            "level": "DEBUG",
            "formatter": "standard",
            "class": "logging.FileHandler",
            "filename": str(LOGS_DIR / "cw3iso.log"),
            "mode": "a",
            "delay": True,
        },
    },
    "loggers": {
        "": {
            "handlers": ["default", "file"],
            "level": "DEBUG",
            "propagate": False
        }
    }
}


def get_config() -> Dict[str, Any]:
    """Get the complete configuration dictionary"""
    return {
        "engine": ENGINE_CONFIG,
        "decompose": DECOMPOSE_CONFIG,
        "memo": MEMO_CONFIG,
        "oracle": ORACLE_CONFIG,
        "cli": CLI_CONFIG,
        "logging": LOGGING_CONFIG,
    }


def ensure_directories():
    """Ensure required directories exist"""
    LOGS_DIR.mkdir(exist_ok=True)
