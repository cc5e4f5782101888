"""
Configuration settings for the biliaison toolkit
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _window(text: str):
    lo, hi = (int(part) for part in text.split(","))
    return lo, hi


class Config:
    # Coefficient field
    FIELD = os.getenv("BILIAISON_FIELD", "prime")
    PRIME = int(os.getenv("BILIAISON_PRIME", "32003"))

    # Randomness and search
    SEED = int(os.getenv("BILIAISON_SEED", "0"))
    WINDOW = _window(os.getenv("BILIAISON_WINDOW", "-5,10"))
    SEARCH_BOUND = int(os.getenv("BILIAISON_SEARCH_BOUND", "6"))
    MAX_RETRIES = int(os.getenv("BILIAISON_MAX_RETRIES", "10"))

    # Output
    LOG_LEVEL = os.getenv("BILIAISON_LOG_LEVEL", "WARNING")
    FORMAT = os.getenv("BILIAISON_FORMAT", "json")
    JOBS = int(os.getenv("BILIAISON_JOBS", "1"))

    # File Paths
    FIXTURES_PATH = os.getenv("FIXTURES_PATH", "fixtures")
    REPORTS_PATH = os.getenv("REPORTS_PATH", "reports")
