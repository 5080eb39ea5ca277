"""Configuration settings for the Q-Borel toolkit."""
import os
from typing import Dict, Any

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_LEVEL = os.getenv("QBOREL_LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("QBOREL_LOG_FILE", "")
LOG_FORMAT = os.getenv("QBOREL_LOG_FORMAT", "text")

# Computation limits
DEGREE_BOUND = int(os.getenv("QBOREL_DEGREE_BOUND", "6"))
LIMIT_NODES = int(os.getenv("QBOREL_LIMIT_NODES", "200000"))
WITNESS_MAX_VARIABLES = int(os.getenv("QBOREL_WITNESS_MAX_VARIABLES", "6"))
RECURSION_LIMIT = int(os.getenv("QBOREL_RECURSION_LIMIT", "2000"))
MAX_EXPONENT = int(os.getenv("QBOREL_MAX_EXPONENT", str(2 ** 31 - 1)))
VERIFY_RESULTS = os.getenv(
    "QBOREL_VERIFY_RESULTS", "True"
).lower() in ("true", "1", "t")

# Front end
OUTPUT_FORMAT = os.getenv("QBOREL_OUTPUT_FORMAT", "text")
SEED = int(os.getenv("QBOREL_SEED", "0"))

# Application info
APP_NAME = "qborel toolkit"
APP_VERSION = "1.0.0"
JSON_SCHEMA_VERSION = 1

# Export config as a dictionary
config: Dict[str, Any] = {
    "LOG_LEVEL": LOG_LEVEL,
    "LOG_FILE": LOG_FILE,
    "LOG_FORMAT": LOG_FORMAT,
    "DEGREE_BOUND": DEGREE_BOUND,
    "LIMIT_NODES": LIMIT_NODES,
    "WITNESS_MAX_VARIABLES": WITNESS_MAX_VARIABLES,
    "RECURSION_LIMIT": RECURSION_LIMIT,
    "MAX_EXPONENT": MAX_EXPONENT,
    "VERIFY_RESULTS": VERIFY_RESULTS,
    "OUTPUT_FORMAT": OUTPUT_FORMAT,
    "SEED": SEED,
    "APP_NAME": APP_NAME,
    "APP_VERSION": APP_VERSION,
    "JSON_SCHEMA_VERSION": JSON_SCHEMA_VERSION,
}
