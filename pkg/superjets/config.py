import os

DATA_DIR = os.environ.get("SUPERJETS_DATA_DIR", "data")
HISTORY_FILE = os.environ.get("SUPERJETS_HISTORY_FILE", os.path.join(DATA_DIR, "reports.json"))
WORKERS = int(os.environ.get("SUPERJETS_WORKERS", "1"))
LOG_LEVEL = os.environ.get("SUPERJETS_LOG_LEVEL", "WARNING")

# bumped whenever the structured report layout changes
REPORT_SCHEMA_VERSION = "1"
