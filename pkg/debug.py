import logging
import os
import sys
from datetime import datetime
from typing import Optional

from constants import BenchConfig

LOG_FORMAT = '[%(asctime)s] %(levelname)s %(name)s: %(message)s'
TIME_FORMAT = '%H:%M:%S'


def setup_logging(enable_debug: bool = False, log_dir: Optional[str] = None) -> Optional[str]:
    """
    Route log records: WARNING and above to stderr, everything to a timestamped file in debug mode.

    Returns:
        Path of the debug log file, or None when debug is off
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.setLevel(logging.DEBUG if enable_debug else logging.WARNING)

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.WARNING)
    console.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    root.addHandler(console)

    if not enable_debug:
        return None

    log_dir = log_dir or BenchConfig().LOG_DIR
    os.makedirs(log_dir, exist_ok=True)
    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    log_path = os.path.join(log_dir, f'gsu_debug_{timestamp}.txt')
    file_handler = logging.FileHandler(log_path, encoding='utf-8')
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(logging.Formatter(LOG_FORMAT, TIME_FORMAT))
    root.addHandler(file_handler)
    logging.getLogger(__name__).debug("debug logging to %s", log_path)
    return log_path
