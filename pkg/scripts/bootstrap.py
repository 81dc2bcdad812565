# scripts/bootstrap.py

import logging
import os
import sys

SRC_DIR = os.path.abspath(os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "src"))


def add_src_to_path():
    """
    Make 'src/vos_tracking' importable from scripts without installing the package, e.g.:
        from vos_tracking.commands import cmd_track
    """
    if SRC_DIR not in sys.path:
        sys.path.insert(0, SRC_DIR)


def setup_logging(verbose: bool = False):
    """Console logging; DEBUG adds per-frame and per-cut detail."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
