#!/usr/bin/env python3
"""Command-line entry point for qlattice."""

import sys
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.cli import app

if __name__ == "__main__":
    app(prog_name="qlattice")
