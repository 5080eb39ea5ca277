#!/usr/bin/env python3
"""
Run a Q-Borel session script from the command line.
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
