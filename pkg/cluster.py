#!/usr/bin/env python3
"""
Spacing Clust - command-line entry point.

Usage:
    python cluster.py <command> [options]

Example:
    python cluster.py run --input toy.csv --algo minsp --k 3 --L 2 --out-labels labels.csv
"""

import sys

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from src.spacing_clust.cli import main

if __name__ == "__main__":
    sys.exit(main())
