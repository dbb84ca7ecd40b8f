#!/usr/bin/env python3
"""
Runner for the Hamming-weight penalty model toolkit.

Example:
    python run_hamming_penalty.py build --kind qubo --n 3 --r 1 --scale 1 -o data/processed/q1.json
    python run_hamming_penalty.py verify data/processed/q1.json --r 1
    python run_hamming_penalty.py certify --kind qubo --grid --bounds data/raw/qubo_bounds.json
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
SRC_DIR = ROOT / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from hamming_penalty.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
