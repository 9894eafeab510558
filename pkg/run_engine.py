"""
Engine command line.

Usage:
    python run_engine.py classify --input nerve.json --max-dim 3
    python run_engine.py jet --input nerve.json --points 3 --json
    python run_engine.py corpus --seed 1 --output corpus/
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from src.cli.run import main

if __name__ == "__main__":
    sys.exit(main())
