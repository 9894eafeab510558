"""Plot the Kan profile of a simplicial set or map document."""

import argparse
import logging
import sys
from pathlib import Path

import matplotlib
matplotlib.use('Agg')  # Non-interactive backend

# Add repo root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.documents import load_value
from src.kan.profile import classify_map, classify_object
from src.simplicial.core import TruncatedSSet
from src.viz.kan_heatmap import plot_kan_profile

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def main() -> int:
    parser = argparse.ArgumentParser(description="Plot a Kan profile heatmap.")
    parser.add_argument("input", type=Path, help="sset or smap document")
    parser.add_argument("--max-dim", type=int, help="Highest dimension scanned")
    parser.add_argument("--output", type=Path, default=Path("figures/kan_profile.png"))
    args = parser.parse_args()

    value = load_value(args.input, expect=['sset', 'smap'])
    if isinstance(value, TruncatedSSet):
        profile = classify_object(value, args.max_dim)
    else:
        profile = classify_map(value, args.max_dim)
    logger.info(f"{profile.subject}: {profile.flags()}")

    args.output.parent.mkdir(parents=True, exist_ok=True)
    plot_kan_profile(profile, save_path=str(args.output))
    return 0


if __name__ == "__main__":
    sys.exit(main())
