"""Generate the tagged corpus as documents and write its listing."""

import argparse
import logging
import sys
from pathlib import Path

# Add repo root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.corpus import confirm, corpus, corpus_frame
from src.cli.documents import save

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def generate(seed: int, output_dir: Path, verify: bool = False) -> int:
    """
    Write every instance as ``<name>.json`` plus ``corpus.csv``.

    Returns:
        Number of instances whose tags were not confirmed (0 without ``verify``)
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    instances = corpus(seed)
    for inst in instances:
        save(inst.value, output_dir / f"{inst.name}.json")

    listing = corpus_frame(instances)
    failures = 0
    if verify:
        verdicts = [confirm(inst) for inst in instances]
        listing['confirmed'] = [v['confirmed'] for v in verdicts]
        failures = sum(not v['confirmed'] for v in verdicts)
    listing.to_csv(output_dir / 'corpus.csv', index=False)
    logger.info(f"Wrote {len(instances)} documents to {output_dir}")
    logger.info(f"Families:\n{listing['family'].value_counts().to_string()}")
    return failures


def main() -> int:
    parser = argparse.ArgumentParser(description="Generate the tagged corpus.")
    parser.add_argument("--seed", type=int, default=0, help="Generator seed")
    parser.add_argument("--output", type=Path, default=Path("corpus"), help="Output directory")
    parser.add_argument("--verify", action="store_true", help="Confirm tags with the classifiers")
    args = parser.parse_args()

    logger.info("=" * 60)
    logger.info(f"Corpus generation (seed {args.seed})")
    logger.info("=" * 60)
    failures = generate(args.seed, args.output, args.verify)
    if failures:
        logger.error(f"{failures} instances did not match their tags")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
