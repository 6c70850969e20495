"""Entry point for the isoblind toolkit command line."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.app import cli


if __name__ == "__main__":
    sys.exit(cli(sys.argv[1:]))
