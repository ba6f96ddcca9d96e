"""
Main entry point for immse-lab.

Runs the default verification experiment through the CLI:
    python main.py
"""

import subprocess
import sys
from pathlib import Path

DEFAULT_EXPERIMENT = Path(__file__).parent / "configs" / "experiments" / "verify_binary.yaml"


def main():
    """Run the default verification experiment."""
    print(f"Running {DEFAULT_EXPERIMENT.name}...\n")
    result = subprocess.run(
        [sys.executable, str(Path(__file__).parent / "cli.py"), "verify", "--config", str(DEFAULT_EXPERIMENT)]
    )
    sys.exit(result.returncode)


if __name__ == "__main__":
    main()
