#!/usr/bin/env python3
"""
Entry point for reproducing every worked example - calls `framekit examples`
"""

import sys
from pathlib import Path

# Add the project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

if __name__ == "__main__":
    from framekit.app import main
    sys.exit(main(["examples", *sys.argv[1:]]))
