#!/usr/bin/env python3
"""
Run the benchmark examples of the well-balanced A-WENO solver

    python3 run_solver.py run --example 1 --scheme 1
    python3 run_solver.py compare --example 5
    python3 run_solver.py steady --example 4 --scheme 2
    python3 run_solver.py converge --model advection --meshes 40,80,160
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.experiments.cli import main


if __name__ == '__main__':
    sys.exit(main())
