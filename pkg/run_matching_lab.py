#!/usr/bin/env python3
"""
Run the Stable Matching Lab

Examples:
    python run_matching_lab.py simulate-cost --kind bipartite --n 1000 --reps 100 --seed 42
    python run_matching_lab.py verify --level quick --seed 1
"""
import sys

from src.experiments.cli import main


if __name__ == "__main__":
    sys.exit(main())
