"""
Power Integral Bases in Sextic Fields
Entry point for the command line solver

Run with: python main.py --config configs/example1.json solve
"""

import sys
import os

# Add the project root to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

if __name__ == "__main__":
    from cli import main
    sys.exit(main())
