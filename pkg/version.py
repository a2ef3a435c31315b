"""Version information for the FlipIt simulation lab.

This file contains the version number used across the application:
- CLI --version flag
- summary.json metadata
"""

__version__ = "1.0.0"
__author__ = "FlipIt Lab contributors"
__description__ = "Discrete-time FlipIt simulation lab with QFlip, Greedy and renewal opponents"
