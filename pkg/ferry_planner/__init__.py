"""
Joint planning of electric-ferry schedules, on-board batteries and
port-side charging infrastructure.
"""

__version__ = "1.0.0"
