"""On-stack replacement toolkit for a minimal imperative language."""

__version__ = "0.1.0"
