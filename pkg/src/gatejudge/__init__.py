"""Execution-based judging and gated reward computation for code RL."""

__version__ = "0.1.0"
