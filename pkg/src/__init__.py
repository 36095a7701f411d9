"""Daisy-chain scheduler - no-wait TSN stream scheduling via interval coloring."""

__version__ = "1.0.0"
