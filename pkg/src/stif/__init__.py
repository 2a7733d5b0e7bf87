"""Informal-to-formal Indonesian rewriting as low-resource phrase-based translation."""

__version__ = "0.1.0"
