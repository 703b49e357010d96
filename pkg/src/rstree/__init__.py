"""Relative suffix trees: a compressed suffix tree for a target text stored relative to a reference."""

__version__ = "0.1.0"
