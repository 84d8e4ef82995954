"""Preference-domain structure and exhaustive social choice function search."""

__version__ = "0.1.0"
