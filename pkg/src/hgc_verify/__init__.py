"""Exact verification engine for the curves (1 - x^N)(1 - y^N) = lambda x^N y^N."""

__version__ = "0.1.0"
