"""Exact arithmetic toolkit for multinorm-one tori."""

__version__ = "0.1.0"
