"""Bistable biorders and the sequential languages they model."""

__version__ = "0.1.0"
