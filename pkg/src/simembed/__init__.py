"""Toolkit for geometric simultaneous embedding of a tree and a path."""

__version__ = "0.1.0"
