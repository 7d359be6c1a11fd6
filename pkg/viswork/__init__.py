"""
viswork - Visibility polygons under a constrained-workspace model.

This package computes the visibility polygon of a point inside a simple
polygon that is only read, never copied, using a constant number of working
variables (or O(s) of them with divide and conquer), and measures input
accesses and workspace words so the space-time trade-off can be checked
against a full-memory oracle.
"""

__version__ = "0.1.0"
