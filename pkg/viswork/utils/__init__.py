"""Utility functions for logging and helpers."""
