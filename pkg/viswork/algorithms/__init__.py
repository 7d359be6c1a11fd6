"""Constant-workspace and divide-and-conquer visibility algorithms."""
