"""Exact geometry, the read-only polygon store and run orchestration."""
